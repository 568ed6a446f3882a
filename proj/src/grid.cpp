#include "dnls/grid.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace dnls {

namespace {

// Plans are created once per (n, sign) and executed with the new-array
// interface, which FFTW documents as thread-safe.
fftw_plan get_plan(int n, int sign) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, fftw_plan> plans;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    auto* in = fftw_alloc_complex(n);
    auto* out = fftw_alloc_complex(n);
    fftw_plan p = fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans.emplace(key, p);
    return p;
}

void raw_fft(const CArray& in, CArray& out, int sign) {
    const int n = static_cast<int>(in.size());
    out.resize(n);
    CArray tmp = in;  // fftw_execute_dft takes a non-const input
    fftw_execute_dft(get_plan(n, sign), reinterpret_cast<fftw_complex*>(tmp.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int n, double length) {
    if (!is_pow2(n)) throw std::invalid_argument("grid: n=" + std::to_string(n) + " is not a power of two");
    if (!(length > 0.0)) throw std::invalid_argument("grid: length must be positive");
    auto d = std::make_shared<Data>();
    d->n = n;
    d->length = length;
    const double dx = length / n;
    d->x.resize(n);
    d->xi.resize(n);
    for (int j = 0; j < n; ++j) {
        d->x[j] = -0.5 * length + j * dx;
        const int m = j < n / 2 ? j : j - n;
        d->xi[j] = 2.0 * kPi * m / length;
    }
    d_ = std::move(d);
}

bool Grid::same_as(const Grid& o) const {
    if (d_ == o.d_) return true;
    if (!d_ || !o.d_) return false;
    return d_->n == o.d_->n && d_->length == o.d_->length;
}

Grid make_grid(int n, double length) {
    if (n < 64 || n > (1 << 16)) {
        if (!is_pow2(n)) throw std::invalid_argument("grid: n=" + std::to_string(n) + " is not a power of two");
        throw std::invalid_argument("grid: n must lie in [64, 65536]");
    }
    return Grid(n, length);
}

Field::Field(Grid g, CArray values) : grid(std::move(g)), v(std::move(values)) {
    if (v.size() != grid.n()) throw std::invalid_argument("field: size does not match grid");
}

Field zeros_like(const Field& f) { return Field(f.grid); }

Field sample(const Grid& g, const std::function<cplx(double)>& fn) {
    CArray v(g.n());
    for (int j = 0; j < g.n(); ++j) v[j] = fn(g.x()[j]);
    return Field(g, std::move(v));
}

CArray fft(const Field& f) {
    CArray out;
    raw_fft(f.v, out, FFTW_FORWARD);
    const double dx = f.grid.dx();
    // x_0 = -L/2 contributes (-1)^k
    for (int k = 0; k < out.size(); ++k) out[k] *= (k % 2 == 0 ? dx : -dx);
    return out;
}

Field ifft(const Grid& g, const CArray& spectrum) {
    CArray s = spectrum;
    for (int k = 1; k < s.size(); k += 2) s[k] = -s[k];
    CArray out;
    raw_fft(s, out, FFTW_BACKWARD);
    out /= g.length();
    return Field(g, std::move(out));
}

CArray symbol_array(const Grid& g, const MultiplierSpec& m) {
    CArray s(g.n());
    for (int k = 0; k < g.n(); ++k) {
        s[k] = m.symbol(g.xi()[k]);
        if (!std::isfinite(s[k].real()) || !std::isfinite(s[k].imag()))
            throw std::domain_error("multiplier '" + m.name + "' is not finite at xi=" +
                                    std::to_string(g.xi()[k]));
    }
    return s;
}

Field apply_multiplier(const MultiplierSpec& m, const Field& f) {
    return apply_symbol(symbol_array(f.grid, m), f);
}

Field apply_symbol(const CArray& symbol, const Field& f) {
    CArray h;
    raw_fft(f.v, h, FFTW_FORWARD);
    h *= symbol;
    CArray out;
    raw_fft(h, out, FFTW_BACKWARD);
    out /= static_cast<double>(f.grid.n());
    return Field(f.grid, std::move(out));
}

CArray deriv_symbol(const Grid& g, int order) {
    CArray s(g.n());
    for (int k = 0; k < g.n(); ++k) s[k] = std::pow(kI * g.xi()[k], order);
    if (order != 0) s[g.nyquist()] = 0.0;
    return s;
}

CArray resolvent_symbol(const Grid& g, cplx a, int sign) {
    CArray s(g.n());
    for (int k = 0; k < g.n(); ++k) s[k] = 1.0 / (a + double(sign) * kI * g.xi()[k]);
    return s;
}

Field deriv(const Field& f, int order) { return apply_symbol(deriv_symbol(f.grid, order), f); }

Field antiderivative(const Field& f) {
    const Grid& g = f.grid;
    const int n = g.n();
    CArray h;
    raw_fft(f.v, h, FFTW_FORWARD);
    const cplx mean = h[0] / double(n);
    h[0] = 0.0;
    for (int k = 1; k < n; ++k) h[k] = (k == g.nyquist()) ? cplx(0.0) : h[k] / (kI * g.xi()[k]);
    CArray p;
    raw_fft(h, p, FFTW_BACKWARD);
    p /= double(n);
    CArray out(n);
    for (int j = 0; j < n; ++j) out[j] = mean * (g.x()[j] + 0.5 * g.length()) + p[j] - p[0];
    return Field(g, std::move(out));
}

Field translate(const Field& f, double y) {
    CArray s(f.grid.n());
    for (int k = 0; k < s.size(); ++k) s[k] = std::exp(-kI * f.grid.xi()[k] * y);
    s[f.grid.nyquist()] = std::cos(f.grid.xi()[f.grid.nyquist()] * y);
    return apply_symbol(s, f);
}

CArray evaluate_at(const Field& f, const RArray& points) {
    const Grid& g = f.grid;
    CArray h = fft(f);
    h[g.nyquist()] *= 0.5;  // split Nyquist symmetrically
    CArray out = CArray::Zero(points.size());
    for (int i = 0; i < points.size(); ++i) {
        cplx acc = 0.0;
        for (int k = 0; k < g.n(); ++k) {
            acc += h[k] * std::exp(kI * g.xi()[k] * points[i]);
            if (k == g.nyquist()) acc += h[k] * std::exp(-kI * g.xi()[k] * points[i]);
        }
        out[i] = acc / g.length();
    }
    return out;
}

Field resample(const Field& f, int n) {
    const Grid g = make_grid(n, f.grid.length());
    const int m = f.grid.n();
    const CArray h = fft(f);
    CArray r = CArray::Zero(n);
    const int keep = std::min(m, n) / 2;
    for (int k = 0; k < keep; ++k) r[k] = h[k];
    for (int k = 1; k < keep; ++k) r[n - k] = h[m - k];
    return ifft(g, r);
}

Field cubic_dealiased(const Field& q) {
    const int n = q.grid.n();
    const int m = 2 * n;
    CArray h;
    raw_fft(q.v, h, FFTW_FORWARD);
    CArray hp = CArray::Zero(m);
    for (int k = 0; k < n / 2; ++k) hp[k] = h[k];
    for (int k = n / 2 + 1; k < n; ++k) hp[k + n] = h[k];
    CArray qp;
    raw_fft(hp, qp, FFTW_BACKWARD);
    qp /= double(n);
    CArray c = qp.abs2() * qp;
    CArray ch;
    raw_fft(c, ch, FFTW_FORWARD);
    CArray r = CArray::Zero(n);
    for (int k = 0; k < n / 2; ++k) r[k] = ch[k];
    for (int k = n / 2 + 1; k < n; ++k) r[k] = ch[k + n];
    CArray out;
    raw_fft(r, out, FFTW_BACKWARD);
    out /= double(m);
    return Field(q.grid, std::move(out));
}

double phi_cutoff(double xi) {
    const double a = std::abs(xi);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    const double u = a - 1.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

std::vector<double> lp_dyadics(const Grid& g) {
    const double lo = std::exp2(std::floor(std::log2(g.dxi())));
    const double hi = std::exp2(std::ceil(std::log2(g.xi_max())));
    std::vector<double> out;
    for (double N = lo; N <= hi * 1.0000001; N *= 2.0) out.push_back(N);
    return out;
}

Field littlewood_paley(const Field& f, double N) {
    const auto ds = lp_dyadics(f.grid);
    const double e = std::log2(N);
    if (std::abs(e - std::round(e)) > 1e-12) throw std::invalid_argument("littlewood_paley: N must be a power of two");
    if (N < ds.front() * 0.999 || N > ds.back() * 1.001)
        throw std::invalid_argument("littlewood_paley: N outside the resolvable band");
    MultiplierSpec m{[N](double xi) { return cplx(phi_cutoff(xi / N) - phi_cutoff(2.0 * xi / N)); }, "P_N"};
    return apply_multiplier(m, f);
}

Field lp_low(const Field& f, double N0) {
    MultiplierSpec m{[N0](double xi) { return cplx(phi_cutoff(2.0 * xi / N0)); }, "P_low"};
    return apply_multiplier(m, f);
}

double sobolev_norm(const Field& f, double s, double kappa) {
    const CArray h = fft(f);
    const RArray& xi = f.grid.xi();
    double acc = 0.0;
    for (int k = 0; k < h.size(); ++k) acc += std::pow(4.0 * kappa * kappa + xi[k] * xi[k], s) * std::norm(h[k]);
    return std::sqrt(acc / f.grid.length());
}

double l2_norm(const Field& f) { return std::sqrt(f.v.abs2().sum() * f.grid.dx()); }

cplx integral(const Field& f) { return f.v.sum() * f.grid.dx(); }
cplx integral(const Grid& g, const CArray& values) { return values.sum() * g.dx(); }

double boundary_tail(const Field& f, double frac) {
    const int n = f.grid.n();
    const int w = std::max(1, static_cast<int>(std::lround(frac * n)));
    const RArray a = f.v.abs();
    const double top = a.maxCoeff();
    if (top == 0.0) return 0.0;
    const double edge = std::max(a.head(w).maxCoeff(), a.tail(w).maxCoeff());
    return edge / top;
}

void require_boundary_decay(const Field& f, double tol, const std::string& what) {
    const double t = boundary_tail(f);
    if (t > tol)
        throw std::runtime_error(what + ": boundary tail " + std::to_string(t) + " exceeds " + std::to_string(tol) +
                                 " (enlarge the box)");
}

}  // namespace dnls
