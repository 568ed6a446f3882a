#include "dnls/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "dnls/conservation.hpp"

namespace dnls {

CArray mode_coefficients(const Field& q) {
    const Grid& g = q.grid;
    const int n = g.n();
    const CArray qh = fft(q) / g.length();
    CArray c = CArray::Zero(n - 1);  // index p + n/2 - 1 for p in (-n/2, n/2)
    for (int k = 0; k < n; ++k) {
        const int p = g.mode(k);
        if (p == -n / 2) continue;
        c[p + n / 2 - 1] = qh[k];
    }
    return c;
}

namespace {

// signed mode of the sorted basis index
inline int sorted_mode(int i, int N) { return i - N / 2; }

cplx coeff(const CArray& c, int n, int p) {
    if (p <= -n / 2 || p >= n / 2) return 0.0;
    return c[p + n / 2 - 1];
}

// left/right resolvent factors; sgn picks the sign of i xi
cplx inv_sqrt(double k, double sgn, double xi) { return 1.0 / std::sqrt(cplx(k, sgn * xi)); }

// (left, right, field) for Lambda/Gamma at either sign of kappa
DenseOperator build_block(const SpectralParam& k, const Field& f, double left_sgn, double right_sgn, double factor) {
    const Grid& g = f.grid;
    const int n = g.n();
    const CArray c = mode_coefficients(f);
    const double dxi = g.dxi();
    DenseOperator T{g, Eigen::MatrixXcd::Zero(n, n)};
    for (int i = 0; i < n; ++i) {
        const double xi_i = sorted_mode(i, n) * dxi;
        const cplx li = inv_sqrt(k.abs, left_sgn, xi_i);
        for (int j = 0; j < n; ++j) {
            const cplx cp = coeff(c, n, sorted_mode(i, n) - sorted_mode(j, n));
            if (cp == 0.0) continue;
            const double xi_j = sorted_mode(j, n) * dxi;
            T.matrix(i, j) = factor * li * cp * inv_sqrt(k.abs, right_sgn, xi_j);
        }
    }
    return T;
}

}  // namespace

DenseOperator build_lambda(const SpectralParam& k, const Field& q) {
    // kappa > 0: (k - d)^{-1/2} q (k + d)^{-1/2}
    // kappa < 0: -Gamma(|kappa|; qbar) = -(k + d)^{-1/2} q (k - d)^{-1/2}
    if (k.sign > 0) return build_block(k, q, -1.0, +1.0, 1.0);
    return build_block(k, q, +1.0, -1.0, -1.0);
}

DenseOperator build_gamma(const SpectralParam& k, const Field& q) {
    const Field qb = q.conj();
    if (k.sign > 0) return build_block(k, qb, +1.0, -1.0, 1.0);
    return build_block(k, qb, -1.0, +1.0, -1.0);
}

double hs_norm(const DenseOperator& T) { return T.matrix.norm(); }

double op_norm(const DenseOperator& T) {
    if (T.matrix.size() == 0) return 0.0;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(T.matrix);
    return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

double hs_integrand(const Field& q, double kappa) {
    const Grid& g = q.grid;
    const CArray qh = fft(q);
    const RArray& xi = g.xi();
    const RArray w = (4.0 + xi.square() / (kappa * kappa)).log() / (4.0 * kappa * kappa + xi.square()).sqrt();
    return (w * qh.abs2()).sum() / g.length();
}

// ---------------------------------------------------------------------------
// banded operator K

namespace {

struct Band {
    int N = 0, w = 0;
    std::vector<cplx> a;  // row i, offset j - i + w
    Band() = default;
    Band(int N_, int w_) : N(N_), w(w_), a(static_cast<size_t>(N_) * (2 * w_ + 1), 0.0) {}
    cplx& at(int i, int j) { return a[static_cast<size_t>(i) * (2 * w + 1) + (j - i + w)]; }
    cplx get(int i, int j) const {
        if (j < i - w || j > i + w || j < 0 || j >= N) return 0.0;
        return a[static_cast<size_t>(i) * (2 * w + 1) + (j - i + w)];
    }
};

struct KData {
    Band K;
    cplx trace_exact = 0.0;
    int b = 0;
};

struct QBand {
    std::vector<cplx> c;  // p in [-b, b] at index p + b
    int b = 0;
    bool zero = true;
};

QBand q_band(const Field& q, double coeff_tol) {
    const int n = q.grid.n();
    const CArray c = mode_coefficients(q);
    QBand out;
    const double top = c.abs().maxCoeff();
    if (!(top > 0)) return out;
    out.zero = false;
    int b = 0;
    for (int p = -n / 2 + 1; p < n / 2; ++p)
        if (std::abs(coeff(c, n, p)) > coeff_tol * top) b = std::max(b, std::abs(p));
    out.b = b;
    out.c.resize(2 * b + 1);
    for (int p = -b; p <= b; ++p) out.c[p + b] = coeff(c, n, p);
    return out;
}

KData build_K(const SpectralParam& k, const Grid& g, const QBand& qb, int N) {
    const int b = qb.b;
    const int w = 2 * b;
    const double L = g.length();
    const double dxi = g.dxi();
    const double s = k.sign;
    const double kk = k.abs;
    std::vector<cplx> u(N), v(N);
    for (int i = 0; i < N; ++i) {
        const double xi = sorted_mode(i, N) * dxi;
        u[i] = 1.0 / std::sqrt(cplx(kk, -s * xi));
        v[i] = 1.0 / cplx(kk, s * xi);
    }
    auto c = [&](int p) { return qb.c[p + b]; };
    auto d = [&](int p) { return std::conj(qb.c[-p + b]); };
    KData out;
    out.b = b;
    out.K = Band(N, w);
    const cplx ik = kI * k.kappa;
    for (int i = 0; i < N; ++i) {
        for (int j = std::max(0, i - w); j <= std::min(N - 1, i + w); ++j) {
            const int lo = std::max({0, i - b, j - b});
            const int hi = std::min({N - 1, i + b, j + b});
            cplx acc = 0.0;
            for (int m = lo; m <= hi; ++m) acc += c(i - m) * v[m] * d(m - j);
            out.K.at(i, j) = ik * u[i] * u[j] * acc;
        }
    }
    // trace over all modes of the periodic problem
    const double cth = 1.0 / std::tanh(kk * L / 2);
    cplx tr = 0.0;
    for (int p = -b; p <= b; ++p) tr += std::norm(c(p)) * L * cth / cplx(2 * kk, -s * p * dxi);
    out.trace_exact = ik * tr;
    return out;
}

cplx band_trace(const Band& B) {
    cplx t = 0.0;
    for (int i = 0; i < B.N; ++i) t += B.get(i, i);
    return t;
}

struct LogDet {
    cplx log_det = 0.0;
    cplx trace_gap = 0.0;
    bool ok = true;
};

// log det(1 - K) on the band, trace-restored
LogDet band_log_det(const KData& kd) {
    const Band& K = kd.K;
    const int N = K.N, w = K.w;
    const int ldab = 3 * w + 1;
    std::vector<cplx> ab(static_cast<size_t>(ldab) * N, 0.0);
    for (int j = 0; j < N; ++j)
        for (int i = std::max(0, j - w); i <= std::min(N - 1, j + w); ++i) {
            const cplx val = (i == j ? 1.0 : 0.0) - K.get(i, j);
            ab[static_cast<size_t>(j) * ldab + (2 * w + i - j)] = val;
        }
    std::vector<lapack_int> ipiv(N);
    const lapack_int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, N, N, w, w, ab.data(), ldab, ipiv.data());
    LogDet out;
    if (info < 0) throw std::runtime_error("det_a: zgbtrf argument error");
    if (info > 0) {
        out.ok = false;
        return out;
    }
    cplx ld = 0.0;
    int swaps = 0;
    for (int j = 0; j < N; ++j) {
        const cplx ujj = ab[static_cast<size_t>(j) * ldab + 2 * w];
        if (std::abs(ujj) < 1e-300) {
            out.ok = false;
            return out;
        }
        ld += std::log(ujj);
        if (ipiv[j] != j + 1) ++swaps;
    }
    ld += cplx(0.0, kPi * (swaps % 2));
    out.trace_gap = kd.trace_exact - band_trace(K);
    // log det(1 - K) = -tr K - ...: the missing part of -tr K is -(gap)
    out.log_det = ld - out.trace_gap;
    return out;
}

int next_pow2(double v) {
    int p = 1;
    while (p < v && p < (1 << 30)) p <<= 1;
    return p;
}

// the raw truncation error is about (k L / N)^3; this keeps the extrapolated
// value near 1e-11 for smooth data
int auto_basis(const SpectralParam& k, const Grid& g, double per_mode = 128.0) {
    const double want = std::max<double>(g.n(), per_mode * k.abs * g.length() / kPi);
    return std::min(next_pow2(want), 1 << 18);
}

double rounding_floor(int N, bool richardson) {
    const double u = std::ldexp(1.0, -53);
    return N * u * (richardson ? 9.0 / 7.0 : 1.0);
}

cplx nearest_branch(cplx value, cplx target) {
    const double turns = std::round((target.imag() - value.imag()) / (2 * kPi));
    return value + cplx(0.0, 2 * kPi * turns);
}

void check_cost(int N, int w) {
    const double cost = static_cast<double>(N) * (2.0 * w + 1) * (2.0 * w + 1);
    if (cost > 4e10)
        throw std::runtime_error("det_a: banded basis too expensive (N=" + std::to_string(N) + ", bandwidth=" +
                                 std::to_string(w) + "); use the jost route for slowly decaying data");
}

}  // namespace

DetReport det_a(const SpectralParam& k, const Field& q, const DetOptions& opt) {
    const QBand qb = q_band(q, opt.coeff_tol);
    DetReport r;
    if (qb.zero) return r;
    const int N = opt.basis > 0 ? opt.basis : auto_basis(k, q.grid);
    if (N < 2 * (2 * qb.b + 1)) throw std::invalid_argument("det_a: basis smaller than the band of q");
    check_cost(N, 2 * qb.b);
    const KData kd = build_K(k, q.grid, qb, N);
    const LogDet full = band_log_det(kd);
    r.basis = N;
    r.bandwidth = kd.K.w;
    // every pivot of 1 - K carries an O(u) absolute rounding and their logs add up
    r.rounding = rounding_floor(N, opt.richardson);
    r.band_tail = std::abs(full.trace_gap);
    if (!full.ok) {
        r.nonsingular = false;
        r.a = 0.0;
        return r;
    }
    cplx ld = full.log_det;
    const int min_basis = 2 * (2 * qb.b + 1);
    if (opt.richardson && N / 2 >= min_basis) {
        const LogDet half = band_log_det(build_K(k, q.grid, qb, N / 2));
        if (half.ok) {
            const cplx lh = nearest_branch(half.log_det, full.log_det);
            ld = (8.0 * full.log_det - lh) / 7.0;
            r.error = std::abs(full.log_det - lh) / 7.0;
            // a third level estimates the error of the extrapolated value itself
            if (N / 4 >= min_basis) {
                const LogDet quarter = band_log_det(build_K(k, q.grid, qb, N / 4));
                if (quarter.ok) {
                    const cplx lq = nearest_branch(quarter.log_det, full.log_det);
                    r.error = std::abs(ld - (8.0 * lh - lq) / 7.0);
                }
            }
        }
    }
    r.log_a = ld;
    r.a = std::exp(ld);
    return r;
}

cplx A_expansion(const Field& q, double kappa) {
    return cplx(0.0, mass(q) / 2) + hamiltonian(q) / (4 * kappa) - cplx(0.0, h2(q) / (8 * kappa * kappa));
}

namespace {

cplx predicted_A(const Field& q, double kappa) {
    if (kappa > 0) return A_expansion(q, kappa);
    return -std::conj(A_expansion(q, -kappa));
}

}  // namespace

AValue A_value(const SpectralParam& k, const Field& q, ARoute route, const DetOptions& opt) {
    AValue out;
    if (route == ARoute::jost) {
        const JostSolution js = solve_jost(k, q);
        bool wind = false;
        out.A = -double(k.sign) * log_a_continued(js, &wind);
        out.winding = wind;
        out.error = js.w_spread;
        return out;
    }
    const DetReport d0 = det_a(k, q, opt);
    if (!d0.nonsingular) throw std::runtime_error("A_value: 1 - i kappa Lambda Gamma is singular");
    if (d0.basis == 0) return out;  // q = 0
    const double s = k.sign;
    const double H = std::abs(hamiltonian(q)), H2 = std::abs(h2(q));
    // climb until the expansion pins the branch
    std::vector<double> ladder{k.kappa};
    while (ladder.size() < 16) {
        const double kk = std::abs(ladder.back());
        if (H / (4 * kk) + H2 / (8 * kk * kk) < 0.25) break;
        ladder.push_back(ladder.back() * 2);
    }
    DetOptions coarse = opt;
    coarse.richardson = false;
    coarse.basis = 0;
    cplx prev = 0.0;
    bool wind = false;
    for (int j = static_cast<int>(ladder.size()) - 1; j >= 0; --j) {
        const SpectralParam kj = spectral(ladder[j]);
        cplx raw;
        if (j == 0) {
            raw = -s * d0.log_a;
        } else {
            DetOptions o = coarse;
            o.basis = std::min(auto_basis(kj, q.grid, 8.0), 1 << 16);
            const DetReport dj = det_a(kj, q, o);
            if (!dj.nonsingular) throw std::runtime_error("A_value: singular determinant on the branch ladder");
            raw = -s * dj.log_a;
        }
        const cplx target = j == static_cast<int>(ladder.size()) - 1 ? predicted_A(q, ladder[j]) : prev;
        const cplx v = nearest_branch(raw, target);
        if (std::abs(v.imag() - target.imag()) > kPi / 2) wind = true;
        prev = v;
    }
    out.A = prev;
    out.error = d0.error;
    out.rounding = d0.rounding;
    out.winding = wind;
    out.ladder_steps = static_cast<int>(ladder.size()) - 1;
    return out;
}

// ---------------------------------------------------------------------------
// trace series

namespace {

Band band_mul(const Band& A, const Band& B) {
    const int N = A.N;
    const int w = std::min(N - 1, A.w + B.w);
    Band C(N, w);
    for (int i = 0; i < N; ++i)
        for (int m = std::max(0, i - A.w); m <= std::min(N - 1, i + A.w); ++m) {
            const cplx aim = A.get(i, m);
            if (aim == 0.0) continue;
            for (int j = std::max(0, m - B.w); j <= std::min(N - 1, m + B.w); ++j) C.at(i, j) += aim * B.get(m, j);
        }
    return C;
}

// drop outer diagonals below rel * max |entry|
Band trim(const Band& A, double rel) {
    double top = 0.0;
    for (const cplx& z : A.a) top = std::max(top, std::abs(z));
    int keep = 0;
    for (int off = A.w; off >= 0; --off) {
        double m = 0.0;
        for (int i = 0; i < A.N; ++i) m = std::max({m, std::abs(A.get(i, i + off)), std::abs(A.get(i, i - off))});
        if (m > rel * top) {
            keep = off;
            break;
        }
    }
    if (keep == A.w) return A;
    Band B(A.N, keep);
    for (int i = 0; i < A.N; ++i)
        for (int j = std::max(0, i - keep); j <= std::min(A.N - 1, i + keep); ++j) B.at(i, j) = A.get(i, j);
    return B;
}

// tr(AB)
cplx trace_product(const Band& A, const Band& B) {
    cplx t = 0.0;
    for (int i = 0; i < A.N; ++i)
        for (int j = std::max(0, i - A.w); j <= std::min(A.N - 1, i + A.w); ++j) t += A.get(i, j) * B.get(j, i);
    return t;
}

struct SeriesSum {
    cplx sum = 0.0;
    double tail = 0.0;
    double rho = 0.0;
    int terms = 0;
    bool convergent = true;
};

double hs_band(const Band& K) {
    double s = 0.0;
    for (const cplx& z : K.a) s += std::norm(z);
    return std::sqrt(s);
}

double rho_bound(const Band& K) {
    std::vector<double> col(K.N, 0.0);
    double row_max = 0.0;
    for (int i = 0; i < K.N; ++i) {
        double r = 0.0;
        for (int j = std::max(0, i - K.w); j <= std::min(K.N - 1, i + K.w); ++j) {
            const double a = std::abs(K.get(i, j));
            r += a;
            col[j] += a;
        }
        row_max = std::max(row_max, r);
    }
    const double col_max = *std::max_element(col.begin(), col.end());
    return std::min(hs_band(K), std::sqrt(row_max * col_max));
}

double tail_of(double hs2, double rho, int lmax) {
    if (rho >= 1.0) return std::numeric_limits<double>::infinity();
    return hs2 * std::pow(rho, lmax - 1) / ((lmax + 1) * (1.0 - rho));
}

SeriesSum series_sum(const KData& kd, int lmax) {
    SeriesSum out;
    const Band& K = kd.K;
    const double hs = hs_band(K);
    out.rho = rho_bound(K);
    out.convergent = out.rho < 1.0;
    out.tail = tail_of(hs * hs, out.rho, lmax);
    // powers P_1 .. P_h with h = ceil(lmax/2); tr K^l = tr(P_a P_b), a + b = l
    const int h = (lmax + 1) / 2;
    std::vector<Band> P;
    P.push_back(K);
    for (int a = 2; a <= h; ++a) P.push_back(trim(band_mul(P.back(), K), 1e-18));
    for (int l = 1; l <= lmax; ++l) {
        cplx tr;
        if (l == 1) {
            tr = kd.trace_exact;  // restored trace
        } else {
            const int a = (l + 1) / 2, b = l / 2;
            tr = trace_product(P[a - 1], P[b - 1]);
        }
        out.sum += tr / double(l);
    }
    out.terms = lmax;
    return out;
}

}  // namespace

SeriesResult A_series(const SpectralParam& k, const Field& q, int lmax, double tail_target, const DetOptions& opt) {
    SeriesResult r;
    const QBand qb = q_band(q, opt.coeff_tol);
    if (qb.zero) return r;
    const int N = opt.basis > 0 ? opt.basis : auto_basis(k, q.grid);
    check_cost(N, 2 * qb.b);
    const KData kd = build_K(k, q.grid, qb, N);
    const bool rich = opt.richardson && N / 2 >= 2 * (2 * qb.b + 1);
    KData kh;
    if (rich) kh = build_K(k, q.grid, qb, N / 2);
    const double rho = std::max(rho_bound(kd.K), rich ? rho_bound(kh.K) : 0.0);
    r.rho = rho;
    if (rho >= 1.0) {
        r.convergent = false;
        r.tail_bound = std::numeric_limits<double>::infinity();
        if (lmax == 0) lmax = 64;
    }
    if (lmax == 0) {
        // |A| is roughly bounded by hs^2/(1 - rho); aim the tail at that scale
        const double hs = std::max(hs_band(kd.K), rich ? hs_band(kh.K) : 0.0);
        const double scale = std::max(1.0, hs * hs / (1.0 - rho));
        lmax = 1;
        while (lmax < 400 && tail_of(hs * hs, rho, lmax) > tail_target * scale) ++lmax;
    }
    const SeriesSum full = series_sum(kd, lmax);
    cplx sum = full.sum;
    double tail = full.tail;
    if (rich) {
        const SeriesSum half = series_sum(kh, lmax);
        sum = (8.0 * full.sum - half.sum) / 7.0;
        tail = (8.0 * full.tail + half.tail) / 7.0;
        r.error = std::abs(full.sum - half.sum) / 7.0;
    }
    r.A = double(k.sign) * sum;
    r.tail_bound = r.convergent ? tail : std::numeric_limits<double>::infinity();
    r.terms = lmax;
    r.rounding = rounding_floor(N, rich);
    return r;
}

Report asymptotic_residual(const Field& q, const std::vector<double>& kappas, ARoute route) {
    Report rep;
    rep.scenario = "asymptotic_residual";
    rep.param("route", route == ARoute::jost ? "jost" : "fredholm");
    Table& t = rep.table("expansion", {"kappa", "re_A", "im_A", "residual", "error_estimate"});
    std::vector<double> lk, lr;
    bool any_winding = false;
    for (double kap : kappas) {
        const SpectralParam k = spectral(kap);
        const AValue a = A_value(k, q, route);
        any_winding = any_winding || a.winding;
        const double res = std::abs(a.A - predicted_A(q, kap));
        t.rows.push_back({kap, a.A.real(), a.A.imag(), res, a.error});
        if (res > 0) {
            lk.push_back(std::log(std::abs(kap)));
            lr.push_back(std::log(res));
        }
    }
    rep.holds("branch_unambiguous", !any_winding, "log det branch by continuity from large kappa");
    if (lk.size() < 2) {
        rep.notes.push_back("residuals vanish identically; decay exponent not defined");
        rep.scalar("decay_exponent", std::numeric_limits<double>::infinity());
        return rep;
    }
    // least-squares slope of log residual against log kappa
    const double mk = std::accumulate(lk.begin(), lk.end(), 0.0) / lk.size();
    const double mr = std::accumulate(lr.begin(), lr.end(), 0.0) / lr.size();
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < lk.size(); ++i) {
        sxx += (lk[i] - mk) * (lk[i] - mk);
        sxy += (lk[i] - mk) * (lr[i] - mr);
    }
    const double exponent = -sxy / sxx;
    rep.scalar("decay_exponent", exponent);
    rep.at_least("decay_exponent", exponent, 2.8, "A - (iM/2 + H/(4k) - iH2/(8k^2)) = O(k^-3)");
    return rep;
}

// ---------------------------------------------------------------------------
// scaling

Field rescale(const Field& q, double lambda) {
    if (!(lambda > 0)) throw std::invalid_argument("rescale: lambda must be positive");
    const Grid g2 = make_grid(q.grid.n(), q.grid.length() / lambda);
    // x'_j = x_j / lambda, so sqrt(lambda) q(lambda x'_j) = sqrt(lambda) q_j
    return Field(g2, std::sqrt(lambda) * q.v);
}

double goodness(const Field& q, double sigma) {
    const Grid& g = q.grid;
    const CArray qh = fft(q);
    const RArray& xi = g.xi();
    const RArray w = xi.abs().pow(2 * sigma) / (4.0 + xi.square()).pow(sigma);
    return (w * qh.abs2()).sum() / g.length();
}

GoodRescaling rescale_to_good(const std::vector<Field>& Q, double delta, double sigma, int max_halvings) {
    if (Q.empty()) throw std::invalid_argument("rescale_to_good: empty set");
    if (!(delta > 0)) throw std::invalid_argument("rescale_to_good: delta must be positive");
    GoodRescaling out;
    double lambda = 1.0;
    for (int j = 0; j <= max_halvings; ++j, lambda /= 2) {
        std::vector<Field> m;
        double worst = 0.0;
        for (const auto& q : Q) {
            m.push_back(rescale(q, lambda));
            worst = std::max(worst, goodness(m.back(), sigma));
        }
        if (worst <= delta * delta) {
            out.lambda = lambda;
            out.members = std::move(m);
            out.worst = worst;
            return out;
        }
    }
    throw std::runtime_error("rescale_to_good: no admissible lambda within the halving budget");
}

}  // namespace dnls
