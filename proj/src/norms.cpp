#include "dnls/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dnls/conservation.hpp"
#include "dnls/exact_solutions.hpp"

namespace dnls {

double psi(double x) { return std::sqrt(1.0 / std::cosh(x / 99.0)); }

namespace {

// psi(x)^power without overflow far out: sech(y)^(power/2), y = x/99
double psi_pow(double x, int power) {
    const double y = std::abs(x) / 99.0;
    const double sech = 2.0 * std::exp(-y) / (1.0 + std::exp(-2.0 * y));
    return std::pow(sech, 0.5 * power);
}

double sech_pow(double x, int power) {
    const double y = std::abs(x);
    return std::pow(2.0 * std::exp(-y) / (1.0 + std::exp(-2.0 * y)), power);
}

// spectral weight for ||f / sqrt(4k^2 - d^2)||^2_{H^{s+1}}
RArray local_symbol(const Grid& g, double kappa, double s) {
    const RArray xi2 = g.xi().square();
    return (4.0 + xi2).pow(s + 1.0) / (4.0 * kappa * kappa + xi2);
}

double weighted_sq(const CArray& values, const Grid& g, const RArray& sym) {
    const CArray h = fft(Field(g, values));
    return (sym * h.abs2()).sum() / g.length();
}

void check_window(const Trajectory& traj, double t0, double t1) {
    if (traj.times.size() < 2) throw std::invalid_argument("x_norm: trajectory needs at least 2 snapshots");
    const auto [lo, hi] = std::minmax_element(traj.times.begin(), traj.times.end());
    const double tol = 1e-9 * std::max(1.0, t1 - t0);
    if (*lo > t0 + tol || *hi < t1 - tol)
        throw std::invalid_argument("x_norm: trajectory covers [" + fmt(*lo) + ", " + fmt(*hi) +
                                    "], shorter than the requested window [" + fmt(t0) + ", " + fmt(t1) + "]");
}

// int over [t0, t1] of profile(mu, t) dt, trapezoid over the snapshots inside
std::vector<double> time_integrated_profile(const Trajectory& traj, double kappa, double s, double t0, double t1,
                                            const std::vector<double>& mus) {
    check_window(traj, t0, t1);
    std::vector<double> acc(mus.size(), 0.0);
    std::vector<double> prev;
    double tprev = 0.0;
    bool have = false;
    for (size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        if (t < t0 - 1e-12 || t > t1 + 1e-12) continue;
        std::vector<double> cur = localized_profile(traj.fields[i], kappa, s, mus);
        if (have)
            for (size_t m = 0; m < mus.size(); ++m) acc[m] += 0.5 * (t - tprev) * (cur[m] + prev[m]);
        prev = std::move(cur);
        tprev = t;
        have = true;
    }
    return acc;
}

std::vector<double> box_points(const Grid& g, double spacing) {
    std::vector<double> out;
    const double half = 0.5 * g.length();
    for (double h = -std::floor(half / spacing) * spacing; h < half; h += spacing) out.push_back(h);
    return out;
}

double exp_weighted_sup(const std::vector<double>& mus, const std::vector<double>& vals,
                        const std::vector<double>& hs, double spacing) {
    double best = 0.0;
    for (double h : hs) {
        double acc = 0.0;
        for (size_t m = 0; m < mus.size(); ++m) acc += vals[m] * std::exp(-std::abs(h - mus[m]) / 200.0);
        best = std::max(best, acc * spacing);
    }
    return best;
}

}  // namespace

WeightProfile make_weight(const Grid& g, double mu, int power, WeightKind kind) {
    if (power < 1 || power > 24) throw std::invalid_argument("make_weight: power must lie in [1, 24]");
    WeightProfile w;
    w.kind = kind;
    w.mu = mu;
    w.power = power;
    w.samples = sample(g, [&](double x) {
        return cplx(kind == WeightKind::psi ? psi_pow(x - mu, power) : sech_pow(x - mu, power));
    });
    return w;
}

double psi_integral(double spacing, double x) {
    if (!(spacing > 0)) throw std::invalid_argument("psi_integral: spacing must be positive");
    // psi^24 = sech^12(./99) is below 1e-300 beyond 99*60
    const double reach = 99.0 * 60.0;
    const long jmax = static_cast<long>(std::ceil(reach / spacing));
    double acc = 0.0;
    for (long j = -jmax; j <= jmax; ++j) acc += psi_pow(x - j * spacing, 24);
    return acc * spacing;
}

std::vector<double> mu_grid(const Grid& g, double spacing, double margin) {
    if (!(spacing > 0)) throw std::invalid_argument("mu_grid: spacing must be positive");
    const double half = 0.5 * g.length() + margin;
    std::vector<double> out;
    const long j = static_cast<long>(std::floor(half / spacing));
    for (long i = -j; i <= j; ++i) out.push_back(i * spacing);
    return out;
}

double e_norm(const Field& q, double s, double sigma, double kappa) {
    if (!(kappa >= 1.0)) throw std::invalid_argument("e_norm: kappa must be >= 1");
    const Grid& g = q.grid;
    const RArray xi2 = g.xi().square();
    const RArray w = std::pow(kappa, 2.0 * (s - sigma)) * xi2.pow(sigma) / (4.0 * kappa * kappa + xi2).pow(s);
    return std::sqrt((w * fft(q).abs2()).sum() / g.length());
}

double b_norm(const Field& f) {
    double sup = 0.0;
    for (double N : lp_dyadics(f.grid)) sup = std::max(sup, std::sqrt(N) * l2_norm(littlewood_paley(f, N)));
    return f.v.abs().maxCoeff() + sup;
}

std::vector<double> localized_profile(const Field& q, double kappa, double s, const std::vector<double>& mus) {
    const Grid& g = q.grid;
    const RArray sym = local_symbol(g, kappa, s);
    const RArray& x = g.x();
    std::vector<double> out;
    out.reserve(mus.size());
    CArray w(g.n());
    for (double mu : mus) {
        for (int i = 0; i < g.n(); ++i) w[i] = psi_pow(x[i] - mu, 12) * q.v[i];
        out.push_back(weighted_sq(w, g, sym));
    }
    return out;
}

double f_norm(const Field& q, double kappa, double s, double h, const LocalOptions& opt) {
    const std::vector<double> mus = mu_grid(q.grid, opt.spacing, opt.margin);
    const std::vector<double> p = localized_profile(q, kappa, s, mus);
    double acc = 0.0;
    for (size_t m = 0; m < mus.size(); ++m) acc += p[m] * std::exp(-std::abs(h - mus[m]) / 200.0);
    return acc * opt.spacing;
}

double x_norm(const Trajectory& traj, double kappa, double s, double t0, double t1, const LocalOptions& opt) {
    const Grid& g = traj.fields.front().grid;
    const std::vector<double> mus = mu_grid(g, opt.spacing, opt.margin);
    const std::vector<double> G = time_integrated_profile(traj, kappa, s, t0, t1, mus);
    return exp_weighted_sup(mus, G, box_points(g, opt.spacing), opt.spacing);
}

double x_norm_alt(const Trajectory& traj, double kappa, double s, double t0, double t1, const LocalOptions& opt) {
    const Grid& g = traj.fields.front().grid;
    const std::vector<double> mus = mu_grid(g, opt.spacing, opt.margin);
    const std::vector<double> G = time_integrated_profile(traj, kappa, s, t0, t1, mus);
    return *std::max_element(G.begin(), G.end());
}

double psi_localized_sup(const Field& f, double spacing) {
    const Grid& g = f.grid;
    const RArray& x = g.x();
    double best = 0.0;
    CArray w(g.n());
    for (double mu : box_points(g, spacing)) {
        for (int i = 0; i < g.n(); ++i) w[i] = psi_pow(x[i] - mu, 12) * f.v[i];
        best = std::max(best, std::sqrt(w.abs2().sum() * g.dx()));
    }
    return best;
}

// ---------------------------------------------------------------------------

Report equicontinuity_modulus(const std::vector<Field>& Q, const std::vector<double>& shifts) {
    if (Q.empty()) throw std::invalid_argument("equicontinuity_modulus: empty ensemble");
    for (const Field& q : Q)
        if (!q.grid.same_as(Q.front().grid)) throw std::invalid_argument("equicontinuity_modulus: members need one grid");
    Report rep;
    rep.scenario = "equicontinuity";
    rep.param("members", static_cast<double>(Q.size()));
    Table& t = rep.table("modulus", {"shift", "modulus"});
    bool exact = true;
    const double dx = Q.front().grid.dx();
    for (double y : shifts) {
        exact = exact && std::abs(y / dx - std::round(y / dx)) < 1e-9;
        double sup = 0.0;
        for (const Field& q : Q) sup = std::max(sup, l2_norm(Field(q.grid, translate(q, -y).v - q.v)));
        t.rows.push_back({y, sup});
    }
    if (!exact) rep.notes.push_back("some shifts are not grid multiples; band-limited translation used");
    return rep;
}

double tightness_tail(const std::vector<Field>& Q, double R) {
    double sup = 0.0;
    for (const Field& q : Q) {
        const RArray& x = q.grid.x();
        double acc = 0.0;
        for (int i = 0; i < q.size(); ++i)
            if (std::abs(x[i]) >= R) acc += std::norm(q.v[i]);
        sup = std::max(sup, acc * q.grid.dx());
    }
    return sup;
}

// ---------------------------------------------------------------------------

namespace {

// ||sech^12 f||^2_{H^{1/2}} with the (4 + xi^2)^{1/4} multiplier
double sech_weighted_h_half(const Field& f, const RArray& weight) {
    const Grid& g = f.grid;
    const CArray h = fft(Field(g, weight.cast<cplx>() * f.v));
    return ((4.0 + g.xi().square()).sqrt() * h.abs2()).sum() / g.length();
}

}  // namespace

Report no_smoothing_scan(const std::vector<double>& lambdas, const NoSmoothingOptions& opt, bool zero_data) {
    if (lambdas.empty()) throw std::invalid_argument("no_smoothing_scan: no lambdas");
    const double max_lam = opt.max_lambda_resolved > 0 ? opt.max_lambda_resolved : opt.length / 7.0;
    Report rep;
    rep.scenario = "no_smoothing";
    rep.param("n", static_cast<double>(opt.n));
    rep.param("length_at_lambda_1", opt.length);
    rep.param("dt_at_lambda_1", opt.dt);
    rep.param("window", opt.window);
    rep.param("zero_data", zero_data ? "true" : "false");
    for (double lam : lambdas) {
        const double e = std::log2(lam);
        if (!(lam > 0) || std::abs(e - std::round(e)) > 1e-12)
            throw std::invalid_argument("no_smoothing_scan: lambda must be a power of two");
        if (lam > max_lam) {
            // the box length/lambda must hold sech^12 down to ~1e-15, i.e. length >= 7 lambda
            const double need = std::exp2(std::ceil(std::log2(opt.n * 7.0 * lam / opt.length)));
            throw std::invalid_argument("no_smoothing_scan: lambda = " + fmt(lam) + " is not resolved; needs n >= " +
                                        fmt(need) + " with length " + fmt(7.0 * lam) + " at lambda = 1");
        }
    }
    Table& tab = rep.table("no_smoothing", {"lambda", "value", "value_exact", "mass_drift", "ratio_to_previous"});
    double prev = 0.0;
    double worst_mass = 0.0;
    std::vector<double> ratios;
    for (double lam : lambdas) {
        const Grid g = make_grid(opt.n, opt.length / lam);
        const double sl = std::sqrt(lam);
        const Field q0 = zero_data ? Field(g)
                                   : sample(g, [&](double x) { return sl * stationary_soliton_value(0.0, lam * x); });
        RArray w(g.n());
        for (int i = 0; i < g.n(); ++i) w[i] = sech_pow(g.x()[i], 12);
        // |q(t)| is stationary, so the exact integrand is constant in time
        const double exact = 2.0 * opt.window * sech_weighted_h_half(q0, w);
        double value = 0.0, drift = 0.0;
        if (!zero_data) {
            FlowSpec s;
            s.kind = FlowKind::dnls;
            s.dt = opt.dt / (lam * lam);
            s.T = opt.window;
            s.record_every = opt.record_every;
            const Trajectory tr = evolve_window(s, q0);
            for (size_t i = 0; i < tr.fields.size(); ++i) {
                drift = std::max(drift, std::abs(mass(tr.fields[i]) - 2.0 * kPi));
                if (i > 0)
                    value += 0.5 * (tr.times[i] - tr.times[i - 1]) *
                             (sech_weighted_h_half(tr.fields[i], w) + sech_weighted_h_half(tr.fields[i - 1], w));
            }
        }
        worst_mass = std::max(worst_mass, drift);
        const double ratio = prev > 0 ? value / prev : std::nan("");
        if (prev > 0) ratios.push_back(ratio);
        tab.rows.push_back({lam, value, exact, drift, ratio});
        prev = value;
    }
    if (zero_data) {
        const double v = tab.rows.front()[1];
        rep.less("zero_data_value", v, 1e-300, "zero data gives zero");
        return rep;
    }
    rep.less("mass_is_2pi", worst_mass, 1e-8, "M(q_lambda) = 2 pi along the flow");
    for (size_t i = 0; i < ratios.size(); ++i)
        rep.within("ratio_" + fmt(lambdas[i + 1]) + "_over_" + fmt(lambdas[i]), ratios[i], 1.6, 2.4,
                   "value(2 lambda)/value(lambda) near 2 (growth ~ lambda)");
    return rep;
}

// ---------------------------------------------------------------------------

std::vector<GronwallPoint> gronwall_points(int count, int first) {
    if (first < 1) throw std::invalid_argument("gronwall_points: first index must be >= 1");
    std::vector<GronwallPoint> out;
    for (int n = first; n < first + count; ++n) {
        GronwallPoint p;
        p.theta = 0.1 / n;
        p.lambda = double(n) * n;
        const double cot2 = 1.0 / std::tan(2.0 * p.theta);
        p.lambda_tilde = p.lambda * (1.0 + 1.0 / (n * cot2));
        p.t = 1.0 / std::sqrt(double(n));
        out.push_back(p);
    }
    return out;
}

Report gronwall_scan(const std::vector<GronwallPoint>& pts, double s) {
    if (s > 0) throw std::invalid_argument("gronwall_scan: s must be <= 0");
    Report rep;
    rep.scenario = "gronwall";
    rep.param("s", s);
    Table& tab = rep.table("gronwall", {"index", "theta", "lambda", "lambda_tilde", "t", "regime", "n_grid",
                                        "ratio", "ratio_t0"});
    std::vector<double> col;
    double worst_t0 = 0.0;
    int idx = 0;
    for (const GronwallPoint& p : pts) {
        ++idx;
        if (!(p.theta > 0 && p.theta < kPi / 4))
            throw std::invalid_argument("gronwall_scan: theta must lie in (0, pi/4)");
        const double cot2 = 1.0 / std::tan(2.0 * p.theta);
        const double dl = std::abs(p.lambda_tilde - p.lambda);
        if (dl == 0.0) {
            tab.rows.push_back({double(idx), p.theta, p.lambda, p.lambda_tilde, p.t, 0.0, 0.0, std::nan(""),
                                std::nan("")});
            rep.notes.push_back("point " + std::to_string(idx) + ": identical pair, ratio 0/0 excluded");
            continue;
        }
        if (dl > 0.1 * p.lambda)
            throw std::invalid_argument("gronwall_scan: point " + std::to_string(idx) +
                                        " violates |lambda - lambda~| << lambda");
        const double regime = dl * cot2 * p.t;
        // both solitons sit near x = -2 cot(2 theta) lambda t; centre the box on
        // the midpoint and resolve the carrier lambda cot(2 theta) plus 40 lambda
        const double lam_hi = std::max(p.lambda, p.lambda_tilde);
        const double lam_lo = std::min(p.lambda, p.lambda_tilde);
        const double c1 = -2.0 * cot2 * p.lambda * p.t;
        const double c2 = -2.0 * cot2 * p.lambda_tilde * p.t;
        const double mid = 0.5 * (c1 + c2);
        const double length = std::abs(c1 - c2) + 2.0 * 45.0 / lam_lo;
        const double xi_need = lam_hi * cot2 + 40.0 * lam_hi;
        int n = 256;
        while (kPi * n / length < xi_need) n *= 2;
        if (n > (1 << 22)) throw std::invalid_argument("gronwall_scan: point needs more than 2^22 grid points");
        const Grid g = make_grid(n, length);
        SolitonParams a, b;
        a.theta = b.theta = p.theta;
        a.lambda = p.lambda;
        b.lambda = p.lambda_tilde;
        auto diff_at = [&](double t, double centre) {
            return Field(g, sample(g, [&](double x) { return soliton_value(a, t, x + centre); }).v -
                                sample(g, [&](double x) { return soliton_value(b, t, x + centre); }).v);
        };
        // the time-zero box is centred at the origin with the same size
        const double d0 = sobolev_norm(diff_at(0.0, 0.0), s, 1.0);
        const double d1 = sobolev_norm(diff_at(p.t, mid), s, 1.0);
        const double ratio = d1 / d0;
        const double r0 = d0 / d0;
        worst_t0 = std::max(worst_t0, std::abs(r0 - 1.0));
        tab.rows.push_back({double(idx), p.theta, p.lambda, p.lambda_tilde, p.t, regime, double(n), ratio, r0});
        col.push_back(ratio);
    }
    bool inc = col.size() >= 2;
    for (size_t i = 1; i < col.size(); ++i) inc = inc && col[i] > col[i - 1];
    rep.holds("ratio_strictly_increasing", inc, "||dq(t_n)||_{H^s}/||dq(0)||_{H^s} grows along the sequence");
    rep.less("time_zero_ratio_is_one", worst_t0, 1e-14, "normalisation at t = 0");
    return rep;
}

}  // namespace dnls
