#include "dnls/green.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

namespace dnls {

DenseOperator build_lax(const SpectralParam& k, const Field& q) {
    const Grid& g = q.grid;
    const int n = g.n();
    const CArray c = mode_coefficients(q);
    auto coef = [&](int p) -> cplx {
        if (p <= -n / 2 || p >= n / 2) return 0.0;
        return c[p + n / 2 - 1];
    };
    const cplx sk = k.sqrt_kappa;
    DenseOperator L{g, Eigen::MatrixXcd::Zero(2 * n, 2 * n)};
    for (int i = 0; i < n; ++i) {
        const int mi = i - n / 2;
        // derivative symbol with the Nyquist mode zeroed
        const double xi = mi == -n / 2 ? 0.0 : mi * g.dxi();
        L.matrix(i, i) = cplx(k.kappa, -xi);
        L.matrix(n + i, n + i) = -cplx(k.kappa, xi);
        for (int j = 0; j < n; ++j) {
            const int p = mi - (j - n / 2);
            const cplx cq = coef(p);
            if (cq != 0.0) L.matrix(i, n + j) = sk * cq;
            const cplx cqb = std::conj(coef(-p));
            if (cqb != 0.0) L.matrix(n + i, j) = -kI * sk * cqb;
        }
    }
    return L;
}

namespace {

// kernel on the diagonal of the operator with sorted-basis matrix M:
// K(x, x) = (1/L) sum_p e^{i xi_p x} sum_k M[k, k - p]
Field diagonal_kernel(const Grid& g, const Eigen::MatrixXcd& M) {
    const int n = g.n();
    CArray spec = CArray::Zero(n);
    for (int p = -n / 2 + 1; p < n / 2; ++p) {
        cplx acc = 0.0;
        for (int kk = std::max(0, p); kk < std::min(n, n + p); ++kk) acc += M(kk, kk - p);
        spec[p >= 0 ? p : p + n] = acc;
    }
    return ifft(g, spec);  // ifft carries the 1/L
}

}  // namespace

GreenTriple green_from_jost(const JostSolution& s) {
    const double sg = s.k.sign;
    const Grid& g = s.grid;
    GreenTriple t;
    t.kappa = s.k;
    t.g12 = Field(g, -sg * s.m1 * s.p1 / s.W);
    t.g21 = Field(g, sg * s.m2 * s.p2 / s.W);
    t.gamma = Field(g, sg * (s.m1 * s.p2 + s.p1 * s.m2) / s.W - 1.0);
    return t;
}

GreenTriple green_diagonal(const SpectralParam& k, const Field& q, GreenMethod method) {
    if (method == GreenMethod::jost) return green_from_jost(solve_jost(k, q));

    const Grid& g = q.grid;
    const int n = g.n();
    const DenseOperator L = build_lax(k, q);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(L.matrix);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) throw std::runtime_error("green_diagonal: Lax operator is numerically singular");
    Eigen::MatrixXcd G = lu.inverse();
    for (int i = 0; i < 2 * n; ++i) G(i, i) -= 1.0 / L.matrix(i, i);
    // the unitary basis makes the coincidence value a mode sum divided by L
    const Field G11 = diagonal_kernel(g, G.topLeftCorner(n, n));
    const Field G12 = diagonal_kernel(g, G.topRightCorner(n, n));
    const Field G21 = diagonal_kernel(g, G.bottomLeftCorner(n, n));
    const Field G22 = diagonal_kernel(g, G.bottomRightCorner(n, n));
    const double sg = k.sign;
    GreenTriple t;
    t.kappa = k;
    t.g12 = Field(g, sg * G12.v);
    t.g21 = Field(g, sg * G21.v);
    t.gamma = Field(g, sg * (G11.v - G22.v));
    return t;
}

GreenSeries green_series(const SpectralParam& k, const Field& q) {
    const Grid& g = q.grid;
    const double kk = k.kappa;
    const cplx sk = k.sqrt_kappa;
    const CArray minus = resolvent_symbol(g, 2.0 * kk, -1);  // (2k - d)^{-1}
    const CArray plus = resolvent_symbol(g, 2.0 * kk, +1);   // (2k + d)^{-1}
    const Field qm = apply_symbol(minus, q);
    const Field qbp = apply_symbol(plus, q.conj());
    const CArray prod = qm.v * qbp.v;
    const cplx k32 = sk * kk;  // kappa^{3/2} with the branch of sqrt(kappa)
    GreenSeries s;
    s.g12_1 = Field(g, sk * qm.v);
    s.g21_1 = Field(g, -kI * sk * qbp.v);
    s.gamma_2 = Field(g, 2.0 * kI * kk * prod);
    s.g12_3 = Field(g, 2.0 * kI * k32 * apply_symbol(minus, Field(g, q.v * prod)).v);
    s.g21_3 = Field(g, 2.0 * k32 * apply_symbol(plus, Field(g, q.v.conjugate() * prod)).v);
    return s;
}

Report identity_residuals(const GreenTriple& t, const Field& q, double tol) {
    const Grid& g = q.grid;
    const double kk = t.kappa.kappa;
    const cplx sk = t.kappa.sqrt_kappa;
    const CArray& g12 = t.g12.v;
    const CArray& g21 = t.g21.v;
    const CArray& gm = t.gamma.v;
    const CArray qb = q.v.conjugate();
    const CArray one_g = gm + 1.0;
    const CArray two_g = gm + 2.0;
    const CArray minus = resolvent_symbol(g, 2.0 * kk, -1);
    const CArray plus = resolvent_symbol(g, 2.0 * kk, +1);
    auto d = [&](const CArray& v) { return deriv(Field(g, v)).v; };
    auto res = [&](const CArray& r) { return l2_norm(Field(g, r)); };

    Report rep;
    rep.scenario = "identity_residuals";
    rep.param("kappa", kk);
    const double r1 = res(d(g12) - (2.0 * kk * g12 - sk * q.v * one_g));
    const double r2 = res(d(g21) - (-2.0 * kk * g21 - kI * sk * qb * one_g));
    const double r3 = res(d(gm) - 2.0 * sk * (q.v * g21 + kI * qb * g12));
    const double r4 = res(2.0 * g12 * g21 + 0.5 * gm * gm + gm);
    const double r5a = res(g12 - sk * apply_symbol(minus, Field(g, q.v * one_g)).v);
    const double r5b = res(g21 + kI * sk * apply_symbol(plus, Field(g, qb * one_g)).v);
    const double r5c = res(gm + 4.0 * g12 * g21 / two_g);
    const CArray f12 = g12 / two_g, f21 = g21 / two_g;
    const double r5d = res(f12 - 0.5 * sk * apply_symbol(minus, Field(g, q.v + 4.0 * kI * qb * f12 * f12)).v);
    const double r5e = res(f21 + 0.5 * kI * sk * apply_symbol(plus, Field(g, qb - 4.0 * kI * q.v * f21 * f21)).v);
    rep.scalar("g12_deriv", r1);
    rep.scalar("g21_deriv", r2);
    rep.scalar("gamma_deriv", r3);
    rep.scalar("quadratic", r4);
    rep.scalar("fixed_point_g12", r5a);
    rep.scalar("fixed_point_g21", r5b);
    rep.scalar("fixed_point_gamma", r5c);
    rep.scalar("fraction_g12", r5d);
    rep.scalar("fraction_g21", r5e);
    rep.scalar("min_abs_2_plus_gamma", two_g.abs().minCoeff());
    rep.less("g12_deriv", r1, tol, "g12' = 2k g12 - k^(1/2) q (gamma + 1)");
    rep.less("g21_deriv", r2, tol, "g21' = -2k g21 - i k^(1/2) qbar (gamma + 1)");
    rep.less("gamma_deriv", r3, tol, "gamma' = 2 k^(1/2) (q g21 + i qbar g12)");
    rep.less("quadratic", r4, tol, "2 g12 g21 + gamma^2/2 + gamma = 0");
    rep.less("fixed_point_g12", r5a, tol, "g12 = sqrt(k)/(2k - d) [q (gamma + 1)]");
    rep.less("fixed_point_g21", r5b, tol, "g21 = -i sqrt(k)/(2k + d) [qbar (gamma + 1)]");
    rep.less("fixed_point_gamma", r5c, tol, "gamma = -4 g12 g21/(2 + gamma)");
    rep.less("fraction_g12", r5d, tol, "g12/(2+gamma) = sqrt(k)/(2(2k - d)) [q + 4i qbar (g12/(2+gamma))^2]");
    rep.less("fraction_g21", r5e, tol, "g21/(2+gamma) = -i sqrt(k)/(2(2k + d)) [qbar - 4i q (g21/(2+gamma))^2]");
    return rep;
}

namespace {

// A on the branch closest to `ref`
cplx A_near(const SpectralParam& k, const Field& q, cplx ref) {
    const DetReport d = det_a(k, q);
    if (!d.nonsingular) throw std::runtime_error("variational_check: singular determinant");
    const cplx A = -double(k.sign) * d.log_a;
    const double turns = std::round((ref.imag() - A.imag()) / (2 * kPi));
    return A + cplx(0.0, 2 * kPi * turns);
}

struct Pairings {
    cplx dqbar;  // int (dA/dqbar) fbar
    cplx dq;     // int (dA/dq) f
};

Pairings fd_pairings(const SpectralParam& k, const Field& q, const Field& f, double eps, cplx A0) {
    const Grid& g = q.grid;
    auto A_at = [&](cplx step) { return A_near(k, Field(g, q.v + step * f.v), A0); };
    const cplx D1 = (A_at(eps) - A_at(-eps)) / (2 * eps);
    const cplx D2 = (A_at(kI * eps) - A_at(-kI * eps)) / (2 * eps);
    return {(D1 + kI * D2) / 2.0, (D1 - kI * D2) / 2.0};
}

}  // namespace

Report variational_check(const SpectralParam& k, const Field& q, const Field& f, const VariationalOptions& opt) {
    const Grid& g = q.grid;
    Report rep;
    rep.scenario = "variational_check";
    rep.param("kappa", k.kappa);
    rep.param("eps1", opt.eps1);
    rep.param("eps2", opt.eps2);
    const GreenTriple t = green_diagonal(k, q);
    const cplx want_qbar = integral(g, kI * k.sqrt_kappa * t.g12.v * f.v.conjugate());
    const cplx want_q = integral(g, -k.sqrt_kappa * t.g21.v * f.v);
    const double scale = std::max(std::abs(want_qbar), std::abs(want_q));
    if (scale == 0.0) {
        rep.scalar("relative_residual", 0.0);
        rep.less("dA_dqbar", 0.0, opt.tol, "dA/dqbar = i sqrt(k) g12");
        rep.less("dA_dq", 0.0, opt.tol, "dA/dq = -sqrt(k) g21");
        rep.notes.push_back("both pairings vanish identically");
        return rep;
    }
    const cplx A0 = A_value(k, q).A;
    const Pairings p1 = fd_pairings(k, q, f, opt.eps1, A0);
    const Pairings p2 = fd_pairings(k, q, f, opt.eps2, A0);
    const double e1 = opt.eps1 * opt.eps1, e2 = opt.eps2 * opt.eps2;
    auto rich = [&](cplx a1, cplx a2) { return (e1 * a2 - e2 * a1) / (e1 - e2); };
    const cplx ex_qbar = rich(p1.dqbar, p2.dqbar);
    const cplx ex_q = rich(p1.dq, p2.dq);
    const double r_qbar = std::abs(ex_qbar - want_qbar) / scale;
    const double r_q = std::abs(ex_q - want_q) / scale;
    const double raw1 = std::abs(p1.dqbar - want_qbar) / scale;
    const double raw2 = std::abs(p2.dqbar - want_qbar) / scale;
    rep.scalar("pairing_qbar_re", want_qbar.real());
    rep.scalar("pairing_qbar_im", want_qbar.imag());
    rep.scalar("pairing_q_re", want_q.real());
    rep.scalar("pairing_q_im", want_q.imag());
    rep.scalar("residual_qbar_eps1", raw1);
    rep.scalar("residual_qbar_eps2", raw2);
    rep.scalar("residual_qbar", r_qbar);
    rep.scalar("residual_q", r_q);
    rep.less("dA_dqbar", r_qbar, opt.tol, "dA/dqbar = i sqrt(k) g12");
    rep.less("dA_dq", r_q, opt.tol, "dA/dq = -sqrt(k) g21");
    return rep;
}

}  // namespace dnls
