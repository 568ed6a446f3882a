#include "dnls/jost.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dnls {

SpectralParam spectral(double kappa) {
    if (!(std::abs(kappa) >= 1.0)) throw std::invalid_argument("spectral parameter: |kappa| must be >= 1");
    SpectralParam k;
    k.kappa = kappa;
    k.sign = kappa > 0 ? 1 : -1;
    k.abs = std::abs(kappa);
    k.sqrt_kappa = kappa > 0 ? cplx(std::sqrt(kappa)) : cplx(0.0, std::sqrt(-kappa));
    return k;
}

namespace {

// integral_x^{L/2} f
CArray tail_integral(const Field& f) {
    const Field F = antiderivative(f);
    const cplx total = integral(f);
    return total - F.v;
}

double sup_diff(const CArray& a, const CArray& b) { return (a - b).abs().maxCoeff(); }

}  // namespace

JostSolution solve_jost(const SpectralParam& k, const Field& q, const JostOptions& opt) {
    const Grid& g = q.grid;
    const int n = g.n();
    const cplx sk = k.sqrt_kappa;
    const double kk = k.kappa;
    const CArray qb = q.v.conjugate();
    // causal and anticausal resolvents
    const CArray causal = resolvent_symbol(g, 2.0 * k.abs, +1);     // (2|k| + d)^{-1}
    const CArray anticausal = resolvent_symbol(g, 2.0 * k.abs, -1); // (2|k| - d)^{-1}

    JostSolution s;
    s.k = k;
    s.grid = g;
    int iters = 0;
    // on large grids the update stalls at a rounding floor above opt.tol; accept
    // a stall once it is below 1e-12 and has not improved for 8 sweeps
    double best = 0.0;
    int stale = 0;
    auto converged = [&](double d, const CArray& a, const CArray& b) {
        const double scale = std::max({1.0, a.abs().maxCoeff(), b.abs().maxCoeff()});
        if (d <= opt.tol * scale) return true;
        if (d < best) {
            best = d;
            stale = 0;
        } else if (++stale >= 8 && best <= 1e-12 * scale) {
            return true;
        }
        return false;
    };
    auto reset = [&] {
        best = std::numeric_limits<double>::infinity();
        stale = 0;
    };

    if (kk > 0) {
        // m1' = sk q m2, m2 = (2k + d)^{-1}[-i sk qbar m1], m(-inf) = (1, 0)
        CArray m1 = CArray::Ones(n), m2 = CArray::Zero(n);
        reset();
        for (int it = 0;; ++it) {
            if (it == opt.max_iter) throw std::runtime_error("jost: left iteration did not converge");
            CArray m2n = apply_symbol(causal, Field(g, -kI * sk * qb * m1)).v;
            CArray m1n = 1.0 + antiderivative(Field(g, sk * q.v * m2n)).v;
            const double d = std::max(sup_diff(m1n, m1), sup_diff(m2n, m2));
            m1.swap(m1n);
            m2.swap(m2n);
            if (converged(d, m1, m2)) { iters += it + 1; break; }
        }
        // p1 = (2k - d)^{-1}[-sk q p2], p2 = 1 - integral_x^inf (-i sk qbar p1), p(+inf) = (0, 1)
        CArray p1 = CArray::Zero(n), p2 = CArray::Ones(n);
        reset();
        for (int it = 0;; ++it) {
            if (it == opt.max_iter) throw std::runtime_error("jost: right iteration did not converge");
            CArray p1n = apply_symbol(anticausal, Field(g, -sk * q.v * p2)).v;
            CArray p2n = 1.0 - tail_integral(Field(g, -kI * sk * qb * p1n));
            const double d = std::max(sup_diff(p1n, p1), sup_diff(p2n, p2));
            p1.swap(p1n);
            p2.swap(p2n);
            if (converged(d, p1, p2)) { iters += it + 1; break; }
        }
        s.m1 = m1; s.m2 = m2; s.p1 = p1; s.p2 = p2;
    } else {
        // m1 = (2|k| + d)^{-1}[sk q m2], m2' = -i sk qbar m1, m(-inf) = (0, 1)
        CArray m1 = CArray::Zero(n), m2 = CArray::Ones(n);
        reset();
        for (int it = 0;; ++it) {
            if (it == opt.max_iter) throw std::runtime_error("jost: left iteration did not converge");
            CArray m1n = apply_symbol(causal, Field(g, sk * q.v * m2)).v;
            CArray m2n = 1.0 + antiderivative(Field(g, -kI * sk * qb * m1n)).v;
            const double d = std::max(sup_diff(m1n, m1), sup_diff(m2n, m2));
            m1.swap(m1n);
            m2.swap(m2n);
            if (converged(d, m1, m2)) { iters += it + 1; break; }
        }
        // p2 = (2|k| - d)^{-1}[i sk qbar p1], p1 = 1 - integral_x^inf sk q p2, p(+inf) = (1, 0)
        CArray p1 = CArray::Ones(n), p2 = CArray::Zero(n);
        reset();
        for (int it = 0;; ++it) {
            if (it == opt.max_iter) throw std::runtime_error("jost: right iteration did not converge");
            CArray p2n = apply_symbol(anticausal, Field(g, kI * sk * qb * p1)).v;
            CArray p1n = 1.0 - tail_integral(Field(g, sk * q.v * p2n));
            const double d = std::max(sup_diff(p1n, p1), sup_diff(p2n, p2));
            p1.swap(p1n);
            p2.swap(p2n);
            if (converged(d, p1, p2)) { iters += it + 1; break; }
        }
        s.m1 = m1; s.m2 = m2; s.p1 = p1; s.p2 = p2;
    }
    const CArray w = s.m1 * s.p2 - s.m2 * s.p1;
    s.W = w.mean();
    s.w_spread = (w - s.W).abs().maxCoeff();
    s.iterations = iters;
    if (std::abs(s.W) < 1e-13) throw std::runtime_error("jost: Wronskian vanishes (kappa is an eigenvalue)");
    return s;
}

cplx a_from_jost(const JostSolution& s) { return s.k.sign > 0 ? s.W : -s.W; }

cplx log_a_continued(const JostSolution& s, bool* winding) {
    const CArray& m = s.k.sign > 0 ? s.m1 : s.m2;
    const double top = m.abs().maxCoeff();
    bool wind = false;
    double arg = std::arg(m[0]);
    for (int j = 0; j + 1 < m.size(); ++j) {
        if (std::abs(m[j + 1]) < 1e-8 * top) wind = true;
        const double step = std::arg(m[j + 1] / m[j]);
        if (std::abs(step) > kPi / 4) wind = true;
        arg += step;
    }
    const cplx a = a_from_jost(s);
    cplx la = std::log(a);
    const double turns = std::round((arg - la.imag()) / (2 * kPi));
    la += cplx(0.0, 2 * kPi * turns);
    if (winding) *winding = wind;
    return la;
}

}  // namespace dnls
