#include "dnls/exact_solutions.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace dnls {

void validate(const SolitonParams& p) {
    if (!(p.theta > 0.0 && p.theta < kPi / 2)) throw std::invalid_argument("soliton: theta must lie in (0, pi/2)");
    if (!(p.lambda > 0.0)) throw std::invalid_argument("soliton: lambda must be positive");
}

cplx soliton_q0(double y, double theta) {
    // cosh(y - i th)/cosh^2(y + i th) written with u = |y| so nothing overflows
    const double u = std::abs(y);
    const double th = y >= 0 ? theta : -theta;
    const double e = std::exp(-2.0 * u);
    const cplx num = std::exp(-kI * th) + e * std::exp(kI * th);
    const cplx den = std::exp(kI * th) + e * std::exp(-kI * th);
    const cplx ratio = 2.0 * std::exp(-u) * num / (den * den);
    const double c2 = std::cos(2 * theta) / std::sin(2 * theta);
    return std::sqrt(2.0 * std::sin(2 * theta)) * ratio * std::exp(-kI * y * c2);
}

cplx soliton_value(const SolitonParams& p, double t, double x) {
    const double s2 = std::sin(2 * p.theta);
    const double c2 = std::cos(2 * p.theta) / s2;
    const double lam = p.lambda;
    const double tt = lam * lam * t;
    const double y = lam * (x - p.shift) + 2.0 * c2 * tt;
    return std::sqrt(lam) * soliton_q0(y, p.theta) * std::exp(kI * (tt / (s2 * s2) + p.phase));
}

Field soliton_at(const SolitonParams& p, double t, const Grid& g, double edge_tol) {
    validate(p);
    Field f = sample(g, [&](double x) { return soliton_value(p, t, x); });
    if (edge_tol > 0) require_boundary_decay(f, edge_tol, "soliton");
    return f;
}

Field soliton_profile(const SolitonParams& p, const Grid& g, double edge_tol) { return soliton_at(p, 0.0, g, edge_tol); }

double algebraic_tail_mass(double length) {
    // integral over |x| > L/2 of 4/(1+x^2)
    return 8.0 * (kPi / 2 - std::atan(0.5 * length));
}

Field algebraic_soliton(double t, const Grid& g, double tail_tol) {
    const double tail = algebraic_tail_mass(g.length());
    if (tail > tail_tol)
        throw std::runtime_error("algebraic soliton: tail mass " + std::to_string(tail) + " exceeds budget " +
                                 std::to_string(tail_tol));
    return sample(g, [t](double x) {
        const double y = x - t;
        const cplx a = 1.0 + kI * y;
        return 2.0 * (1.0 - kI * y) / (a * a) * std::exp(kI * (0.5 * y + 0.25 * t));
    });
}

cplx stationary_soliton_value(double t, double x) {
    if (std::abs(x) > 300) return 0.0;
    const double c = std::cosh(x), s = std::sinh(x);
    const cplx z = c - kI * s;
    const double d = c * c + s * s;
    return 2.0 * std::exp(kI * t) * z * z * z / (d * d);
}

Field stationary_soliton(double t, const Grid& g) {
    return sample(g, [t](double x) { return stationary_soliton_value(t, x); });
}

cplx soliton_fourier(double theta, double xi) {
    return kPi * std::exp(-theta * xi) / std::cosh(0.5 * kPi * xi) *
           (std::cos(2 * theta) - xi * std::sin(2 * theta));
}

bool commensurate(const Grid& g, double k) {
    const double m = k / g.dxi();
    return std::abs(m - std::round(m)) < 1e-9;
}

Field galilei_boost(const Field& q, double k, double t) {
    if (k == 0.0) return q;
    if (!commensurate(q.grid, k))
        std::cerr << "warning: boost k=" << k << " is not on the frequency grid; phase is not periodic\n";
    Field shifted = translate(q, 2.0 * k * t);
    const RArray& x = q.grid.x();
    for (int j = 0; j < shifted.size(); ++j) shifted.v[j] *= std::exp(kI * (k * x[j] - k * k * t));
    return shifted;
}

Field gauge_transform(const Field& q, double nu, double edge_tol) {
    if (nu == 0.0) return q;
    if (edge_tol > 0) {
        const RArray a = q.v.abs();
        const double top = a.maxCoeff();
        if (top > 0 && a[0] > edge_tol * top)
            throw std::runtime_error("gauge_transform: field not decayed at the left edge");
    }
    Field m(q.grid, q.v.abs2().cast<cplx>());
    const Field phi = antiderivative(m);
    Field w = q;
    for (int j = 0; j < w.size(); ++j) w.v[j] *= std::exp(kI * nu * phi.v[j].real());
    return w;
}

}  // namespace dnls
