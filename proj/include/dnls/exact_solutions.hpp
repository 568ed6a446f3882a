#pragma once

#include "dnls/grid.hpp"

namespace dnls {

struct SolitonParams {
    double theta = kPi / 4;
    double lambda = 1.0;
    double phase = 0.0;
    double shift = 0.0;
};

void validate(const SolitonParams& p);

// q0(y; theta) = sqrt(2 sin 2theta) Z^3/|Z|^4 e^{-i y cot 2theta}, Z = cosh(y - i theta),
// evaluated without overflow for large |y|
cplx soliton_q0(double y, double theta);

// sqrt(lambda) q0(lambda (x - shift)) e^{i phase}
Field soliton_profile(const SolitonParams& p, const Grid& g, double edge_tol = 1e-12);
// scaled travelling soliton at time t
Field soliton_at(const SolitonParams& p, double t, const Grid& g, double edge_tol = 1e-12);
cplx soliton_value(const SolitonParams& p, double t, double x);

// q_a(x - t) e^{it/4}; `tail_tol` bounds the mass of |q_a|^2 outside the box
Field algebraic_soliton(double t, const Grid& g, double tail_tol = 1e-2);
double algebraic_tail_mass(double length);

// 2 e^{it} (cosh x - i sinh x)^3 / (cosh^2 x + sinh^2 x)^2
cplx stationary_soliton_value(double t, double x);
Field stationary_soliton(double t, const Grid& g);

// pi e^{-theta xi}/cosh(pi xi/2) [cos 2theta - xi sin 2theta]
cplx soliton_fourier(double theta, double xi);

// v(x) = e^{ikx - ik^2 t} q(x - 2kt)
Field galilei_boost(const Field& q, double k, double t);
bool commensurate(const Grid& g, double k);

// w = q e^{i nu Phi}, Phi = integral_{-L/2}^x |q|^2
Field gauge_transform(const Field& q, double nu, double edge_tol = 1e-8);

}  // namespace dnls
