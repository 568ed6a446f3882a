#pragma once

#include "dnls/grid.hpp"

namespace dnls {

struct SpectralParam {
    double kappa = 1.0;
    cplx sqrt_kappa = 1.0;  // i sqrt|kappa| for kappa < 0
    int sign = 1;
    double abs = 1.0;
};

SpectralParam spectral(double kappa);

// Solutions of psi' = M psi with M = [[k, sqrt(k) q], [-i sqrt(k) qbar, -k]],
// written as psi_- = e^{|k| x} m (decaying at -inf) and psi_+ = e^{-|k| x} p
// (decaying at +inf). Each pair solves a Volterra system, iterated to a fixed
// point with periodic resolvents (2|k| +- d)^{-1}; the wrap-around error is
// O(e^{-2|k| L}).
struct JostOptions {
    double tol = 1e-15;
    int max_iter = 5000;
};

struct JostSolution {
    SpectralParam k;
    Grid grid;
    CArray m1, m2, p1, p2;
    cplx W = 1.0;  // m1 p2 - m2 p1, averaged over the box
    double w_spread = 0.0;
    int iterations = 0;
};

JostSolution solve_jost(const SpectralParam& k, const Field& q, const JostOptions& opt = {});

// a(i kappa) = W for kappa > 0 and -W for kappa < 0
cplx a_from_jost(const JostSolution& s);

// log a continued along x from the left edge (where it is 0); `winding` is set
// when the continuation passes close to a zero or takes large steps
cplx log_a_continued(const JostSolution& s, bool* winding = nullptr);

}  // namespace dnls
