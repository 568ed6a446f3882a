#pragma once

#include "dnls/grid.hpp"
#include "dnls/jost.hpp"
#include "dnls/operators.hpp"
#include "dnls/report.hpp"

namespace dnls {

struct GreenTriple {
    Field g12, g21, gamma;
    SpectralParam kappa;
};

// L = diag(1,-1) [[k - d, sqrt(k) q], [i sqrt(k) qbar, k + d]] in the sorted
// Fourier basis, blocks ordered (first component, second component)
DenseOperator build_lax(const SpectralParam& k, const Field& q);

enum class GreenMethod {
    jost,   // products of Jost solutions; spectrally accurate
    dense,  // diagonal of L^{-1} - L0^{-1} from a dense inverse; O(1/n) accurate
};

// Diagonal Green's functions through the pairing
//   int g21 b + g12 c + gamma a = sgn(k) tr{[[a, b], [c, -a]] (L^{-1} - L0^{-1})}
GreenTriple green_diagonal(const SpectralParam& k, const Field& q, GreenMethod method = GreenMethod::jost);

// with the Jost solutions already at hand
GreenTriple green_from_jost(const JostSolution& s);

struct GreenSeries {
    Field g12_1, g12_3, g21_1, g21_3, gamma_2;
};

GreenSeries green_series(const SpectralParam& k, const Field& q);

// L2 residuals of the derivative identities, the quadratic identity and the
// fixed-point identities
Report identity_residuals(const GreenTriple& t, const Field& q, double tol = 1e-8);

// checks dA/dqbar = i sqrt(k) g12 and dA/dq = -sqrt(k) g21 against central
// differences of the determinant along f and i f, Richardson-extrapolated in eps
struct VariationalOptions {
    double eps1 = 1e-3;
    double eps2 = 1e-4;
    double tol = 1e-5;
};

Report variational_check(const SpectralParam& k, const Field& q, const Field& f, const VariationalOptions& opt = {});

}  // namespace dnls
