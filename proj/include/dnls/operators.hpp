#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dnls/grid.hpp"
#include "dnls/jost.hpp"
#include "dnls/report.hpp"

namespace dnls {

// Matrix in the unitary Fourier basis e^{i xi_k x}/sqrt(L), rows and columns
// ordered by mode -n/2 .. n/2-1 (not FFT order). 2n x 2n for the Lax operator.
struct DenseOperator {
    Grid grid;
    Eigen::MatrixXcd matrix;
};

// Fourier coefficients c_p = q^(xi_p)/L by signed mode p (|p| < n/2)
CArray mode_coefficients(const Field& q);

DenseOperator build_lambda(const SpectralParam& k, const Field& q);
DenseOperator build_gamma(const SpectralParam& k, const Field& q);

double hs_norm(const DenseOperator& T);
double op_norm(const DenseOperator& T);

// int log(4 + xi^2/k^2) |q^|^2 / sqrt(4k^2 + xi^2) d xi/(2 pi)
double hs_integrand(const Field& q, double kappa);

// The determinant is computed on a banded Fourier basis of size N (which may
// exceed n since the resolvent symbols decay slowly). The symmetrised operator
//   K = i kappa U C V D U,  U = (k - s i xi)^{-1/2}, V = (k + s i xi)^{-1}
// (k = |kappa|, s = sgn kappa) has bandwidth twice that of q^. The trace lost
// to truncation is restored exactly and the remaining O(N^-3) error is removed
// by Richardson extrapolation against N/2.
struct DetOptions {
    int basis = 0;            // 0: automatic
    bool richardson = true;
    double coeff_tol = 1e-15; // relative cutoff defining the band of q^
};

struct DetReport {
    cplx a = 1.0;
    cplx log_a = 0.0;         // sum of principal logs of the LU pivots (branch not fixed)
    double error = 0.0;       // Richardson error estimate
    double band_tail = 0.0;   // |trace restored| at size N, the raw truncation size
    double rounding = 0.0;    // floating-point floor, about N unit roundoffs
    int basis = 0;
    int bandwidth = 0;
    bool nonsingular = true;
};

DetReport det_a(const SpectralParam& k, const Field& q, const DetOptions& opt = {});

enum class ARoute { fredholm, jost };

struct AValue {
    cplx A = 0.0;
    double error = 0.0;
    double rounding = 0.0;
    bool winding = false;     // branch tracking found an ambiguous step
    int ladder_steps = 0;
};

// -sgn(kappa) log a(i kappa; q) with the branch fixed by continuity from large
// |kappa| (fredholm) or along x (jost)
AValue A_value(const SpectralParam& k, const Field& q, ARoute route = ARoute::fredholm,
               const DetOptions& opt = {});

struct SeriesResult {
    cplx A = 0.0;
    double tail_bound = 0.0;  // certified bound on the omitted terms
    double error = 0.0;       // Richardson error estimate
    double rounding = 0.0;    // floating-point floor, as for DetReport
    int terms = 0;
    double rho = 0.0;         // bound on ||K||_op
    bool convergent = true;
};

// sgn(kappa) sum_{l <= lmax} tr (i kappa Lambda Gamma)^l / l; lmax = 0 picks the
// smallest order whose tail bound is below tail_target * max(1, |A|)
SeriesResult A_series(const SpectralParam& k, const Field& q, int lmax = 0, double tail_target = 1e-12,
                      const DetOptions& opt = {});

// i M/2 + H/(4 kappa) - i H2/(8 kappa^2)
cplx A_expansion(const Field& q, double kappa);

Report asymptotic_residual(const Field& q, const std::vector<double>& kappas, ARoute route = ARoute::fredholm);

// sqrt(lambda) q(lambda x) on a box of length L/lambda with the same n; exact
Field rescale(const Field& q, double lambda);

// int |xi|^{2 sigma} |q^|^2 / (4 + xi^2)^sigma d xi/(2 pi)
double goodness(const Field& q, double sigma = 0.25);

struct GoodRescaling {
    double lambda = 1.0;
    std::vector<Field> members;
    double worst = 0.0;  // largest goodness after rescaling
};

// largest lambda = 2^-j (j >= 0) for which every member is delta-good
GoodRescaling rescale_to_good(const std::vector<Field>& Q, double delta, double sigma = 0.25, int max_halvings = 60);

}  // namespace dnls
