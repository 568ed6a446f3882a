#pragma once

#include <vector>

#include "dnls/flows.hpp"
#include "dnls/grid.hpp"
#include "dnls/report.hpp"

namespace dnls {

enum class WeightKind { psi, sech };

// psi_mu^power with psi(x) = sqrt(sech(x/99)), or sech^power(x - mu)
struct WeightProfile {
    WeightKind kind = WeightKind::psi;
    double mu = 0.0;
    int power = 12;
    Field samples;
};

double psi(double x);
WeightProfile make_weight(const Grid& g, double mu, int power, WeightKind kind = WeightKind::psi);

// trapezoid over mu at `spacing` of psi(x - mu)^24 (512/7 exactly)
double psi_integral(double spacing = 1.0, double x = 0.0);

// mu grid: box points at `spacing`, extended by `margin` on both sides
std::vector<double> mu_grid(const Grid& g, double spacing = 1.0, double margin = 0.0);

// sqrt of int k^{2(s - sigma)} |xi|^{2 sigma} / (4k^2 + xi^2)^s |q^|^2 d xi/(2 pi)
double e_norm(const Field& q, double s, double sigma, double kappa);

// ||f||_inf + sup_N N^{1/2} ||P_N f||
double b_norm(const Field& f);

// ||psi_mu^12 q / sqrt(4k^2 - d^2)||^2_{H^{s+1}} for each mu
std::vector<double> localized_profile(const Field& q, double kappa, double s, const std::vector<double>& mus);

struct LocalOptions {
    double spacing = 1.0;
    double margin = 700.0;  // psi^12 has decayed below 1e-16 at this distance
};

// ||q||^2_{F_k^s(h)}
double f_norm(const Field& q, double kappa, double s, double h, const LocalOptions& opt = {});

// sup_h int_{window} ||q(t)||^2_{F_k^s(h)} dt, h over the box grid
double x_norm(const Trajectory& traj, double kappa, double s = 0.5, double t0 = -1.0, double t1 = 1.0,
              const LocalOptions& opt = {});
// sup_mu ||psi_mu^12 q / sqrt(4k^2 - d^2)||^2_{L^2_t H^{s+1}}
double x_norm_alt(const Trajectory& traj, double kappa, double s = 0.5, double t0 = -1.0, double t1 = 1.0,
                  const LocalOptions& opt = {});

// max over mu in the box of ||psi_mu^12 f||
double psi_localized_sup(const Field& f, double spacing = 1.0);

Report equicontinuity_modulus(const std::vector<Field>& Q, const std::vector<double>& shifts);
double tightness_tail(const std::vector<Field>& Q, double R);

struct NoSmoothingOptions {
    int n = 512;
    double length = 64.0;   // box at lambda = 1; the box for lambda is length/lambda
    double dt = 2.5e-4;     // at lambda = 1; scaled by 1/lambda^2. Mass drift ~ dt^5 lambda^2
    double window = 1.0;    // time integral over [-window, window]
    int record_every = 40;
    double max_lambda_resolved = 0.0;  // 0: derived from the grid
};

// value(lambda) = int ||sech^12 q_lambda(t)||^2_{H^{1/2}} dt for the rescaled
// stationary soliton, evolved numerically
Report no_smoothing_scan(const std::vector<double>& lambdas, const NoSmoothingOptions& opt = {},
                         bool zero_data = false);

struct GronwallPoint {
    double theta = 0.0;
    double lambda = 1.0;
    double lambda_tilde = 1.0;
    double t = 0.0;
};

// theta = 0.1/n, lambda = n^2, lambda~ = lambda (1 + 1/(n cot 2theta)), t = n^{-1/2}
// for n = first, ..., first + count - 1. At n = 1 the relative gap is 0.2, too
// coarse for |lambda - lambda~| << lambda, hence first = 2.
std::vector<GronwallPoint> gronwall_points(int count, int first = 2);

Report gronwall_scan(const std::vector<GronwallPoint>& pts, double s = 0.0);

}  // namespace dnls
