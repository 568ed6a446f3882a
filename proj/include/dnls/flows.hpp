#pragma once

#include <string>
#include <vector>

#include "dnls/grid.hpp"
#include "dnls/jost.hpp"
#include "dnls/report.hpp"

namespace dnls {

enum class FlowKind { dnls, hk, diff, linear };
enum class Scheme { if_rk4, etd_rk4 };

std::string to_string(FlowKind k);
std::string to_string(Scheme s);
FlowKind parse_flow_kind(const std::string& s);
Scheme parse_scheme(const std::string& s);

struct FlowSpec {
    FlowKind kind = FlowKind::dnls;
    double kappa = 4.0;         // hk and diff only
    double dt = 1e-4;
    double T = 1.0;
    Scheme scheme = Scheme::if_rk4;
    int record_every = 1;
    bool backward = false;      // integrate from 0 down to -T
    bool diagnostics = false;   // M, H, H2 and a(i kappa) at recorded times
    std::vector<double> det_kappas{2.0, 8.0};
    double edge_tol = 1e-6;     // boundary-decay guard at recorded times; 0 disables
};

void validate(const FlowSpec& s);

struct Diagnostics {
    double t = 0.0;
    double M = 0.0, H = 0.0, H2 = 0.0;
    std::vector<cplx> a;  // a(i kappa) for spec.det_kappas
};

struct Trajectory {
    FlowSpec spec;
    std::vector<double> times;
    std::vector<Field> fields;
    std::vector<Diagnostics> diagnostics;
    double stiffness = 0.0;  // dt max|xi|^2, reported for reference
    int steps = 0;

    double record_dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

// q_t = i q'' - (|q|^2 q)', cubic product dealiased
Field dnls_rhs(const Field& q);
Field linear_rhs(const Field& q);

// The H_k vector field p * 2i k d[sqrt(k) g12(k) - sqrt(-k) g12(-k)], with
// the phase p fixed once by flow_phase()
Field hk_rhs(const SpectralParam& k, const Field& q);
// dnls_rhs - hk_rhs
Field diff_rhs(const SpectralParam& k, const Field& q);
// -i p d F_k(q), F_k = -q' - i|q|^2 q + 2k[sqrt(k) g12(k) - sqrt(-k) g12(-k)]
Field diff_rhs_F(const SpectralParam& k, const Field& q);

// linear symbols in FFT order
CArray linear_symbol(const Grid& g, FlowKind kind, double kappa);

// The phase p in {1, -1, i, -i} relating the bracket to the flows. Chosen on
// first use on a small Gaussian as the unique p with (a) p d(dH/dqbar) equal to
// dnls_rhs and (b) the difference field small at large kappa; then frozen.
struct PhaseCalibration {
    cplx phase = 1.0;
    double hamiltonian_mismatch = 0.0;  // (a) for the chosen phase
    double difference_size = 0.0;       // (b) for the chosen phase
    std::vector<double> mismatch_all;   // (a) for 1, -1, i, -i
    std::vector<double> difference_all; // (b) for 1, -1, i, -i
};

const PhaseCalibration& flow_phase();
std::string phase_label(cplx p);

Trajectory evolve(const FlowSpec& spec, const Field& q0);
// single field at the final time
Field evolve_to(const FlowSpec& spec, const Field& q0);
// times covering [-T, T] (backward run reversed, then forward run)
Trajectory evolve_window(const FlowSpec& spec, const Field& q0);

// ||dnls_t q0 - hk_t diff_t q0|| / ||q0||
double commutativity_residual(const Field& q0, const SpectralParam& k, double t, double dt = 1e-3,
                              Scheme scheme = Scheme::if_rk4, double hk_sign = 1.0);

// sup over |t| <= T and mu of ||psi_mu^12 (q(t) - q0)|| along the difference flow
Report diff_convergence_scan(const Field& q0, const std::vector<double>& kappas, double T, double dt = 1e-3,
                             int record_every = 10);

// For a DNLS trajectory: the gauge image w = q e^{i nu Phi} against
//   i w_t + w'' = 2i(nu-1)|w|^2 w' + i(2nu-1) w^2 conj(w)' - nu(2nu-1)|w|^4 w / 2
// (nu = 1/2 is i w_t + w'' + i|w|^2 w' = 0), and the boost v = e^{ikx - ik^2 t} q(x - 2kt)
// against i v_t + v'' + i(|v|^2 v)' + k|v|^2 v = 0. Residuals are max L2 norms
// over interior snapshots divided by max ||w''||; d_t by central differences.
Report gauge_check(const Trajectory& traj, double nu = 0.5, double k = 0.0, double tol = 1e-6);

// residuals of the two printed forms of i d/dt g12 along a DNLS trajectory,
// plus the first form with the sign of its 2 i k |q|^2 term reversed
Report dtg12_residual(const Trajectory& traj, const SpectralParam& k);

}  // namespace dnls
