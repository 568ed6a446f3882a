#pragma once

#include <vector>

#include "dnls/flows.hpp"
#include "dnls/green.hpp"
#include "dnls/report.hpp"

namespace dnls {

// q i g21/(sqrt(k)(2+gamma)) + qbar g12/(sqrt(k)(2+gamma)); throws when
// |2+gamma| < 0.5 somewhere
Field rho(const SpectralParam& k, const Field& q);
Field rho(const GreenTriple& t, const Field& q);

enum class CurrentForm { first, second };

// (|q|^2 - 2ik) rho + (q' g21 + i qbar' g12)/(sqrt(k)(2+gamma)) + i|q|^2, or the
// equivalent form pairing g21 with (2k + d + i|q|^2) q
Field j_dnls(const SpectralParam& k, const Field& q, CurrentForm form = CurrentForm::second);
Field j_dnls(const GreenTriple& t, const Field& q, CurrentForm form = CurrentForm::second);

// current of the difference flow H - H_kappa (kappa > 0, k != +-kappa). The
// triple at -kappa comes from the symmetry g12(-k) = -conj g21(k),
// g21(-k) = -conj g12(k), gamma(-k) = conj gamma(k).
Field j_diff(const SpectralParam& k, const SpectralParam& kappa, const Field& q);
Field j_diff(const GreenTriple& at_k, const GreenTriple& at_kappa, const GreenTriple& at_minus_kappa,
             const Field& q);

GreenTriple reflect(const GreenTriple& t);

enum class MicroLaw { dnls, diff };

// max over interior snapshots of ||d_t rho + d_x j||, d_t by second-order
// central differences, divided by max(||d_x j||, ||rho||) (absolute if both vanish).
// check_metadata: refuse a law that does not match the trajectory's flow.
double micro_residual(const Trajectory& traj, const SpectralParam& k, MicroLaw law, double kappa = 0.0,
                      bool check_metadata = true);

// residual plus the once-per-run comparison of the reflected triple against a
// fresh solve at -kappa
Report micro_report(const Trajectory& traj, const SpectralParam& k, MicroLaw law, double kappa = 0.0,
                    double tol = 1e-4);

}  // namespace dnls
