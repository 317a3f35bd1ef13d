/* Wave-operator probes: existence and completeness series, the corrector-X
 * diagnostics, and the weighted-norm estimate check.
 *
 * The existence probe composes the exact free evolution with the backward
 * interacting stepper. The completeness probe records the evolution-picture
 * sequence Phi(tau)^* (1 + X) U(tau,0) psi, whose strong convergence is
 * equivalent (through the closed-form free limits) to the adjoint
 * wave-operator limit; the inverse free map on a fixed grid would alias.
 */
#pragma once

#include "dirfol/evolution.hpp"

namespace dirfol {

struct ConvergenceSeries {
  std::vector<double> taus;    // sample times (increments are at taus[1..])
  std::vector<double> values;  // increment / distance series
  std::vector<double> norms;   // per-sample state norms
  double fitted_exponent = 0;
  bool fit_valid = false;
  Verdict verdict = Verdict::INCONCLUSIVE;
  double floor = 0;  // numerical floor used for the converged shortcut
};

/// Least-squares log-log slope over the outer half of the samples.
double fit_powerlaw_outer_half(const std::vector<double>& taus,
                               const std::vector<double>& values,
                               bool* valid = nullptr);

/// PASS iff the increment series is power-law summable (exponent < -1) over
/// the outer half, or sits below the numerical floor; else INCONCLUSIVE.
void classify_series(ConvergenceSeries& s, double floor);

struct ProbeConfig {
  EvolutionConfig evo;
  GaussianPacketSpec packet;
  std::vector<double> tau_samples;  // geometric ladder, ascending
  TransformOptions free_opts;      // for the exact free references
  double floor = 5e-4;
  double support_eps = 1e-8;       // defines the packet's effective radius
};

/// Default geometric ladder 2 * 1.35^k up to tau_max, snapped to dtau.
std::vector<double> geometric_ladder(double tau0, double ratio, double tau_max,
                                     double dtau);

/// Existence: W_k = U(0,tau_k) U_0(tau_k,0) psi, increment series.
struct ForwardProbeResult {
  ConvergenceSeries series;
  SpinorGridField limit_state;  // last W_k (approximates the wave operator image)
  double psi_norm = 0;
};
ForwardProbeResult forward_wave_probe(const ProbeConfig& cfg);

/// Completeness: s_k = Phi(tau_k)^* U(tau_k,0) psi (plain) and with (1+X);
/// the X-norm series carries its own slope fit.
struct InverseProbeResult {
  ConvergenceSeries plain;
  ConvergenceSeries corrected;
  ConvergenceSeries x_norms;  // ||X(tau_k) U(tau_k,0) psi||, fitted slope
  SpinorGridField limit_state;      // last corrected sample
  SpinorGridField adjoint_image;    // U_{0Phi}(0,+inf) applied to it (~ Omega* psi)
  double unitarity_defect = 0;      // | ||adjoint_image|| - ||psi|| |
};
InverseProbeResult inverse_wave_probe(const ProbeConfig& cfg);

/// Evolution-picture probe U(0,tau_k) Phi(tau_k) psi: distance to the
/// Richardson-extrapolated limit, plus the limit state itself.
struct PhiProbeResult {
  ConvergenceSeries series;
  SpinorGridField extrapolated_limit;
};
PhiProbeResult phi_picture_probe(const ProbeConfig& cfg);

/// Weighted diagnostic: || xi(<z>)^-1 s pi_Lambda U(tau,0) psi || along the
/// forward run, with the companion series * xi(<tau>).
struct WeightedDiagnostic {
  std::vector<double> taus;
  std::vector<double> values;
  std::vector<double> companion;  // values * xi(<tau>)
  bool companion_bounded = false; // within 2x the tau in [2,6] median
  double band_median = 0;
};
WeightedDiagnostic weighted_diagnostic(const ProbeConfig& cfg,
                                       const WeightFunction& xi);

/// || xi^-1 s pi_Lambda chi || for one state (exposed for tests).
double weighted_norm(const SpinorGridField& chi, const WeightFunction& xi,
                     const PotentialSlice* W, int stencil_order = 4);

}  // namespace dirfol
