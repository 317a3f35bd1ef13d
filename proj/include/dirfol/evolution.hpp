/* Interacting unitary evolution on the z-grid: Hamiltonian application,
 * a norm-preserving Crank-Nicolson stepper (midpoint Hamiltonian, CG on the
 * normal equations 1 + (dtau/2)^2 H^2), and the iterated-integral series
 * cross-check at small tau.
 */
#pragma once

#include <optional>
#include <stdexcept>

#include "dirfol/free_dirac.hpp"
#include "dirfol/gauge.hpp"
#include "dirfol/grid.hpp"

namespace dirfol {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvolutionConfig {
  GridSpec grid;
  double tau_start = 0.0;
  double tau_end = 2.0;
  double dtau = 1e-2;
  int stencil_order = 4;  // 2 or 4
  double solve_tol = 1e-10;
  int solve_max_iter = 500;
  double mask_width = 1.5;  // radial cosine mask on [half - width, half]
  bool apply_mask = true;
  std::optional<double> r_support;  // declared compact support radius
  bool restrict_support = true;     // sample W only on the live support
  double support_margin = 2.5;
  const GaugePlan* gauge = nullptr;  // null = free evolution
};

/// Throws ConfigError when a declared compact support cannot stay inside the
/// grid: causal_radius(tau_start, r_support, tau_end) + mask width must not
/// exceed the box half-extent.
void validate(const EvolutionConfig& cfg);

/// Per-slice potential data: W = a_tau + a_i lambda^i.
struct PotentialSlice {
  double tau = 0;
  std::vector<double> a_tau, ax, ay, az;  // zero-filled outside the support
  bool empty() const { return a_tau.empty(); }
};
PotentialSlice sample_slice(const GaugePlan* plan, double tau,
                            const GridSpec& grid, double support_radius);

/// Geometry coefficients of the slice (lambda^i = lam_a alpha^i +
/// lam_c (z.alpha) z^i, mu = mu_s beta).
struct CoeffSlice {
  double tau = 0;
  std::vector<double> lam_a, lam_c, mu_s;
};
CoeffSlice coeff_slice(double tau, const GridSpec& grid);

/// out = H chi = -(i/2) sum_i [lambda^i d_i chi + d_i(lambda^i chi)]
///       + mu chi + (a_tau + a_i lambda^i) chi.
/// W may be null (free case). Workspace buffers are reused across calls.
struct HWorkspace {
  SpinorGridField u[3], dfield;
};
void apply_H(const SpinorGridField& in, const CoeffSlice& coeff,
             const PotentialSlice* W, int stencil_order, SpinorGridField& out,
             HWorkspace& ws);

struct StepDiagnostics {
  int iterations = 0;
  double rel_residual = 0;
  double mask_loss = 0;  // squared-norm removed by the mask
};

/// One Crank-Nicolson step tau -> tau + dtau (dtau may be negative).
SpinorGridField step(const SpinorGridField& chi, double dtau,
                     const EvolutionConfig& cfg, StepDiagnostics* diag = nullptr);

struct EvolveResult {
  SpinorGridField state;
  std::vector<double> taus;        // step boundaries
  std::vector<double> norms;       // grid norm after each step
  std::vector<int> iterations;     // CG iterations per step
  double total_mask_loss = 0;
  std::vector<SpinorGridField> snapshots;
  std::vector<double> snapshot_taus;
};

EvolveResult evolve(const SpinorGridField& chi0, const EvolutionConfig& cfg,
                    const std::vector<double>& snapshot_taus = {});

/// Applies the interaction matrix W(tau) to a field (pointwise).
void apply_W(const SpinorGridField& in, const CoeffSlice& coeff,
             const PotentialSlice& W, SpinorGridField& out);

/// Applies the corrector X = (1/2) mu^{-1} a_i lambda^i pointwise.
void apply_X(const SpinorGridField& in, const CoeffSlice& coeff,
             const PotentialSlice& W, SpinorGridField& out);

/// Iterated Duhamel-series reference for |tau| <= 0.6, order <= 3:
/// sum_{k<=n} U^(k)(tau,0) chi0 with exact free legs (sampled transforms)
/// and pointwise W, on a composite-Simpson ladder.
SpinorGridField dyson_reference(const SpinorGridField& chi0, double tau,
                                int order, const EvolutionConfig& cfg,
                                const VGridSpec& vspec, int ladder = 16);

}  // namespace dirfol
