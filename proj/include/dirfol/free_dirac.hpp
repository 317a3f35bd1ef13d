/* Exact free-field machinery: the hyperboloid Fourier pair, the closed-form
 * free evolution on the foliation, and the asymptotic picture-limit maps.
 *
 * The quadrature is the direct tensor-product trapezoid sum (no FFT; the
 * phase x(tau,z).v is not a plane wave in z). At tau = 0 the phase IS a
 * plane wave and the same sums are evaluated by a separable three-stage
 * contraction. For analytic amplitudes the v-spacing is chosen from the
 * phase-gradient aliasing bound, and nodes with negligible integrand are
 * skipped.
 */
#pragma once

#include <functional>
#include <limits>

#include "dirfol/grid.hpp"
#include "dirfol/hyperboloid.hpp"

namespace dirfol {

struct TransformOptions {
  double eval_radius = std::numeric_limits<double>::infinity();
  double prune_rel = 1e-14;   // drop v-nodes below this * peak integrand
  double safety = 1.3;        // aliasing safety factor
  int min_axis_nodes = 33;
  int max_axis_nodes = 641;
  bool parallel = true;
};

/// Pointwise evaluation of the Fourier representation at a spacetime point.
Vector4c synthesize(const HyperboloidAmplitude& f, const Vector4d& x);

/// Slice synthesis at tau = 0 (separable fast path, same quadrature).
SpinorGridField synthesize_slice(const HyperboloidAmplitude& f,
                                 const GridSpec& grid);

struct AnalyzeResult {
  HyperboloidAmplitude amplitude;
  double boundary_peak = 0;  // max |chi| on the outer node shell
  bool boundary_warning = false;
};

/// Inversion formula at tau = 0. Warns when the field has not decayed at the
/// box boundary (aliasing risk).
AnalyzeResult analyze(const SpinorGridField& chi0, const VGridSpec& spec,
                      double warn_threshold = 1e-10);

/// [U_0(tau,0) f](z) for a sampled amplitude, on its own quadrature nodes.
SpinorGridField free_evolve_sampled(const HyperboloidAmplitude& f, double tau,
                                    const GridSpec& grid,
                                    const TransformOptions& opts = {});

/// Adaptive v-grid for an analytic amplitude at evolution parameter tau.
VGridSpec adaptive_vgrid(const AnalyticAmplitude& f, double tau,
                         double eval_radius, const GridSpec& grid,
                         const TransformOptions& opts = {});

/// [U_0(tau,0) f](z) for an analytic amplitude (adaptive quadrature).
SpinorGridField free_evolve_exact(const AnalyticAmplitude& f, double tau,
                                  const GridSpec& grid,
                                  const TransformOptions& opts = {});

/// Adjoint transform: the amplitude of a field given on the Sigma_tau slice,
/// i.e. the discrete adjoint of free_evolve on the invariant products.
HyperboloidAmplitude analyze_at_tau(
    const SpinorGridField& chi, const VGridSpec& spec,
    double support_radius = std::numeric_limits<double>::infinity(),
    bool parallel = true, const Vector3d& out_center = Vector3d::Zero(),
    double out_radius = std::numeric_limits<double>::infinity());

/// Closed-form picture-limit map applied pointwise to amplitude samples on
/// the z-grid nodes:
///   sign=+1: out(z) = -i e^{-i pi beta/4} <z>^{-1/2} K_inf(z)^{-1}  f(z)
///   sign=-1: out(z) = +i e^{+i pi beta/4} <z>^{-1/2} K_inf(-z)^{-1} f(-z)
SpinorGridField picture_limit_forward(int sign, const SpinorGridField& f_values);

/// The adjoint-side closed-form bracket (before the final slice synthesis):
///   sign=+1: g(z) = +i <z>^{1/2} K_inf(z) e^{+i pi beta/4} phi(z)
///   sign=-1: g(z) = -i <z>^{1/2} K_inf(z) e^{-i pi beta/4} phi(-z)
SpinorGridField picture_limit_adjoint(int sign, const SpinorGridField& phi);

/// Asymptotic free operator from an amplitude (tau-independent grid field).
SpinorGridField asymptotic_free(int sign,
                                const std::function<Vector4c(const Vector3d&)>& f,
                                const GridSpec& grid);
SpinorGridField asymptotic_free(int sign, const HyperboloidAmplitude& f,
                                const GridSpec& grid);

/// Inverse-direction limit operator: completes the adjoint bracket with the
/// slice synthesis, reusing the z-grid as the quadrature grid.
SpinorGridField picture_limit_inverse(int sign, const SpinorGridField& phi);

}  // namespace dirfol
