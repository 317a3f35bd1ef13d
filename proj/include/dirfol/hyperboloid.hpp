/* Bispinor amplitudes on the unit mass hyperboloid v.v = 1, v^0 > 0, sampled
 * on a tensor-product uniform grid in the spatial part with trapezoidal
 * weights, plus the Gaussian packet family used throughout.
 *
 * The invariant product is (f,g) = sum_k (w_k / v0_k) f_k^+ gamma^0 (gamma.v_k) g_k,
 * the quadrature version of the L^2_gamma(H) product.
 */
#pragma once

#include <functional>
#include <vector>

#include "dirfol/spinor_algebra.hpp"

namespace dirfol {

struct VGridSpec {
  double vmax = 4.0;  // cube |v_i| <= vmax
  int m = 64;         // nodes per axis, inclusive symmetric

  double dv() const { return (m > 1) ? 2.0 * vmax / (m - 1) : 1.0; }
  double coord(int i) const { return (m > 1) ? -vmax + i * dv() : 0.0; }
  std::int64_t size() const { return std::int64_t(m) * m * m; }
  /// trapezoid weight of axis-node i (dv, halved at the ends)
  double axis_weight(int i) const {
    if (m == 1) return 1.0;
    return (i == 0 || i == m - 1) ? 0.5 * dv() : dv();
  }
};

struct HyperboloidAmplitude {
  VGridSpec spec;
  std::vector<Vector4c> values;  // one bispinor per node, node-major
  Vector3d vnode(std::int64_t idx) const {
    const int k = int(idx % spec.m);
    const int j = int((idx / spec.m) % spec.m);
    const int i = int(idx / (std::int64_t(spec.m) * spec.m));
    return Vector3d(spec.coord(i), spec.coord(j), spec.coord(k));
  }
  double weight(std::int64_t idx) const {
    const int k = int(idx % spec.m);
    const int j = int((idx / spec.m) % spec.m);
    const int i = int(idx / (std::int64_t(spec.m) * spec.m));
    return spec.axis_weight(i) * spec.axis_weight(j) * spec.axis_weight(k);
  }
};

/// Invariant norm^2; nonnegative for any sampled amplitude.
double amplitude_norm2(const HyperboloidAmplitude& f);
double amplitude_norm(const HyperboloidAmplitude& f);

/// Analytic amplitude with support metadata (for adaptive quadratures).
struct AnalyticAmplitude {
  std::function<Vector4c(const Vector3d&)> eval;
  Vector3d center = Vector3d::Zero();  // v-space support center
  double radius = 3.0;                 // effective support radius
  double width = 0.5;                  // decay scale (Gaussian sigma)
};

/// Gaussian packet f(v) = A exp(-|v-v0|^2 / 2 sigma^2) * u, with u either a
/// fixed unit spinor or its exact positive-energy projection P_+(v) u0.
struct GaussianPacketSpec {
  Vector3d v0 = Vector3d(0.5, 0, 0);
  double sigma = 0.5;
  Vector4c u0 = Vector4c(1, 0, 0, 0);
  bool project_positive = true;
  double amplitude = 1.0;
  double support_sigmas = 4.5;
};

AnalyticAmplitude gaussian_packet(const GaussianPacketSpec& spec);

/// Normalizes so the quadrature norm on the given sampling grid is 1;
/// returns the scaled analytic amplitude.
AnalyticAmplitude normalized_packet(const GaussianPacketSpec& spec,
                                    const VGridSpec& sample_grid);

/// Samples an analytic amplitude on a v-grid.
HyperboloidAmplitude sample_amplitude(const AnalyticAmplitude& f,
                                      const VGridSpec& spec);

/// Tricubic-free fallback: trilinear interpolation of a sampled amplitude.
Vector4c interpolate_amplitude(const HyperboloidAmplitude& f, const Vector3d& v);

}  // namespace dirfol
