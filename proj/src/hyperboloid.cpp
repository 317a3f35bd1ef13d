#include "dirfol/hyperboloid.hpp"

#include <cmath>

namespace dirfol {

double amplitude_norm2(const HyperboloidAmplitude& f) {
  double acc = 0.0;
  const std::int64_t N = f.spec.size();
  for (std::int64_t idx = 0; idx < N; ++idx) {
    const Vector3d vv = f.vnode(idx);
    const double v0 = std::sqrt(1.0 + vv.squaredNorm());
    const Vector4d v4(v0, vv[0], vv[1], vv[2]);
    // f^+ gamma^0 (gamma.v) f
    const Vector4c gf = beta() * (gamma_dot(v4) * f.values[idx]);
    const complexd q = f.values[idx].dot(gf);
    acc += (f.weight(idx) / v0) * q.real();
  }
  return acc;
}

double amplitude_norm(const HyperboloidAmplitude& f) {
  return std::sqrt(std::max(0.0, amplitude_norm2(f)));
}

AnalyticAmplitude gaussian_packet(const GaussianPacketSpec& spec) {
  AnalyticAmplitude a;
  a.center = spec.v0;
  a.radius = spec.support_sigmas * spec.sigma;
  a.width = spec.sigma;
  const GaussianPacketSpec s = spec;
  a.eval = [s](const Vector3d& vv) -> Vector4c {
    const double d2 = (vv - s.v0).squaredNorm();
    const double g = s.amplitude * std::exp(-d2 / (2.0 * s.sigma * s.sigma));
    if (!s.project_positive) return g * s.u0;
    const FourVelocity v(vv);
    return g * (energy_projector(v, +1) * s.u0);
  };
  return a;
}

HyperboloidAmplitude sample_amplitude(const AnalyticAmplitude& f,
                                      const VGridSpec& spec) {
  HyperboloidAmplitude out;
  out.spec = spec;
  out.values.resize(spec.size());
  for (std::int64_t idx = 0; idx < spec.size(); ++idx)
    out.values[idx] = f.eval(out.vnode(idx));
  return out;
}

AnalyticAmplitude normalized_packet(const GaussianPacketSpec& spec,
                                    const VGridSpec& sample_grid) {
  AnalyticAmplitude a = gaussian_packet(spec);
  const double nrm = amplitude_norm(sample_amplitude(a, sample_grid));
  GaussianPacketSpec scaled = spec;
  scaled.amplitude = spec.amplitude / nrm;
  return gaussian_packet(scaled);
}

Vector4c interpolate_amplitude(const HyperboloidAmplitude& f, const Vector3d& v) {
  const VGridSpec& s = f.spec;
  const double dv = s.dv();
  double t[3];
  int i0[3];
  for (int a = 0; a < 3; ++a) {
    const double u = (v[a] + s.vmax) / dv;
    if (u < 0.0 || u > s.m - 1) return Vector4c::Zero();
    i0[a] = std::min(int(u), s.m - 2);
    t[a] = u - i0[a];
  }
  Vector4c acc = Vector4c::Zero();
  for (int di = 0; di < 2; ++di)
    for (int dj = 0; dj < 2; ++dj)
      for (int dk = 0; dk < 2; ++dk) {
        const double w = (di ? t[0] : 1 - t[0]) * (dj ? t[1] : 1 - t[1]) *
                         (dk ? t[2] : 1 - t[2]);
        const std::int64_t idx =
            (std::int64_t(i0[0] + di) * s.m + (i0[1] + dj)) * s.m + (i0[2] + dk);
        acc += w * f.values[idx];
      }
  return acc;
}

}  // namespace dirfol
