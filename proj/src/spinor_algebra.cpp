#include "dirfol/spinor_algebra.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace dirfol {

namespace {

std::array<Matrix4c, 4> make_gammas() {
  const complexd I(0, 1);
  std::array<Matrix4c, 4> g;
  for (auto& m : g) m.setZero();
  // gamma^0 = diag(1,1,-1,-1)
  g[0](0, 0) = 1.0;
  g[0](1, 1) = 1.0;
  g[0](2, 2) = -1.0;
  g[0](3, 3) = -1.0;
  // gamma^i = [[0, sigma_i], [-sigma_i, 0]]
  // sigma_1
  g[1](0, 3) = 1.0;
  g[1](1, 2) = 1.0;
  g[1](2, 1) = -1.0;
  g[1](3, 0) = -1.0;
  // sigma_2
  g[2](0, 3) = -I;
  g[2](1, 2) = I;
  g[2](2, 1) = I;
  g[2](3, 0) = -I;
  // sigma_3
  g[3](0, 2) = 1.0;
  g[3](1, 3) = -1.0;
  g[3](2, 0) = -1.0;
  g[3](3, 1) = 1.0;
  return g;
}

std::array<Matrix4c, 3> make_alphas() {
  std::array<Matrix4c, 3> a;
  const auto g0 = make_gammas();
  for (int i = 0; i < 3; ++i) a[i] = g0[0] * g0[i + 1];
  return a;
}

const std::array<Matrix4c, 4> kGamma = make_gammas();
const std::array<Matrix4c, 3> kAlpha = make_alphas();

}  // namespace

double minkowski_dot(const Vector4d& v, const Vector4d& w) {
  return v[0] * w[0] - v[1] * w[1] - v[2] * w[2] - v[3] * w[3];
}

const Matrix4c& gamma(int a) { return kGamma.at(static_cast<size_t>(a)); }
const Matrix4c& alpha(int i) { return kAlpha.at(static_cast<size_t>(i)); }
const Matrix4c& beta() { return kGamma[0]; }

Matrix4c gamma_dot(const Vector4d& v) {
  Matrix4c m = v[0] * kGamma[0];
  for (int i = 0; i < 3; ++i) m -= v[i + 1] * kGamma[i + 1];
  return m;
}

Matrix4c alpha_dot(const Vector3d& u) {
  Matrix4c m = u[0] * kAlpha[0];
  for (int i = 1; i < 3; ++i) m += u[i] * kAlpha[i];
  return m;
}

FourVelocity::FourVelocity(const Vector4d& value) : v(value) {
  const double shell = minkowski_dot(v, v);
  if (std::abs(shell - 1.0) > 1e-12 || v[0] <= 0.0)
    throw std::invalid_argument("FourVelocity: not on the unit hyperboloid");
}

FourVelocity::FourVelocity(const Vector3d& spatial) {
  v[0] = std::sqrt(1.0 + spatial.squaredNorm());
  v.tail<3>() = spatial;
}

Matrix4c energy_projector(const Vector4d& v, int sign) {
  const double shell = minkowski_dot(v, v);
  if (std::abs(shell - 1.0) > 1e-9)
    throw std::invalid_argument("energy_projector: v is off the hyperboloid");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("energy_projector: sign must be +-1");
  Matrix4c p = 0.5 * Matrix4c::Identity();
  p += (0.5 * sign) * gamma_dot(v);
  return p;
}

Matrix4c k_matrix(double tau, const Vector3d& z) {
  const double ctau = std::sqrt(tau * tau + 1.0);
  const double cz = std::sqrt(z.squaredNorm() + 1.0);
  const double tz = std::sqrt(tau * tau + z.squaredNorm() + 1.0);
  const double tmz = ctau * cz + tz;
  const double pref = 1.0 / std::sqrt(2.0 * tz);
  const double root = std::sqrt(tmz);
  Matrix4c m = (pref * root) * Matrix4c::Identity();
  m += (pref * tau / root) * (beta() * gamma_dot(Vector4d(0, -z[0], -z[1], -z[2])));
  return m;
}

Matrix4c k_matrix_inverse(double tau, const Vector3d& z) {
  return beta() * k_matrix(tau, z) * beta();
}

Matrix4c k_infinity(int sign, const Vector3d& z) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("k_infinity: sign must be +-1");
  const double cz = std::sqrt(z.squaredNorm() + 1.0);
  const double root = std::sqrt(1.0 + cz);
  const double inv = 1.0 / std::sqrt(2.0);
  Matrix4c m = (inv * root) * Matrix4c::Identity();
  m += (inv * sign / root) * (beta() * gamma_dot(Vector4d(0, -z[0], -z[1], -z[2])));
  return m;
}

Matrix4c k_infinity_inverse(int sign, const Vector3d& z) {
  return beta() * k_infinity(sign, z) * beta();
}

Matrix4c phi_phase(double tau) {
  Matrix4c m = Matrix4c::Zero();
  const complexd lower = std::polar(1.0, -tau);
  const complexd upper = std::polar(1.0, tau);
  m(0, 0) = lower;
  m(1, 1) = lower;
  m(2, 2) = upper;
  m(3, 3) = upper;
  return m;
}

}  // namespace dirfol
