/* Exact 4x4 complex algebra for the Dirac matrices, energy projectors,
 * the foliation boost K and its tau -> +-infinity limits, and the
 * evolution-picture phase exp(-i tau beta).
 *
 * Conventions: Minkowski signature (+,-,-,-), Dirac (standard)
 * representation with gamma^0 = diag(1,1,-1,-1). Four-vectors are stored
 * with contravariant components (v^0, v^1, v^2, v^3).
 */
#pragma once

#include <Eigen/Dense>
#include <complex>

namespace dirfol {

using complexd = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;
using Vector3d = Eigen::Vector3d;
using Vector4d = Eigen::Vector4d;
using Matrix3d = Eigen::Matrix3d;
using Matrix4d = Eigen::Matrix4d;

/// eta_ab v^a w^b = v0*w0 - v.w
double minkowski_dot(const Vector4d& v, const Vector4d& w);

/// gamma^a in the Dirac representation, a = 0..3. Entries are exact integers.
const Matrix4c& gamma(int a);

/// alpha^i = gamma^0 gamma^i, i = 0..2.
const Matrix4c& alpha(int i);

/// beta = gamma^0.
const Matrix4c& beta();

/// gamma . v = v_a gamma^a = v^0 gamma^0 - v^i gamma^i (contravariant input).
Matrix4c gamma_dot(const Vector4d& v);

/// alpha . u for a spatial 3-vector.
Matrix4c alpha_dot(const Vector3d& u);

/// Four-velocity on the unit mass hyperboloid v.v = 1, v^0 > 0.
struct FourVelocity {
  Vector4d v;
  FourVelocity() : v(1, 0, 0, 0) {}
  explicit FourVelocity(const Vector4d& value);          // validates the shell
  explicit FourVelocity(const Vector3d& spatial);        // lifts: v0 = sqrt(1+|u|^2)
  const Vector3d spatial() const { return v.tail<3>(); }
};

/// P_+-(v) = (1 +- gamma.v)/2. Rejects v with |v.v - 1| > 1e-9.
Matrix4c energy_projector(const Vector4d& v, int sign);
inline Matrix4c energy_projector(const FourVelocity& v, int sign) {
  return energy_projector(v.v, sign);
}

/// Boost K(tau,z) mapping the foliation normal frame to the lab frame:
///   K = (2 tz)^(-1/2) [ sqrt(tmz) + (tau/sqrt(tmz)) gamma^0 z.gamma ],
/// tz = sqrt(tau^2+|z|^2+1), tmz = <tau><z> + tz. K is hermitian,
/// K^-1 = gamma^0 K gamma^0, det K = 1, and K^-1 (gamma.n) K = gamma^0
/// for the unit normal n of the foliation.
Matrix4c k_matrix(double tau, const Vector3d& z);
Matrix4c k_matrix_inverse(double tau, const Vector3d& z);

/// K(+-infinity, z) = 2^(-1/2)[(1+<z>)^(1/2) +- (1+<z>)^(-1/2) gamma^0 z.gamma].
/// Satisfies K(-inf, z) = K(+inf, -z) and K(inf,v)^-1 (gamma.v) K(inf,v) = beta
/// for v = (<v>, v).
Matrix4c k_infinity(int sign, const Vector3d& z);
Matrix4c k_infinity_inverse(int sign, const Vector3d& z);

/// Phi(tau) = exp(-i tau beta) = diag(e^-itau, e^-itau, e^+itau, e^+itau).
Matrix4c phi_phase(double tau);

/// exp(-i sigma beta) for arbitrary sigma (same closed form).
inline Matrix4c exp_minus_i_beta(double sigma) { return phi_phase(sigma); }

}  // namespace dirfol
