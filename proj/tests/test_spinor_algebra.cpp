#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dirfol/foliation_geometry.hpp"
#include "dirfol/spinor_algebra.hpp"

using namespace dirfol;

namespace {
double eta(int a, int b) {
  if (a != b) return 0.0;
  return (a == 0) ? 1.0 : -1.0;
}

/// n = (g^tautau)^(-1/2) grad tau, contravariant, from the coordinate map.
Vector4d normal_vector(double tau, const Vector3d& z) {
  const FoliationPoint p = foliation_point(tau, z);
  const JacobianPair jp = jacobians(p);
  Vector4d grad_cov;  // d tau / d x^a
  for (int a = 0; a < 4; ++a) grad_cov[a] = jp.dxi_dx(0, a);
  Vector4d n(grad_cov[0], -grad_cov[1], -grad_cov[2], -grad_cov[3]);
  const double g_uptt = minkowski_dot(n, n);
  return n / std::sqrt(g_uptt);
}
}  // namespace

TEST_CASE("Clifford relations hold exactly") {
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const Matrix4c anti = gamma(a) * gamma(b) + gamma(b) * gamma(a);
      const Matrix4c expect = 2.0 * eta(a, b) * Matrix4c::Identity();
      CHECK((anti - expect).norm() == 0.0);
    }
}

TEST_CASE("gamma hermiticity and traces") {
  CHECK((gamma(0).adjoint() - gamma(0)).norm() == 0.0);
  for (int i = 1; i < 4; ++i)
    CHECK((gamma(i).adjoint() + gamma(i)).norm() == 0.0);
  for (int a = 0; a < 4; ++a) CHECK(std::abs(gamma(a).trace()) == 0.0);
}

TEST_CASE("gamma0 gamma0 is the identity; off-diagonal pairs anticommute") {
  CHECK((gamma(0) * gamma(0) - Matrix4c::Identity()).norm() == 0.0);
  CHECK((gamma(1) * gamma(2) + gamma(2) * gamma(1)).norm() == 0.0);
}

TEST_CASE("energy projector at rest and completeness") {
  const Vector4d rest(1, 0, 0, 0);
  const Matrix4c pp = energy_projector(rest, +1);
  CHECK((pp - 0.5 * (Matrix4c::Identity() + gamma(0))).norm() < 1e-15);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-3, 3);
  for (int k = 0; k < 50; ++k) {
    const Vector3d vv(dist(rng), dist(rng), dist(rng));
    const FourVelocity v(vv);
    const Matrix4c sum =
        energy_projector(v, +1) + energy_projector(v, -1);
    CHECK((sum - Matrix4c::Identity()).norm() < 1e-13);
    CHECK((energy_projector(v, +1) * energy_projector(v, -1)).norm() < 1e-13);
  }
}

TEST_CASE("projector idempotency at v = (sqrt2,1,0,0), direct arithmetic") {
  Vector4d v(std::sqrt(2.0), 1, 0, 0);
  const Matrix4c p = energy_projector(v, +1);
  CHECK((p * p - p).norm() < 1e-13);
}

TEST_CASE("energy projector rejects off-shell vectors") {
  Vector4d bad(1.5, 1, 0, 0);  // v.v = 1.25
  CHECK_THROWS_AS(energy_projector(bad, +1), std::invalid_argument);
}

TEST_CASE("K at tau = 0 is the identity") {
  const Matrix4c k = k_matrix(0.0, Vector3d(0.3, -1.2, 2.0));
  CHECK((k - Matrix4c::Identity()).norm() < 1e-14);
}

TEST_CASE("K is unitary with respect to the gamma0 form") {
  const Matrix4c k = k_matrix(1.3, Vector3d(0.4, 2.0, -0.7));
  CHECK((k.adjoint() * gamma(0) * k - gamma(0)).norm() < 1e-12);
}

TEST_CASE("K rotates the foliation normal onto gamma^0 (analytic and FD n)") {
  const double tau = 1.0;
  const Vector3d z(1, 0, 0);
  const Matrix4c k = k_matrix(tau, z);
  const Matrix4c kinv = k_matrix_inverse(tau, z);

  // n from the closed-form inverse Jacobian
  const Vector4d n = normal_vector(tau, z);
  CHECK(std::abs(minkowski_dot(n, n) - 1.0) < 1e-12);
  CHECK((kinv * gamma_dot(n) * k - gamma(0)).norm() < 1e-11);

  // n from central differences of the coordinate map (independent oracle)
  const Vector4d x = to_cartesian(foliation_point(tau, z));
  const double h = 1e-6;
  Vector4d grad_fd;
  for (int a = 0; a < 4; ++a) {
    Vector4d xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    grad_fd[a] = (from_cartesian(xp).tau - from_cartesian(xm).tau) / (2 * h);
  }
  Vector4d n_fd(grad_fd[0], -grad_fd[1], -grad_fd[2], -grad_fd[3]);
  n_fd /= std::sqrt(minkowski_dot(n_fd, n_fd));
  CHECK((kinv * gamma_dot(n_fd) * k - gamma(0)).norm() < 1e-6);
}

TEST_CASE("K(+-infinity): z = 0, parity relation, boost identity") {
  CHECK((k_infinity(+1, Vector3d::Zero()) - Matrix4c::Identity()).norm() <
        1e-14);
  const Vector3d z(0.7, -1.1, 0.4);
  CHECK((k_infinity(-1, z) - k_infinity(+1, Vector3d(-z))).norm() == 0.0);

  const Vector3d z2(2, 0, 0);
  const FourVelocity v(z2);
  const Matrix4c lhs =
      k_infinity_inverse(+1, z2) * gamma_dot(v.v) * k_infinity(+1, z2);
  CHECK((lhs - gamma(0)).norm() < 1e-11);
}

TEST_CASE("phase Phi(tau)") {
  CHECK((phi_phase(0.0) - Matrix4c::Identity()).norm() == 0.0);
  CHECK((phi_phase(M_PI) + Matrix4c::Identity()).norm() < 1e-14);
  const Matrix4c p = phi_phase(0.73);
  CHECK((p * p.adjoint() - Matrix4c::Identity()).norm() < 1e-14);
}

TEST_CASE("property suite at 1e4 random points, |tau|,|z| <= 20") {
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> dt(-20, 20);
  std::uniform_real_distribution<double> ds(-1, 1);
  double worst_form = 0, worst_normal = 0, worst_det = 0, worst_phase = 0;
  for (int k = 0; k < 10000; ++k) {
    const double tau = dt(rng);
    Vector3d z(ds(rng), ds(rng), ds(rng));
    z *= 20.0 * std::abs(ds(rng));
    const Matrix4c K = k_matrix(tau, z);
    const Matrix4c Kinv = k_matrix_inverse(tau, z);
    worst_form = std::max(worst_form,
                          (K.adjoint() - gamma(0) * Kinv * gamma(0)).norm());
    const Vector4d n = normal_vector(tau, z);
    worst_normal =
        std::max(worst_normal, (Kinv * gamma_dot(n) * K - gamma(0)).norm());
    worst_det = std::max(worst_det, std::abs(K.determinant() - 1.0));

    const double sigma = 10.0 * ds(rng);
    const complexd em = std::polar(1.0, -sigma), ep = std::polar(1.0, sigma);
    const Matrix4c lhs = em * 0.5 * (Matrix4c::Identity() + gamma(0)) +
                         ep * 0.5 * (Matrix4c::Identity() - gamma(0));
    worst_phase = std::max(worst_phase, (lhs - phi_phase(sigma)).norm());
  }
  CHECK(worst_form < 1e-10);
  CHECK(worst_normal < 1e-10);
  CHECK(worst_det < 1e-10);
  CHECK(worst_phase < 1e-13);
}
