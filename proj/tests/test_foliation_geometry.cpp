#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dirfol/foliation_geometry.hpp"

using namespace dirfol;

namespace {
std::mt19937 rng(424242);
FoliationPoint random_point(double scale = 20.0) {
  std::uniform_real_distribution<double> d(-1, 1);
  const double tau = scale * d(rng);
  Vector3d z(d(rng), d(rng), d(rng));
  z *= scale * std::abs(d(rng));
  return foliation_point(tau, z);
}
}  // namespace

TEST_CASE("coordinate map examples") {
  CHECK((to_cartesian(foliation_point(0, Vector3d(1, 0, 0))) -
         Vector4d(0, 1, 0, 0))
            .norm() < 1e-15);
  CHECK((to_cartesian(foliation_point(1, Vector3d::Zero())) -
         Vector4d(1, 0, 0, 0))
            .norm() < 1e-15);
  const double s2 = std::sqrt(2.0);
  CHECK((to_cartesian(foliation_point(1, Vector3d(1, 0, 0))) -
         Vector4d(s2, s2, 0, 0))
            .norm() < 1e-14);
}

TEST_CASE("inverse map examples and round trip") {
  {
    const FoliationPoint p = from_cartesian(Vector4d(0, 5, 0, 0));
    CHECK(p.tau == 0.0);
    CHECK((p.z - Vector3d(5, 0, 0)).norm() < 1e-14);
  }
  {
    const FoliationPoint p = from_cartesian(Vector4d(3, 0, 0, 0));
    CHECK(p.tau == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(p.z.norm() < 1e-14);
  }
  {
    const double s2 = std::sqrt(2.0);
    const FoliationPoint p = from_cartesian(Vector4d(s2, s2, 0, 0));
    CHECK(std::abs(p.tau - 1.0) < 1e-12);
    CHECK((p.z - Vector3d(1, 0, 0)).norm() < 1e-12);
  }
  for (int k = 0; k < 2000; ++k) {
    const FoliationPoint p = random_point();
    const FoliationPoint q = from_cartesian(to_cartesian(p));
    CHECK(std::abs(p.tau - q.tau) < 1e-10 * (1.0 + std::abs(p.tau)));
    CHECK((p.z - q.z).norm() < 1e-10 * (1.0 + p.z.norm()));
  }
}

TEST_CASE("cached scalars satisfy their defining relations") {
  for (int k = 0; k < 200; ++k) {
    const FoliationPoint p = random_point();
    CHECK(std::abs(p.ctau * p.ctau - (p.tau * p.tau + 1)) <
          1e-13 * p.ctau * p.ctau);
    CHECK(std::abs(p.cz * p.cz - (p.z.squaredNorm() + 1)) <
          1e-13 * p.cz * p.cz);
    CHECK(std::abs(p.tz * p.tz - (p.tau * p.tau + p.z.squaredNorm() + 1)) <
          1e-13 * p.tz * p.tz);
  }
}

TEST_CASE("jacobians: identity at the origin, inverse property, FD oracle") {
  const JacobianPair j0 = jacobians(foliation_point(0, Vector3d::Zero()));
  CHECK((j0.dx_dxi - Matrix4d::Identity()).norm() < 1e-15);
  CHECK((j0.dxi_dx - Matrix4d::Identity()).norm() < 1e-15);

  for (int k = 0; k < 2000; ++k) {
    const FoliationPoint p = random_point();
    const JacobianPair jp = jacobians(p);
    CHECK((jp.dx_dxi * jp.dxi_dx - Matrix4d::Identity()).norm() < 1e-11);
  }

  // dx0/dtau at (1,(1,0,0)) equals <z> = sqrt(2); FD oracle with h = 1e-6
  const FoliationPoint p = foliation_point(1.0, Vector3d(1, 0, 0));
  const JacobianPair jp = jacobians(p);
  const double h = 1e-6;
  const double fd = (to_cartesian(foliation_point(1.0 + h, p.z))[0] -
                     to_cartesian(foliation_point(1.0 - h, p.z))[0]) /
                    (2 * h);
  CHECK(std::abs(jp.dx_dxi(0, 0) - std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(fd - jp.dx_dxi(0, 0)) < 1e-7);
}

TEST_CASE("frame limits: tau = 0 and z = 0") {
  {
    const GeometryFrame fr = frame(foliation_point(0, Vector3d(1.5, -0.4, 2.2)));
    const double cz2 = fr.p.cz * fr.p.cz;
    CHECK((fr.rho - cz2 * Matrix3d::Identity()).norm() < 1e-12 * cz2);
  }
  {
    const GeometryFrame fr = frame(foliation_point(1.7, Vector3d::Zero()));
    const double it2 = 1.0 / (fr.p.ctau * fr.p.ctau);
    CHECK((fr.rho - it2 * Matrix3d::Identity()).norm() < 1e-13);
    CHECK((fr.mu - beta()).norm() < 1e-13);
    for (int i = 0; i < 3; ++i)
      CHECK((fr.lambda[i] - alpha(i) / fr.p.ctau).norm() < 1e-13);
  }
}

TEST_CASE("anticommutator identity at tau=1, z=(1,0,0)") {
  const GeometryFrame fr = frame(foliation_point(1, Vector3d(1, 0, 0)));
  const Matrix4c anti =
      0.5 * (fr.lambda[0] * fr.lambda[1] + fr.lambda[1] * fr.lambda[0]);
  CHECK(std::abs(fr.rho(0, 1)) < 1e-15);
  CHECK(anti.norm() < 1e-12);
}

TEST_CASE("metric from jacobians matches the closed form; g_taui = 0") {
  const Vector4d eta(1, -1, -1, -1);
  for (int k = 0; k < 10000; ++k) {
    const FoliationPoint p = random_point();
    const JacobianPair jp = jacobians(p);
    const MetricBlocks mb = metric(p);
    Matrix4d g = Matrix4d::Zero();
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        for (int a = 0; a < 4; ++a)
          g(mu, nu) += jp.dx_dxi(a, mu) * jp.dx_dxi(a, nu) * eta[a];
    const double scale = std::abs(mb.g_tautau) + mb.g_ij.norm();
    CHECK(std::abs(g(0, 0) - mb.g_tautau) < 1e-10 * scale);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(g(0, i + 1)) < 1e-10 * scale);
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(g(i + 1, j + 1) - mb.g_ij(i, j)) < 1e-10 * scale);
    }
    // spatial determinant
    CHECK(std::abs(mb.g_ij.determinant() - mb.ghat) <
          1e-10 * std::abs(mb.ghat));
  }
}

TEST_CASE("transport-quantity identities at 1e4 random points") {
  double worst_anti = 0, worst_rho = 0, worst_s = 0, worst_h2a = 0,
         worst_h2b = 0, worst_h2c = 0, worst_mu = 0;
  for (int k = 0; k < 10000; ++k) {
    const FoliationPoint p = random_point();
    const GeometryFrame fr = frame(p);
    for (int i = 0; i < 3; ++i) {
      worst_anti = std::max(
          worst_anti, (fr.lambda[i] * beta() + beta() * fr.lambda[i]).norm());
      worst_mu = std::max(
          worst_mu, (fr.lambda[i] * fr.mu + fr.mu * fr.lambda[i]).norm());
      for (int j = 0; j < 3; ++j) {
        const Matrix4c anti =
            0.5 * (fr.lambda[i] * fr.lambda[j] + fr.lambda[j] * fr.lambda[i]);
        worst_rho = std::max(
            worst_rho,
            (anti - fr.rho(i, j) * Matrix4c::Identity()).norm() /
                (1.0 + std::abs(fr.rho(i, j))));
      }
    }
    const Matrix3d ss = fr.s * fr.s;
    worst_s = std::max(worst_s, (ss - fr.rho).norm() / (1.0 + fr.rho.norm()));

    // rho positive definite, Q and N positive with N <= const/<tau>^2
    Eigen::SelfAdjointEigenSolver<Matrix3d> es(fr.rho);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    CHECK(fr.Q > 0.0);
    CHECK(fr.N > 0.0);
    CHECK(fr.N * p.ctau * p.ctau < 50.0);

    const H2Residuals h2 = h2_residuals(p);
    worst_h2a = std::max(worst_h2a, h2.second_order);
    worst_h2b = std::max(worst_h2b, h2.first_order);
    worst_h2c = std::max(worst_h2c, h2.zeroth_order);
  }
  CHECK(worst_anti < 1e-12);
  CHECK(worst_mu < 1e-12);
  CHECK(worst_rho < 1e-11);
  CHECK(worst_s < 1e-11);
  CHECK(worst_h2a < 1e-10);
  CHECK(worst_h2b < 1e-10);
  CHECK(worst_h2c < 1e-10);
}

TEST_CASE("divergence closed form for rho, against central differences") {
  for (int k = 0; k < 200; ++k) {
    const FoliationPoint p = random_point(10.0);
    const Vector3d dv = div_rho(p);
    const double h = 1e-5;
    Vector3d fd = Vector3d::Zero();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        Vector3d zp = p.z, zm = p.z;
        zp[i] += h;
        zm[i] -= h;
        const Matrix3d rp = frame(foliation_point(p.tau, zp)).rho;
        const Matrix3d rm = frame(foliation_point(p.tau, zm)).rho;
        fd[j] += (rp(i, j) - rm(i, j)) / (2 * h);
      }
    }
    CHECK((dv - fd).norm() < 1e-6 * (1.0 + dv.norm()));
  }
}

TEST_CASE("analytic lambda derivatives match finite differences") {
  for (int k = 0; k < 100; ++k) {
    const FoliationPoint p = random_point(8.0);
    const double h = 1e-5;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Vector3d zp = p.z, zm = p.z;
        zp[j] += h;
        zm[j] -= h;
        const Matrix4c fd =
            (frame(foliation_point(p.tau, zp)).lambda[i] -
             frame(foliation_point(p.tau, zm)).lambda[i]) /
            (2 * h);
        CHECK((dlambda(p, i, j) - fd).norm() < 2e-6 * (1.0 + fd.norm()));
      }
    // divergence and its gradient
    Matrix4c dl = Matrix4c::Zero();
    for (int i = 0; i < 3; ++i) dl += dlambda(p, i, i);
    CHECK((dl - div_lambda(p)).norm() < 1e-12 * (1.0 + dl.norm()));
    for (int j = 0; j < 3; ++j) {
      Vector3d zp = p.z, zm = p.z;
      zp[j] += h;
      zm[j] -= h;
      const Matrix4c fd = (div_lambda(foliation_point(p.tau, zp)) -
                           div_lambda(foliation_point(p.tau, zm))) /
                          (2 * h);
      CHECK((d_div_lambda(p, j) - fd).norm() < 2e-6 * (1.0 + fd.norm()));
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Vector3d zp = p.z, zm = p.z;
        zp[i] += h;
        zm[i] -= h;
        const Matrix4c fd = (frame(foliation_point(p.tau, zp)).Lambda[j] -
                             frame(foliation_point(p.tau, zm)).Lambda[j]) /
                            (2 * h);
        CHECK((dLambda(p, i, j) - fd).norm() < 2e-6 * (1.0 + fd.norm()));
      }
  }
}

TEST_CASE("rho tau-derivative: sign(tau) (drho + 2|tau|/<tau>^2 rho) <= 0") {
  for (int k = 0; k < 500; ++k) {
    FoliationPoint p = random_point();
    if (std::abs(p.tau) < 1e-6) p.tau = 1.0;
    const GeometryFrame fr = frame(p);
    const Matrix3d lhs =
        ((p.tau > 0) ? 1.0 : -1.0) *
        (rho_tau_derivative(p) +
         (2.0 * std::abs(p.tau) / (p.ctau * p.ctau)) * fr.rho);
    Eigen::SelfAdjointEigenSolver<Matrix3d> es(lhs);
    CHECK(es.eigenvalues().maxCoeff() < 1e-12);
    // cross-check against finite differences in tau
    const double h = 1e-5;
    const Matrix3d fd = (frame(foliation_point(p.tau + h, p.z)).rho -
                         frame(foliation_point(p.tau - h, p.z)).rho) /
                        (2 * h);
    CHECK((rho_tau_derivative(p) - fd).norm() < 1e-5 * (1.0 + fd.norm()));
  }
}

TEST_CASE("lambda envelope margins and coordinate inequalities") {
  double min_margin = 1e300;
  for (int k = 0; k < 5000; ++k) {
    const FoliationPoint p = random_point();
    const GeometryFrame fr = frame(p);
    for (int i = 0; i < 3; ++i) {
      // |lambda^i| <= C(tau) <z> with C(tau) = 5/<tau>
      const double bound = 5.0 / p.ctau * p.cz;
      min_margin = std::min(min_margin,
                            bound - fr.lambda[i].operatorNorm());
    }
    const PointInequalities pi = coordinate_inequalities(p);
    CHECK(pi.plus_margin > -1e-10);
    CHECK(pi.minus_margin > -1e-10);
  }
  MESSAGE("lambda envelope worst margin: ", min_margin);
  CHECK(min_margin > 0.0);
}

TEST_CASE("paper-form cross-checks for div lambda and Q") {
  for (int k = 0; k < 2000; ++k) {
    const FoliationPoint p = random_point();
    const FrameScalars sc = frame_scalars(p);
    // div lambda = (1/T^2)(2 tau^2/tmz + T/<z>) (z.alpha)
    const double qref = (2.0 * p.tau * p.tau / p.tmz + p.ctau / p.cz) /
                        (p.ctau * p.ctau);
    CHECK(std::abs(sc.q_div - qref) < 5e-12 * (1.0 + std::abs(qref)));
    // Q from the derivative route
    const double w2 = p.z.squaredNorm();
    const double q_deriv =
        (0.5 / p.ctau) * (2.0 * sc.dq_div * w2 * p.cz + sc.q_div * w2 / p.cz +
                          3.0 * sc.q_div * p.cz) -
        0.25 * sc.q_div * sc.q_div * w2;
    CHECK(std::abs(q_deriv - sc.q_big) < 1e-10 * (1.0 + sc.q_big));
  }
}

TEST_CASE("causal radius") {
  CHECK(causal_radius(0, 1, 0) == doctest::Approx(1.0));
  const double r = 1.7, tau = 2.3;
  CHECK(causal_radius(0, r, tau) ==
        doctest::Approx(r * std::sqrt(tau * tau + 1) +
                        std::sqrt(r * r + 1) * tau));
  CHECK(causal_radius(0, 1, 1) == doctest::Approx(2.0 * std::sqrt(2.0)));
  // monotone nondecreasing in |tau - tau0|
  double prev = causal_radius(0.5, 2.0, 0.5);
  for (double t = 0.6; t < 5.0; t += 0.25) {
    const double cur = causal_radius(0.5, 2.0, t);
    CHECK(cur >= prev - 1e-12);
    prev = cur;
  }
  CHECK_THROWS_AS(causal_radius(0, -1, 1), std::invalid_argument);
}

TEST_CASE("weight functions") {
  const WeightFunction pw = make_weight(WeightFunction::Kind::Power, 0.25);
  CHECK(pw(16.0) == doctest::Approx(2.0));
  CHECK(pw(1.0) == doctest::Approx(1.0));
  const WeightFunction lg = make_weight(WeightFunction::Kind::Log, 0.25, 1.0);
  CHECK(lg(std::exp(4.0)) == doctest::Approx(2.0));
  CHECK(lg(1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_weight(WeightFunction::Kind::Power, 0.6),
                  std::invalid_argument);
  CHECK_THROWS_AS(pw(0.5), std::invalid_argument);
  for (double u = 1.0; u < 100.0; u *= 1.5) {
    for (const auto& w : {pw, lg}) {
      CHECK(w(u) <= std::pow(u, 0.25) * (1 + 1e-12));
      CHECK(w.deriv(u) <= 0.25 / u * w(u) * (1 + 1e-12));
      CHECK(w.deriv(u) >= 0.0);
    }
  }
}

TEST_CASE("nu estimate |nu| <= kappa/<tau>") {
  const WeightFunction xi = make_weight(WeightFunction::Kind::Power, 0.25);
  for (int k = 0; k < 500; ++k) {
    const FoliationPoint p = random_point();
    const GeometryFrame fr = frame(p, &xi);
    REQUIRE(fr.nu.has_value());
    CHECK(fr.nu->operatorNorm() <= 0.25 / p.ctau * (1 + 1e-9));
  }
}
