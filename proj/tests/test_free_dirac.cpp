#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dirfol/free_dirac.hpp"
#include "dirfol/foliation_geometry.hpp"

using namespace dirfol;

namespace {

GaussianPacketSpec default_packet() {
  GaussianPacketSpec p;
  p.v0 = Vector3d(0.5, 0, 0);
  p.sigma = 0.5;
  return p;
}

AnalyticAmplitude unit_packet(const VGridSpec& ref) {
  return normalized_packet(default_packet(), ref);
}

}  // namespace

TEST_CASE("synthesize of the zero amplitude vanishes") {
  HyperboloidAmplitude f;
  f.spec = VGridSpec{2.0, 9};
  f.values.assign(f.spec.size(), Vector4c::Zero());
  CHECK(synthesize(f, Vector4d(0.3, 1, -2, 0.5)).norm() == 0.0);
}

TEST_CASE("single-node amplitude gives the plane-wave phase") {
  HyperboloidAmplitude f;
  f.spec = VGridSpec{0.0, 1};  // one node at v = (1, 0)
  Vector4c u_plus = Vector4c::Zero();
  u_plus[0] = 1.0;  // P_+(e0) u = u in the Dirac representation
  f.values = {u_plus};
  const Vector4c at0 = synthesize(f, Vector4d(0, 0, 0, 0));
  for (double t : {0.3, 1.0, 2.5}) {
    const Vector4c at_t = synthesize(f, Vector4d(t, 0, 0, 0));
    const Vector4c expect = std::polar(1.0, -t) * at0;
    CHECK((at_t - expect).norm() < 1e-14);
  }
}

TEST_CASE("analyze/synthesize round trip and isometry at criterion sizes") {
  const GridSpec grid{48, 16.0};
  const VGridSpec vspec{4.0, 64};
  const AnalyticAmplitude packet = unit_packet(vspec);
  const HyperboloidAmplitude fs = sample_amplitude(packet, vspec);
  CHECK(amplitude_norm(fs) == doctest::Approx(1.0).epsilon(1e-12));

  const SpinorGridField chi0 = synthesize_slice(fs, grid);
  const double n_chi = grid_norm(chi0);

  const AnalyzeResult ar = analyze(chi0, vspec);
  CHECK_FALSE(ar.boundary_warning);
  const double n_f = amplitude_norm(ar.amplitude);
  CHECK(std::abs(n_f - n_chi) / n_chi < 1e-4);

  const SpinorGridField back = synthesize_slice(ar.amplitude, grid);
  CHECK(grid_distance(back, chi0) / n_chi < 1e-4);

  // errors shrink under simultaneous refinement (box included: the boundary
  // truncation dominates once the interior quadrature has converged)
  const GridSpec grid_c{40, 14.0};
  const VGridSpec vspec_c{4.0, 48};
  const HyperboloidAmplitude fs_c = sample_amplitude(packet, vspec_c);
  const SpinorGridField chi_c = synthesize_slice(fs_c, grid_c);
  const AnalyzeResult ar_c = analyze(chi_c, vspec_c);
  const double err_c = grid_distance(synthesize_slice(ar_c.amplitude, grid_c),
                                     chi_c) /
                       grid_norm(chi_c);
  const double err_f = grid_distance(back, chi0) / n_chi;
  MESSAGE("round-trip error coarse ", err_c, " fine ", err_f);
  CHECK(err_f < err_c);
}

TEST_CASE("analyze warns when the field has boundary mass") {
  const GridSpec grid{24, 8.0};
  SpinorGridField chi(grid, 0.0);
  for (std::int64_t i = 0; i < grid.size(); ++i)
    chi.at(0, i) = 1.0;  // constant field: no boundary decay
  const AnalyzeResult ar = analyze(chi, VGridSpec{2.0, 17});
  CHECK(ar.boundary_warning);
}

TEST_CASE("free evolution at tau = 0 reduces to the slice synthesis") {
  const GridSpec grid{32, 16.0};
  const VGridSpec vspec{4.0, 40};
  const HyperboloidAmplitude fs = sample_amplitude(unit_packet(vspec), vspec);
  const SpinorGridField direct = synthesize_slice(fs, grid);
  const SpinorGridField evolved = free_evolve_sampled(fs, 0.0, grid);
  CHECK(grid_distance(direct, evolved) / grid_norm(direct) < 1e-12);
}

TEST_CASE("free evolution norm conservation at tau = 1, 5, 20") {
  // The evolved state narrows towards the velocity profile (width sigma), so
  // the norm needs dz well below sigma: use the finer grid for late tau.
  const VGridSpec ref{4.0, 64};
  const AnalyticAmplitude packet = unit_packet(ref);

  struct Case {
    double tau, radius;
    int n;
  };
  for (const Case c : {Case{1.0, 11.5, 48}, Case{5.0, 9.0, 64},
                       Case{20.0, 4.5, 64}}) {
    const GridSpec grid{c.n, 24.0};
    TransformOptions opts;
    opts.eval_radius = c.radius;
    opts.safety = 1.05;
    const SpinorGridField chi = free_evolve_exact(packet, c.tau, grid, opts);
    const double n = grid_norm(chi);
    MESSAGE("tau=", c.tau, " norm defect ", std::abs(n - 1.0));
    CHECK(std::abs(n - 1.0) < 1e-4);
  }
}

TEST_CASE("group law: re-analyzing at tau = 1 reproduces the amplitude") {
  const GridSpec grid{48, 24.0};
  const VGridSpec vspec{4.0, 72};
  const AnalyticAmplitude packet = unit_packet(VGridSpec{4.0, 64});

  TransformOptions opts;
  opts.eval_radius = 11.0;
  opts.safety = 1.05;
  const SpinorGridField chi1 = free_evolve_exact(packet, 1.0, grid, opts);
  const HyperboloidAmplitude f1 =
      analyze_at_tau(chi1, vspec, 11.5, true, packet.center, packet.radius);

  const SpinorGridField a = free_evolve_exact(packet, 2.0, grid, opts);
  const SpinorGridField b = free_evolve_sampled(f1, 2.0, grid, opts);
  const double err = grid_distance(a, b) / grid_norm(a);
  MESSAGE("group-law relative error ", err);
  CHECK(err < 4e-3);
}

TEST_CASE("picture-limit composition equals i beta parity, closed form") {
  const GridSpec grid{20, 12.0};
  SpinorGridField phi(grid, 0.0);
  // smooth deterministic test field
  for (std::int64_t i = 0; i < grid.size(); ++i) {
    const Vector3d z = grid.node(i);
    const double g = std::exp(-0.5 * z.squaredNorm());
    phi.set_spinor(i, Vector4c(g, 0.3 * g * z[0], complexd(0, 0.2) * g,
                               0.1 * g * z[2]));
  }
  const SpinorGridField mid = picture_limit_adjoint(-1, phi);
  const SpinorGridField out = picture_limit_forward(+1, mid);
  // expect i beta P phi
  double worst = 0;
  for (std::int64_t i = 0; i < grid.size(); ++i) {
    const int n = grid.n;
    const int k = int(i % n), j = int((i / n) % n), ii = int(i / (n * n));
    const std::int64_t mirror = grid.index(n - 1 - ii, n - 1 - j, n - 1 - k);
    const Vector4c expect =
        complexd(0, 1) * (beta() * phi.spinor(mirror));
    worst = std::max(worst, (out.spinor(i) - expect).norm());
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("asymptotic free operator preserves the unit norm") {
  const GridSpec grid{48, 16.0};
  const VGridSpec ref{4.0, 64};
  const AnalyticAmplitude packet = unit_packet(ref);
  const SpinorGridField lim = asymptotic_free(+1, packet.eval, grid);
  CHECK(std::abs(grid_norm(lim) - 1.0) < 2e-3);
}

TEST_CASE("stationary-phase approach rate has log-log slope near -1") {
  const GridSpec grid{40, 16.0};
  const VGridSpec ref{4.0, 64};
  const AnalyticAmplitude packet = unit_packet(ref);
  const SpinorGridField lim = asymptotic_free(+1, packet.eval, grid);

  std::vector<double> taus, dists;
  for (double tau : {5.0, 8.0, 12.5, 20.0}) {
    TransformOptions opts;
    opts.eval_radius = 3.0;
    opts.safety = 1.1;
    SpinorGridField chi = free_evolve_exact(packet, tau, grid, opts);
    // Phi(tau)^* chi
    const complexd up = std::polar(1.0, tau), dn = std::polar(1.0, -tau);
    for (std::int64_t i = 0; i < grid.size(); ++i) {
      chi.at(0, i) *= up;
      chi.at(1, i) *= up;
      chi.at(2, i) *= dn;
      chi.at(3, i) *= dn;
    }
    // distance over the same ball
    double acc = 0;
    for (std::int64_t i = 0; i < grid.size(); ++i) {
      if (grid.node(i).norm() > 3.0) continue;
      acc += (chi.spinor(i) - lim.spinor(i)).squaredNorm();
    }
    const double dz = grid.dz();
    taus.push_back(tau);
    dists.push_back(std::sqrt(acc * dz * dz * dz));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < taus.size(); ++i) {
    const double lx = std::log(taus[i]), ly = std::log(dists[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = double(taus.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  MESSAGE("rate-test distances: ", dists[0], " ", dists[1], " ", dists[2], " ",
          dists[3], " slope ", slope);
  CHECK(slope > -1.3);
  CHECK(slope < -0.7);
}
