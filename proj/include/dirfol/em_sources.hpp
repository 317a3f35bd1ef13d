/* Conserved model currents (Gaussian-smeared worldlines with an optional
 * velocity kink at the origin) and their retarded, advanced and radiation
 * potentials, plus the decay-estimate harness.
 *
 * Conventions: Box A = 4 pi J, A_ret(x) = 4 pi Int D_ret(x-y) J(y) dy with
 * D_ret = theta(x0) delta(x^2)/(2 pi). The production evaluator integrates
 * the smeared cone kernel (D_ret * G_eps, closed form in erfc/exp) along each
 * worldline leg; the light-cone spherical quadrature is kept as the
 * independent oracle route.
 */
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dirfol/spinor_algebra.hpp"

namespace dirfol {

struct WorldlineNode {
  Vector4d u_in = Vector4d(1, 0, 0, 0);   // velocity for lambda < 0
  Vector4d u_out = Vector4d(1, 0, 0, 0);  // velocity for lambda > 0
  double weight = 1.0;
};

struct CurrentModel {
  std::vector<WorldlineNode> nodes;
  double charge = 1.0;
  double eps = 0.5;  // 4D Euclidean smearing width

  /// 7 nodes, rapidities <= 1 spread over directions, equal weights, q=1.
  /// Incoming velocities are the spatially reflected outgoing ones, so the
  /// model radiates (a uniformly moving charge has A_rad = 0).
  static CurrentModel default_model();
  /// Single static smeared charge (u_in = u_out = e0).
  static CurrentModel static_charge(double q = 1.0, double eps = 0.5);
  /// Current with velocity support separated from a packet moving along +x:
  /// rapidity-1.4 nodes oriented backward/transverse.
  static CurrentModel scattering_model();
};

/// J^a(x): closed form (1D Gaussian integrals along the legs, erfc for the
/// half-lines). Exactly conserved for any node velocities.
Vector4d current(const CurrentModel& m, const Vector4d& x);

/// Finite-difference divergence d_a J^a (for the conservation check).
double current_divergence_fd(const CurrentModel& m, const Vector4d& x,
                             double h = 1e-4);

struct PotentialResult {
  Vector4d A = Vector4d::Zero();
  double err_estimate = 0.0;
  bool converged = true;
};

struct PotentialOptions {
  double rel_tol = 1e-9;
  double window_sigmas = 14.0;  // half-width of the leg window, in stretched eps
  int max_depth = 22;
  double fail_threshold = 1e-4; // converged = err <= threshold * |A|
};

PotentialResult retarded_potential(const CurrentModel& m, const Vector4d& x,
                                   const PotentialOptions& o = {});
PotentialResult advanced_potential(const CurrentModel& m, const Vector4d& x,
                                   const PotentialOptions& o = {});

/// d_b A^a for the fast evaluator, analytic (kernel derivatives under the
/// integral). grad(b, a) = d/dx^b A^a.
void potential_with_gradient(const CurrentModel& m, const Vector4d& x, bool advanced,
                             Vector4d& A, Matrix4d& grad,
                             const PotentialOptions& o = {});

/// Independent oracle: spherical light-cone quadrature of an arbitrary
/// pointwise source, radial windows located per worldline leg when the
/// source is a CurrentModel component, otherwise a uniform radial grid up to
/// r_cut. Component a of the source is integrated independently.
using ScalarSource = std::function<double(const Vector4d&)>;
double lightcone_quadrature(const ScalarSource& rho, const Vector4d& x,
                            bool advanced, double r_cut, int n_radial,
                            int n_costheta, int n_phi);

/// Null-plane profile V(s,l) = Int delta(s - x.l) J(x) d^4x, l0 = 1.
Vector4d null_profile_exact(const CurrentModel& m, double s, const Vector4d& l);
/// 3D quadrature route (oracle): integrates J((s + x.l_vec)/l0, x_vec) over a
/// box of half-width `half` with n nodes per axis.
Vector4d null_profile_quadrature(const CurrentModel& m, double s,
                                 const Vector4d& l, double half, int n);

/// Tabulated s-profile with a cubic spline (the production pipeline for the
/// radiation potential): V(s,l) = q sum_k w_k [P_out(l) Phi(s/ss) +
/// P_in(l) Phi(-s/ss)], so Vdot(s,l) = D(l) pulse(s) with a universal pulse.
class NullProfileTable {
 public:
  NullProfileTable() = default;
  NullProfileTable(const CurrentModel& m, double smax, int npts);
  /// splined pulse (normalized Gaussian of width sqrt(2) eps)
  double pulse(double s) const;
  /// spline derivative of the pulse
  double pulse_deriv(double s) const;
  /// D(l) = q sum_k w_k [u_out/(u_out.l) - u_in/(u_in.l)]
  Vector4d direction_factor(const Vector4d& l) const;
  Vector4d vdot(double s, const Vector4d& l) const {
    return direction_factor(l) * pulse(s);
  }
  double smax() const { return smax_; }
  double s_cut() const { return cut_; }

 private:
  CurrentModel model_;
  double smax_ = 40.0;
  double cut_ = 10.0;
  std::vector<double> s_, y_, y2_;  // natural cubic spline
};

struct RadiationOptions {
  int n_u = 48;    // nodes across the pulse band in u
  int n_phi = 64;
};

/// A_rad(x) = -(1/2pi) Int Vdot(x.l, l) d^2 l over the (u, phi) grid with
/// e3 = xhat, restricted to the band where the pulse is supported.
Vector4d radiation_potential(const NullProfileTable& t, const Vector4d& x,
                             const RadiationOptions& o = {});

/// Radiation potential with its gradient, grad(b,a) = d/dx^b A_rad^a
/// (splined-pulse derivative under the angular quadrature).
void radiation_with_gradient(const NullProfileTable& t, const Vector4d& x,
                             Vector4d& A, Matrix4d& grad,
                             const RadiationOptions& o = {});

/// x.A with Minkowski contraction.
inline double scalar_contraction(const Vector4d& x, const Vector4d& A) {
  return minkowski_dot(x, A);
}

/// ---- decay harness ----------------------------------------------------

struct RaySpec {
  Vector4d dir;      // x(lambda) = lambda * dir
  double lam_min = 1.0;
  double lam_max = 30.0;
  int samples = 40;
  std::string id;
};

enum class Verdict { PASS, FAIL, INCONCLUSIVE };

struct HarnessReport {
  std::string ray;
  double sup_ratio = 0.0;
  double trend_slope = 0.0;  // log-log slope of |f|/env on the outer third
  Verdict verdict = Verdict::INCONCLUSIVE;
  std::vector<double> lambdas;
  std::vector<double> ratios;
};

using FieldMagnitude = std::function<double(const Vector4d&)>;
using Envelope = std::function<double(const Vector4d&)>;

/// PASS iff the ratio |f|/env shows no growth trend over the outer third of
/// samples (slope <= slope_tol); FAIL on a clear growth trend; INCONCLUSIVE
/// when the outer third has fewer than 6 usable samples.
HarnessReport decay_check(const FieldMagnitude& f, const Envelope& env,
                          const RaySpec& ray, double slope_tol = 0.15);

/// Standard ray families (timelike / lightlike / spacelike), chosen away
/// from the model's leg directions.
std::vector<RaySpec> default_rays(double lam_max = 30.0, int samples = 40);

}  // namespace dirfol
