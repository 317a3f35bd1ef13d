/* Coordinates, metric, and spinor-transport quantities of the hyperboloidal
 * Cauchy foliation x^0 = tau<z>, x_vec = <tau> z, plus causal-spreading and
 * weight-function utilities.
 *
 * Every closed form from the curvilinear toolkit is refactored into an
 * explicitly regular polynomial-in-z shape before evaluation; coefficients
 * that are quotients by |z|^2 switch to a Taylor branch for |z|^2 < 1e-4.
 */
#pragma once

#include <Eigen/Dense>
#include <optional>

#include "dirfol/spinor_algebra.hpp"

namespace dirfol {

struct FoliationPoint {
  double tau = 0;
  Vector3d z = Vector3d::Zero();
  // cached scalars
  double ctau = 1;  // <tau> = sqrt(tau^2+1)
  double cz = 1;    // <z>   = sqrt(|z|^2+1)
  double tz = 1;    // sqrt(tau^2+|z|^2+1)
  double tmz = 2;   // <tau><z> + tz
};

FoliationPoint foliation_point(double tau, const Vector3d& z);

/// x^0 = tau<z>, x_vec = <tau> z.
Vector4d to_cartesian(const FoliationPoint& p);

/// Inverse map: solves T^2 + T(1+|x|^2-(x0)^2) - (x0)^2 = 0 for T = tau^2
/// (positive root, cancellation-free branch), sign(tau) = sign(x0).
FoliationPoint from_cartesian(const Vector4d& x);

/// (dx/d(tau,z), d(tau,z)/dx), both 4x4, row = output component.
struct JacobianPair {
  Matrix4d dx_dxi;
  Matrix4d dxi_dx;
};
JacobianPair jacobians(const FoliationPoint& p);

struct MetricBlocks {
  double g_tautau;   // tz^2/<tau>^2
  Matrix3d g_ij;     // -<tau>^2 I + (tau^2/<z>^2) z z^T
  double g_uptautau; // <tau>^2/tz^2
  Matrix3d g_upij;   // -(1/<tau>^2)(I + (tau^2/tz^2) z z^T)
  double ghat;       // det of the spatial block: -<tau>^4 tz^2/<z>^2
};
MetricBlocks metric(const FoliationPoint& p);

/// Weight function xi on [1,inf): power u^kappa or [1+(kappa/m)log u]^m.
/// xi(1)=1, nondecreasing, xi(u) <= u^kappa, xi'(u) <= (kappa/u) xi(u).
struct WeightFunction {
  enum class Kind { Power, Log };
  Kind kind = Kind::Power;
  double kappa = 0.25;
  double m = 1.0;

  double operator()(double u) const;
  double deriv(double u) const;
};

/// Validates the construction constraints (kappa in (0,1/2), m > 0).
WeightFunction make_weight(WeightFunction::Kind kind, double kappa, double m = 1.0);

/// Scalar coefficients of the transport quantities in regular form:
///   lambda^i = lam_a alpha^i + lam_c (z.alpha) z^i
///   s^ij     = s_a delta^ij + lam_c z^i z^j
///   rho^ij   = rho_a delta^ij + rho_b z^i z^j
///   Lambda_j = cap_h * i * [(z.alpha) alpha^j - z^j]
///   mu       = mu_s * beta
struct FrameScalars {
  double lam_a, lam_c, dlam_a, dlam_c, d2lam_a, d2lam_c;  // d = d/d|z|^2
  double rho_a, rho_b;
  double mu_s;
  double cap_h, dcap_h;
  double q_div, dq_div;  // div lambda = q_div (z.alpha)
  double q_big, n_big;   // Q and N scalars
};
FrameScalars frame_scalars(const FoliationPoint& p);

/// All pointwise geometric/spinor-transport quantities at one (tau, z).
struct GeometryFrame {
  FoliationPoint p;
  FrameScalars sc;
  Matrix4c lambda[3];
  Matrix4c mu;
  Matrix3d rho;
  Matrix3d s;
  Matrix4c Lambda[3];
  double Q = 0;
  double N = 0;
  MetricBlocks g;
  std::optional<Matrix4c> nu;  // i xi(<z>)^-1 [H, xi(<z>)], when xi given
};
GeometryFrame frame(const FoliationPoint& p, const WeightFunction* xi = nullptr);

/// Analytic derivatives (for operator-identity and finite-difference checks).
Matrix4c dlambda(const FoliationPoint& p, int i, int j);       // d_j lambda^i
Matrix4c div_lambda(const FoliationPoint& p);                  // d_i lambda^i
Matrix4c d_div_lambda(const FoliationPoint& p, int j);         // d_j (d.lambda)
Matrix4c dLambda(const FoliationPoint& p, int i, int j);       // d_i Lambda_j
Matrix3d rho_tau_derivative(const FoliationPoint& p);          // d_tau rho
Vector3d div_rho(const FoliationPoint& p);                     // d_i rho^ij

/// Residuals of the three operator-coefficient identities equivalent to the
/// squared-kinetic-operator decomposition M^2 = pi_L rho pi_L - N (A = 0):
/// [p_i p_j]: sym(lambda^i lambda^j) - rho^ij
/// [p_j]    : -i lam d lam - (i/2){lam^j, div lam} + i d_i rho^ij - 2 rho^ij Lam_i
/// [1]      : -(1/2) lam d(div lam) - (1/4)(div lam)^2 + i d_i(rho^ij Lam_j) + Q
struct H2Residuals {
  double second_order;
  double first_order;
  double zeroth_order;
};
H2Residuals h2_residuals(const FoliationPoint& p);

/// Causal shadow radius (Lemma of past/future spreading):
/// r = r0[<tau0><tau> - tau0 tau] + <r0>|tau<tau0> - <tau> tau0|.
double causal_radius(double tau0, double r0, double tau);

/// Lemma-of-coordinates inequalities margins (>= 0 when satisfied):
///   |x0|+|x|+1 - <tau><z>   and   ||x0|-|x||+1 - (<tau>^2+<z>^2)/(2<tau><z>)
struct PointInequalities {
  double plus_margin;
  double minus_margin;
};
PointInequalities coordinate_inequalities(const FoliationPoint& p);

}  // namespace dirfol
