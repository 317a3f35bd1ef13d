#include "dirfol/foliation_geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace dirfol {

namespace {
// coefficients of (1+x)^(1/2)
constexpr double kA1 = 0.5, kA2 = -0.125, kA3 = 0.0625, kA4 = -5.0 / 128.0,
                 kA5 = 7.0 / 256.0;
constexpr double kSeriesSwitch = 1e-4;  // |z|^2 below this uses the Taylor branch
}  // namespace

FoliationPoint foliation_point(double tau, const Vector3d& z) {
  FoliationPoint p;
  p.tau = tau;
  p.z = z;
  const double w2 = z.squaredNorm();
  p.ctau = std::sqrt(tau * tau + 1.0);
  p.cz = std::sqrt(w2 + 1.0);
  p.tz = std::sqrt(tau * tau + w2 + 1.0);
  p.tmz = p.ctau * p.cz + p.tz;
  return p;
}

Vector4d to_cartesian(const FoliationPoint& p) {
  Vector4d x;
  x[0] = p.tau * p.cz;
  x.tail<3>() = p.ctau * p.z;
  return x;
}

FoliationPoint from_cartesian(const Vector4d& x) {
  const double x0 = x[0];
  const double r2 = x.tail<3>().squaredNorm();
  const double b = 1.0 + r2 - x0 * x0;
  const double disc = std::sqrt(b * b + 4.0 * x0 * x0);
  // positive root of T^2 + bT - x0^2 = 0, cancellation-free
  const double tau2 = (b >= 0.0) ? (2.0 * x0 * x0 / (b + disc)) : (0.5 * (-b + disc));
  const double tau = std::copysign(std::sqrt(tau2), x0);
  const double ctau = std::sqrt(tau2 + 1.0);
  return foliation_point(tau, x.tail<3>() / ctau);
}

JacobianPair jacobians(const FoliationPoint& p) {
  JacobianPair jp;
  const Vector3d& z = p.z;
  Matrix4d& f = jp.dx_dxi;
  f(0, 0) = p.cz;
  for (int i = 0; i < 3; ++i) {
    f(0, i + 1) = p.tau * z[i] / p.cz;
    f(i + 1, 0) = p.tau * z[i] / p.ctau;
    for (int j = 0; j < 3; ++j) f(i + 1, j + 1) = (i == j) ? p.ctau : 0.0;
  }
  Matrix4d& g = jp.dxi_dx;
  const double tz2 = p.tz * p.tz;
  g(0, 0) = p.ctau * p.ctau * p.cz / tz2;
  for (int i = 0; i < 3; ++i) {
    g(0, i + 1) = -p.tau * p.ctau * z[i] / tz2;
    g(i + 1, 0) = -p.tau * p.cz * z[i] / tz2;
    for (int j = 0; j < 3; ++j)
      g(i + 1, j + 1) = ((i == j) ? 1.0 : 0.0) / p.ctau +
                        p.tau * p.tau * z[i] * z[j] / (p.ctau * tz2);
  }
  return jp;
}

MetricBlocks metric(const FoliationPoint& p) {
  MetricBlocks m;
  const double T2 = p.ctau * p.ctau;
  const double tz2 = p.tz * p.tz;
  m.g_tautau = tz2 / T2;
  m.g_ij = -T2 * Matrix3d::Identity() +
           (p.tau * p.tau / (p.cz * p.cz)) * (p.z * p.z.transpose());
  m.g_uptautau = T2 / tz2;
  m.g_upij = -(1.0 / T2) * (Matrix3d::Identity() +
                            (p.tau * p.tau / tz2) * (p.z * p.z.transpose()));
  m.ghat = -T2 * T2 * tz2 / (p.cz * p.cz);
  return m;
}

double WeightFunction::operator()(double u) const {
  if (u < 1.0) throw std::invalid_argument("WeightFunction: u < 1");
  if (kind == Kind::Power) return std::pow(u, kappa);
  return std::pow(1.0 + (kappa / m) * std::log(u), m);
}

double WeightFunction::deriv(double u) const {
  if (u < 1.0) throw std::invalid_argument("WeightFunction: u < 1");
  if (kind == Kind::Power) return kappa * std::pow(u, kappa - 1.0);
  return (kappa / u) * std::pow(1.0 + (kappa / m) * std::log(u), m - 1.0);
}

WeightFunction make_weight(WeightFunction::Kind kind, double kappa, double m) {
  if (!(kappa > 0.0 && kappa < 0.5))
    throw std::invalid_argument("make_weight: kappa must lie in (0, 1/2)");
  if (m <= 0.0) throw std::invalid_argument("make_weight: m must be positive");
  WeightFunction w;
  w.kind = kind;
  w.kappa = kappa;
  w.m = m;
  return w;
}

FrameScalars frame_scalars(const FoliationPoint& p) {
  FrameScalars sc;
  const double w2 = p.z.squaredNorm();
  const double T = p.ctau, T2 = T * T;
  const double tz = p.tz, cz = p.cz, tmz = p.tmz;
  const double tau2 = p.tau * p.tau;

  sc.lam_a = tz / T2;
  sc.dlam_a = 1.0 / (2.0 * tz * T2);
  sc.d2lam_a = -1.0 / (4.0 * tz * tz * tz * T2);

  if (w2 < kSeriesSwitch) {
    // c_k = a_{k+1} (1 - T^{-2k-2})/T
    const double iT2 = 1.0 / T2;
    double pw = iT2;  // T^{-2}
    const double c0 = kA1 * (1.0 - pw) / T;
    pw *= iT2;
    const double c1 = kA2 * (1.0 - pw) / T;
    pw *= iT2;
    const double c2 = kA3 * (1.0 - pw) / T;
    pw *= iT2;
    const double c3 = kA4 * (1.0 - pw) / T;
    pw *= iT2;
    const double c4 = kA5 * (1.0 - pw) / T;
    sc.lam_c = c0 + w2 * (c1 + w2 * (c2 + w2 * (c3 + w2 * c4)));
    sc.dlam_c = c1 + w2 * (2.0 * c2 + w2 * (3.0 * c3 + w2 * 4.0 * c4));
    sc.d2lam_c = 2.0 * c2 + w2 * (6.0 * c3 + w2 * 12.0 * c4);
  } else {
    const double f = cz / T - tz / T2;
    const double fp = 1.0 / (2.0 * cz * T) - 1.0 / (2.0 * tz * T2);
    const double fpp = -1.0 / (4.0 * cz * cz * cz * T) + 1.0 / (4.0 * tz * tz * tz * T2);
    sc.lam_c = f / w2;
    sc.dlam_c = (fp - sc.lam_c) / w2;
    sc.d2lam_c = (fpp - 2.0 * sc.dlam_c) / w2;
  }

  sc.rho_a = (T2 + w2) / (T2 * T2);
  sc.rho_b = tau2 / (T2 * T2);
  sc.mu_s = tz / T;

  const double u1 = tau2 / tmz;
  const double u2 = T * cz / (tz * tz);
  sc.cap_h = (u1 - u2) / (2.0 * tz);
  const double dtmz = T / (2.0 * cz) + 1.0 / (2.0 * tz);
  const double du1 = -tau2 * dtmz / (tmz * tmz);
  const double du2 = T * (1.0 / (2.0 * cz * tz * tz) - cz / (tz * tz * tz * tz));
  sc.dcap_h = (du1 - du2) / (2.0 * tz) - (u1 - u2) / (4.0 * tz * tz * tz);

  sc.q_div = 2.0 * sc.dlam_a + 2.0 * sc.dlam_c * w2 + 4.0 * sc.lam_c;
  sc.dq_div = 2.0 * sc.d2lam_a + 2.0 * sc.d2lam_c * w2 + 6.0 * sc.dlam_c;

  sc.q_big = (tau2 / T2 + tau2 / (tz * tmz) + 0.25 / (cz * cz) + 1.25) / T2;
  sc.n_big = sc.q_big + 2.0 * sc.rho_a * sc.cap_h * sc.cap_h * w2;
  return sc;
}

namespace {

inline Matrix4c lambda_matrix(const FrameScalars& sc, const Vector3d& z, int i,
                              const Matrix4c& za) {
  return sc.lam_a * alpha(i) + (sc.lam_c * z[i]) * za;
}

inline Matrix4c big_b(const Vector3d& z, int j, const Matrix4c& za) {
  return za * alpha(j) - z[j] * Matrix4c::Identity();
}

}  // namespace

GeometryFrame frame(const FoliationPoint& p, const WeightFunction* xi) {
  GeometryFrame fr;
  fr.p = p;
  fr.sc = frame_scalars(p);
  const Matrix4c za = alpha_dot(p.z);
  for (int i = 0; i < 3; ++i) fr.lambda[i] = lambda_matrix(fr.sc, p.z, i, za);
  fr.mu = fr.sc.mu_s * beta();
  fr.rho = fr.sc.rho_a * Matrix3d::Identity() +
           fr.sc.rho_b * (p.z * p.z.transpose());
  fr.s = fr.sc.lam_a * Matrix3d::Identity() +
         fr.sc.lam_c * (p.z * p.z.transpose());
  const complexd I(0, 1);
  for (int j = 0; j < 3; ++j) fr.Lambda[j] = (I * fr.sc.cap_h) * big_b(p.z, j, za);
  fr.Q = fr.sc.q_big;
  fr.N = fr.sc.n_big;
  fr.g = metric(p);
  if (xi) {
    const double coef = xi->deriv(p.cz) / (p.ctau * (*xi)(p.cz));
    fr.nu = coef * za;
  }
  return fr;
}

Matrix4c dlambda(const FoliationPoint& p, int i, int j) {
  const FrameScalars sc = frame_scalars(p);
  const Matrix4c za = alpha_dot(p.z);
  Matrix4c m = (2.0 * p.z[j] * sc.dlam_a) * alpha(i);
  m += (2.0 * p.z[j] * sc.dlam_c * p.z[i]) * za;
  m += (sc.lam_c * p.z[i]) * alpha(j);
  if (i == j) m += sc.lam_c * za;
  return m;
}

Matrix4c div_lambda(const FoliationPoint& p) {
  const FrameScalars sc = frame_scalars(p);
  return sc.q_div * alpha_dot(p.z);
}

Matrix4c d_div_lambda(const FoliationPoint& p, int j) {
  const FrameScalars sc = frame_scalars(p);
  return sc.q_div * alpha(j) + (2.0 * sc.dq_div * p.z[j]) * alpha_dot(p.z);
}

Matrix4c dLambda(const FoliationPoint& p, int i, int j) {
  const FrameScalars sc = frame_scalars(p);
  const Matrix4c za = alpha_dot(p.z);
  const complexd I(0, 1);
  Matrix4c m = (I * 2.0 * p.z[i] * sc.dcap_h) * big_b(p.z, j, za);
  Matrix4c ab = alpha(i) * alpha(j);
  if (i == j) ab -= Matrix4c::Identity();
  m += (I * sc.cap_h) * ab;
  return m;
}

Matrix3d rho_tau_derivative(const FoliationPoint& p) {
  const FrameScalars sc = frame_scalars(p);
  const double T2 = p.ctau * p.ctau;
  const double T6 = T2 * T2 * T2;
  const double w2 = p.z.squaredNorm();
  Matrix3d rho = sc.rho_a * Matrix3d::Identity() + sc.rho_b * (p.z * p.z.transpose());
  Matrix3d perp = w2 * Matrix3d::Identity() - p.z * p.z.transpose();
  return (-2.0 * p.tau / T2) * rho - (2.0 * p.tau / T6) * perp;
}

Vector3d div_rho(const FoliationPoint& p) {
  const double T2 = p.ctau * p.ctau;
  return (2.0 * (p.tau * p.tau + T2) / (T2 * T2)) * p.z;
}

H2Residuals h2_residuals(const FoliationPoint& p) {
  const GeometryFrame fr = frame(p);
  const complexd I(0, 1);
  H2Residuals res{0, 0, 0};

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Matrix4c sym = 0.5 * (fr.lambda[i] * fr.lambda[j] +
                                  fr.lambda[j] * fr.lambda[i]);
      const double r = (sym - fr.rho(i, j) * Matrix4c::Identity()).norm();
      res.second_order = std::max(res.second_order, r);
    }

  const Matrix4c D = div_lambda(p);
  const Vector3d drho = div_rho(p);
  for (int j = 0; j < 3; ++j) {
    Matrix4c lhs = Matrix4c::Zero();
    for (int i = 0; i < 3; ++i) lhs += -I * fr.lambda[i] * dlambda(p, j, i);
    lhs += (-0.5 * I) * (fr.lambda[j] * D + D * fr.lambda[j]);
    Matrix4c rhs = -I * drho[j] * Matrix4c::Identity();
    for (int i = 0; i < 3; ++i) rhs += 2.0 * fr.rho(i, j) * fr.Lambda[i];
    res.first_order = std::max(res.first_order, (lhs - rhs).norm());
  }

  Matrix4c zero = Matrix4c::Zero();
  for (int i = 0; i < 3; ++i) zero += -0.5 * fr.lambda[i] * d_div_lambda(p, i);
  zero += -0.25 * D * D;
  // i d_i(rho^ij Lambda_j) = i (d_i rho^ij) Lambda_j + i rho^ij d_i Lambda_j
  for (int j = 0; j < 3; ++j) zero += I * drho[j] * fr.Lambda[j];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) zero += (I * fr.rho(i, j)) * dLambda(p, i, j);
  zero += fr.Q * Matrix4c::Identity();
  res.zeroth_order = zero.norm();
  return res;
}

double causal_radius(double tau0, double r0, double tau) {
  if (r0 < 0.0) throw std::invalid_argument("causal_radius: r0 must be >= 0");
  const double ct0 = std::sqrt(tau0 * tau0 + 1.0);
  const double ct = std::sqrt(tau * tau + 1.0);
  const double cr0 = std::sqrt(r0 * r0 + 1.0);
  return r0 * (ct0 * ct - tau0 * tau) + cr0 * std::abs(tau * ct0 - ct * tau0);
}

PointInequalities coordinate_inequalities(const FoliationPoint& p) {
  const Vector4d x = to_cartesian(p);
  const double ax0 = std::abs(x[0]);
  const double axs = x.tail<3>().norm();
  PointInequalities r;
  r.plus_margin = ax0 + axs + 1.0 - p.ctau * p.cz;
  r.minus_margin = std::abs(ax0 - axs) + 1.0 -
                   (p.ctau * p.ctau + p.cz * p.cz) / (2.0 * p.ctau * p.cz);
  return r;
}

}  // namespace dirfol
