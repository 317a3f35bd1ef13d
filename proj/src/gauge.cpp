#include "dirfol/gauge.hpp"

#include <cmath>
#include <stdexcept>

namespace dirfol {

namespace {

Vector4d lower(const Vector4d& v) {
  return Vector4d(v[0], -v[1], -v[2], -v[3]);
}

/// Joint A, dA evaluation (analytic or central FD on value()).
void base_value_and_gradient(const GaugePlan& plan, const Vector4d& x,
                             Vector4d& A, Matrix4d& dA) {
  if (!plan.base) throw std::invalid_argument("GaugePlan: missing base field");
  if (plan.analytic) {
    plan.base->value_and_gradient(x, A, dA);
    return;
  }
  A = plan.base->value(x);
  const double h = plan.fd_step;
  for (int b = 0; b < 4; ++b) {
    Vector4d xp = x, xm = x;
    xp[b] += h;
    xm[b] -= h;
    const Vector4d Ap = plan.base->value(xp);
    const Vector4d Am = plan.base->value(xm);
    for (int a = 0; a < 4; ++a) dA(b, a) = (Ap[a] - Am[a]) / (2.0 * h);
  }
}

/// Covariant partials d_b S at x(tau,z). Shares A, dA when provided.
Vector4d gauge_gradient_cov(const GaugePlan& plan, double tau, const Vector3d& z,
                            const Vector4d* A_opt, const Matrix4d* dA_opt) {
  if (plan.kind == GaugeKind::Lorenz) return Vector4d::Zero();
  const FoliationPoint p = foliation_point(tau, z);
  const Vector4d x = to_cartesian(p);
  const JacobianPair jp = jacobians(p);

  if (plan.kind == GaugeKind::Temporal) {
    // dS_tau = (d_tau x).A; dS_zi by differentiating the line integral.
    auto atau_of = [&](double sig, const Vector3d& zz) {
      const FoliationPoint q = foliation_point(sig, zz);
      const Vector4d xq = to_cartesian(q);
      const Vector4d Aq = plan.base->value(xq);
      const JacobianPair jq = jacobians(q);
      double acc = 0;
      const Vector4d Acov = lower(Aq);
      for (int a = 0; a < 4; ++a) acc += jq.dx_dxi(a, 0) * Acov[a];
      return acc;
    };
    const double dS_tau = atau_of(tau, z);
    // integrand of dS_zi: d/dz_i of (d_sigma x).A, by central differences
    Vector3d dS_z = Vector3d::Zero();
    const double h = plan.fd_step;
    const int steps = std::max(8, int(std::ceil(std::abs(tau) / 0.1)));
    // composite Simpson with fixed refinement (integrand is smooth)
    const int nn = 2 * steps;
    const double dsig = tau / nn;
    for (int i = 0; i <= nn; ++i) {
      const double sig = i * dsig;
      const double w = (i == 0 || i == nn) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      for (int c = 0; c < 3; ++c) {
        Vector3d zp = z, zm = z;
        zp[c] += h;
        zm[c] -= h;
        dS_z[c] += w * (atau_of(sig, zp) - atau_of(sig, zm)) / (2.0 * h);
      }
    }
    dS_z *= dsig / 3.0;
    Vector4d dS;
    for (int b = 0; b < 4; ++b) {
      dS[b] = jp.dxi_dx(0, b) * dS_tau;
      for (int i = 0; i < 3; ++i) dS[b] += jp.dxi_dx(i + 1, b) * dS_z[i];
    }
    return dS;
  }

  Vector4d A;
  Matrix4d dA;
  if (A_opt && dA_opt) {
    A = *A_opt;
    dA = *dA_opt;
  } else {
    base_value_and_gradient(plan, x, A, dA);
  }
  const Vector4d Acov = lower(A);
  const double C = minkowski_dot(x, A);
  // d_b C = A_b^cov + x_c dA(b,c), x_c = eta x
  const Vector4d xcov = lower(x);
  Vector4d dC;
  for (int b = 0; b < 4; ++b) {
    dC[b] = Acov[b];
    for (int c = 0; c < 4; ++c) dC[b] += xcov[c] * dA(b, c);
  }
  // log factor and its covariant gradient
  double L = 0;
  Vector4d dL = Vector4d::Zero();
  const double dlt = p.tau / (p.ctau * p.ctau);
  if (plan.kind == GaugeKind::SpecialPhi) {
    L = std::log(p.ctau * p.cz);
    for (int b = 0; b < 4; ++b) {
      dL[b] = jp.dxi_dx(0, b) * dlt;
      for (int i = 0; i < 3; ++i)
        dL[b] += jp.dxi_dx(i + 1, b) * (p.z[i] / (p.cz * p.cz));
    }
  } else {  // ConeLog
    L = std::log(p.ctau);
    for (int b = 0; b < 4; ++b) dL[b] = jp.dxi_dx(0, b) * dlt;
  }
  return dL * C + L * dC;
}

}  // namespace

LorenzField::LorenzField(const CurrentModel& scatterer,
                         std::optional<CurrentModel> incoming,
                         double table_smax, int table_npts)
    : scatterer_(scatterer), incoming_(std::move(incoming)) {
  if (incoming_) rad_table_ = NullProfileTable(*incoming_, table_smax, table_npts);
}

Vector4d LorenzField::value(const Vector4d& x) const {
  Vector4d A = retarded_potential(scatterer_, x).A;
  if (incoming_) A += radiation_potential(rad_table_, x, rad_opts);
  return A;
}

void LorenzField::value_and_gradient(const Vector4d& x, Vector4d& A,
                                     Matrix4d& grad) const {
  potential_with_gradient(scatterer_, x, false, A, grad);
  if (incoming_) {
    Vector4d Ar;
    Matrix4d gr;
    radiation_with_gradient(rad_table_, x, Ar, gr, rad_opts);
    A += Ar;
    grad += gr;
  }
}

double scalar_C(const LorenzField& A, const Vector4d& x) {
  return minkowski_dot(x, A.value(x));
}

Vector4d gauge_gradient(const GaugePlan& plan, double tau, const Vector3d& z) {
  const Vector4d cov = gauge_gradient_cov(plan, tau, z, nullptr, nullptr);
  return Vector4d(cov[0], -cov[1], -cov[2], -cov[3]);
}

double gauge_function(const GaugePlan& plan, double tau, const Vector3d& z) {
  const FoliationPoint p = foliation_point(tau, z);
  const Vector4d x = to_cartesian(p);
  switch (plan.kind) {
    case GaugeKind::Lorenz:
      return 0.0;
    case GaugeKind::SpecialPhi:
      return std::log(p.ctau * p.cz) * scalar_C(*plan.base, x);
    case GaugeKind::ConeLog:
      return std::log(p.ctau) * scalar_C(*plan.base, x);
    case GaugeKind::Temporal: {
      // Int_0^tau (d_sigma x).A d sigma, composite Simpson
      const int nn = 2 * std::max(8, int(std::ceil(std::abs(tau) / 0.05)));
      const double dsig = tau / nn;
      double acc = 0;
      for (int i = 0; i <= nn; ++i) {
        const double sig = i * dsig;
        const double w = (i == 0 || i == nn) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const FoliationPoint q = foliation_point(sig, z);
        const Vector4d Aq = plan.base->value(to_cartesian(q));
        const JacobianPair jq = jacobians(q);
        const Vector4d Acov = lower(Aq);
        double g = 0;
        for (int a = 0; a < 4; ++a) g += jq.dx_dxi(a, 0) * Acov[a];
        acc += w * g;
      }
      return acc * dsig / 3.0;
    }
  }
  return 0.0;
}

CurvSample curvilinear_components(const GaugePlan& plan, double tau,
                                  const Vector3d& z) {
  const FoliationPoint p = foliation_point(tau, z);
  const Vector4d x = to_cartesian(p);
  const JacobianPair jp = jacobians(p);
  Vector4d A;
  Matrix4d dA;
  base_value_and_gradient(plan, x, A, dA);
  const Vector4d dS_cov = gauge_gradient_cov(plan, tau, z, &A, &dA);
  const Vector4d calA_cov = lower(A) - dS_cov;

  CurvSample out;
  for (int a = 0; a < 4; ++a) out.a_tau += jp.dx_dxi(a, 0) * calA_cov[a];
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 4; ++a)
      out.a_i[i] += jp.dx_dxi(a, i + 1) * calA_cov[a];

  // F_{ab} = d_a A_b^cov - d_b A_a^cov; dA(b,a) = d_b A^a
  Matrix4d F;
  const Vector4d eta(1, -1, -1, -1);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      F(a, b) = eta[b] * dA(a, b) - eta[a] * dA(b, a);
  for (int i = 0; i < 3; ++i) {
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        out.f_itau[i] += jp.dx_dxi(a, i + 1) * jp.dx_dxi(b, 0) * F(a, b);
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          out.f_ij(i, j) += jp.dx_dxi(a, i + 1) * jp.dx_dxi(b, j + 1) * F(a, b);
  }
  return out;
}

void fhat_curl_fd(const GaugePlan& plan, double tau, const Vector3d& z,
                  double h, Vector3d& f_itau, Matrix3d& f_ij) {
  auto comp = [&](double t, const Vector3d& zz) {
    return curvilinear_components(plan, t, zz);
  };
  const CurvSample ctp = comp(tau + h, z);
  const CurvSample ctm = comp(tau - h, z);
  CurvSample czp[3], czm[3];
  for (int i = 0; i < 3; ++i) {
    Vector3d zp = z, zm = z;
    zp[i] += h;
    zm[i] -= h;
    czp[i] = comp(tau, zp);
    czm[i] = comp(tau, zm);
  }
  for (int i = 0; i < 3; ++i) {
    // F_{i tau} = d_i A_tau - d_tau A_i
    f_itau[i] = (czp[i].a_tau - czm[i].a_tau) / (2.0 * h) -
                (ctp.a_i[i] - ctm.a_i[i]) / (2.0 * h);
    for (int j = 0; j < 3; ++j)
      f_ij(i, j) = (czp[i].a_i[j] - czm[i].a_i[j]) / (2.0 * h) -
                   (czp[j].a_i[i] - czm[j].a_i[i]) / (2.0 * h);
  }
}

std::vector<Vector3d> ball_samples(double radius, int count, unsigned skip) {
  auto halton = [](unsigned i, unsigned b) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
      f /= b;
      r += f * (i % b);
      i /= b;
    }
    return r;
  };
  std::vector<Vector3d> pts;
  unsigned i = skip + 1;
  while (pts.size() < size_t(count)) {
    const Vector3d u(2.0 * halton(i, 2) - 1.0, 2.0 * halton(i, 3) - 1.0,
                     2.0 * halton(i, 5) - 1.0);
    ++i;
    if (u.squaredNorm() <= 1.0) pts.push_back(radius * u);
  }
  return pts;
}

namespace {

struct Quantity {
  std::string name;
  // value from a sample bundle; envelope(tau, z)
  std::function<double(const CurvSample&, const CurvSample&, const CurvSample&,
                       const CurvSample* zp, const CurvSample* zm, double h,
                       const Vector3d& z)>
      extract;
  std::function<double(double, const Vector3d&, double)> envelope;  // (tau,z,eps)
};

double trend_fit(const std::vector<double>& taus, const std::vector<double>& r,
                 double* slope) {
  std::vector<double> lx, ly;
  for (size_t i = 2 * taus.size() / 3; i < taus.size(); ++i)
    if (r[i] > 0) {
      lx.push_back(std::log(taus[i]));
      ly.push_back(std::log(r[i]));
    }
  if (lx.size() < 4) return 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double k = double(lx.size());
  *slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return k;
}

}  // namespace

std::vector<BoundReport> bound_harness_special(const GaugePlan& plan,
                                               const BoundHarnessConfig& cfg) {
  const double eps = cfg.eps_decay;
  const auto zset = ball_samples(cfg.z_max, cfg.z_samples);

  struct Sampled {
    CurvSample c, tp, tm;
    CurvSample zp[3], zm[3];
  };

  // 14 quantities with their envelopes
  struct Item {
    std::string name;
    std::function<double(const Sampled&, double h, const Vector3d&)> q;
    std::function<double(double ct, double cz, double e)> env;
  };
  auto dz = [](const Sampled& s, double h, int i, auto&& get) {
    return (get(s.zp[i]) - get(s.zm[i])) / (2.0 * h);
  };
  std::vector<Item> items;
  items.push_back({"F_itau", [](const Sampled& s, double, const Vector3d&) {
                     return s.c.f_itau.cwiseAbs().maxCoeff();
                   },
                   [](double ct, double cz, double) { return 1.0 / (ct * cz); }});
  items.push_back({"zF_itau", [](const Sampled& s, double, const Vector3d& z) {
                     return std::abs(z.dot(s.c.f_itau));
                   },
                   [](double ct, double, double) { return 1.0 / ct; }});
  items.push_back({"F_ij", [](const Sampled& s, double, const Vector3d&) {
                     return s.c.f_ij.cwiseAbs().maxCoeff();
                   },
                   [](double, double, double) { return 1.0; }});
  items.push_back({"zF_ij", [](const Sampled& s, double, const Vector3d& z) {
                     return (z.transpose() * s.c.f_ij).cwiseAbs().maxCoeff();
                   },
                   [](double, double cz, double) { return 1.0 / cz; }});
  items.push_back({"A_tau", [](const Sampled& s, double, const Vector3d&) {
                     return std::abs(s.c.a_tau);
                   },
                   [](double ct, double cz, double e) {
                     return (1.0 + std::log(ct)) / std::pow(ct, 1.0 + e) +
                            std::log(cz) / (ct * ct * ct);
                   }});
  items.push_back(
      {"A_i", [](const Sampled& s, double, const Vector3d&) {
         return s.c.a_i.cwiseAbs().maxCoeff();
       },
       [](double ct, double cz, double) {
         return (1.0 + std::log(ct * cz)) / cz;
       }});
  items.push_back(
      {"zA_i", [](const Sampled& s, double, const Vector3d& z) {
         return std::abs(z.dot(s.c.a_i));
       },
       [](double ct, double cz, double e) {
         return (1.0 + std::log(ct * cz)) / std::pow(cz, e);
       }});
  items.push_back(
      {"dA_tau", [dz](const Sampled& s, double h, const Vector3d&) {
         double m = 0;
         for (int i = 0; i < 3; ++i)
           m = std::max(m, std::abs(dz(s, h, i, [](const CurvSample& c) {
                          return c.a_tau;
                        })));
         return m;
       },
       [](double ct, double, double e) {
         return (1.0 + std::log(ct)) / std::pow(ct, 1.0 + e);
       }});
  items.push_back(
      {"zdA_tau", [dz](const Sampled& s, double h, const Vector3d& z) {
         double acc = 0;
         for (int i = 0; i < 3; ++i)
           acc += z[i] * dz(s, h, i, [](const CurvSample& c) { return c.a_tau; });
         return std::abs(acc);
       },
       [](double ct, double, double e) {
         return (1.0 + std::log(ct)) / std::pow(ct, 1.0 + e);
       }});
  items.push_back({"dtauA_i", [](const Sampled& s, double h, const Vector3d&) {
                     return ((s.tp.a_i - s.tm.a_i) / (2.0 * h))
                         .cwiseAbs()
                         .maxCoeff();
                   },
                   [](double ct, double, double) { return 1.0 / ct; }});
  items.push_back({"zdtauA_i", [](const Sampled& s, double h, const Vector3d& z) {
                     return std::abs(z.dot((s.tp.a_i - s.tm.a_i) / (2.0 * h)));
                   },
                   [](double ct, double, double) { return 1.0 / ct; }});
  items.push_back(
      {"dA_ij", [dz](const Sampled& s, double h, const Vector3d&) {
         double m = 0;
         for (int i = 0; i < 3; ++i)
           for (int j = 0; j < 3; ++j)
             m = std::max(m, std::abs(dz(s, h, i, [j](const CurvSample& c) {
                            return c.a_i[j];
                          })));
         return m;
       },
       [](double ct, double, double) { return 1.0 + std::log(ct); }});
  items.push_back(
      {"zdA_ij", [dz](const Sampled& s, double h, const Vector3d& z) {
         double m = 0;
         for (int j = 0; j < 3; ++j) {
           double a1 = 0, a2 = 0;
           for (int i = 0; i < 3; ++i) {
             const double d =
                 dz(s, h, i, [j](const CurvSample& c) { return c.a_i[j]; });
             const double dT =
                 dz(s, h, j, [i](const CurvSample& c) { return c.a_i[i]; });
             a1 += z[i] * d;
             a2 += z[i] * dT;
           }
           m = std::max({m, std::abs(a1), std::abs(a2)});
         }
         return m;
       },
       [](double ct, double cz, double) {
         return (1.0 + std::log(ct * cz)) / cz;
       }});
  items.push_back(
      {"zzdA_ij", [dz](const Sampled& s, double h, const Vector3d& z) {
         double acc = 0;
         for (int i = 0; i < 3; ++i)
           for (int j = 0; j < 3; ++j)
             acc += z[i] * z[j] *
                    dz(s, h, i, [j](const CurvSample& c) { return c.a_i[j]; });
         return std::abs(acc);
       },
       [](double ct, double cz, double e) {
         return (1.0 + std::log(ct * cz)) / std::pow(cz, e);
       }});

  std::vector<double> taus(cfg.tau_samples);
  for (int i = 0; i < cfg.tau_samples; ++i)
    taus[i] = cfg.tau_min * std::pow(cfg.tau_max / cfg.tau_min,
                                     double(i) / (cfg.tau_samples - 1));

  std::vector<BoundReport> reports(items.size());
  for (size_t q = 0; q < items.size(); ++q) {
    reports[q].name = items[q].name;
    reports[q].taus = taus;
    reports[q].ratios.assign(taus.size(), 0.0);
  }

  const double h = cfg.fd_z;
  for (size_t it = 0; it < taus.size(); ++it) {
    const double tau = taus[it];
    for (const Vector3d& z : zset) {
      Sampled s;
      s.c = curvilinear_components(plan, tau, z);
      s.tp = curvilinear_components(plan, tau + cfg.fd_tau, z);
      s.tm = curvilinear_components(plan, tau - cfg.fd_tau, z);
      for (int i = 0; i < 3; ++i) {
        Vector3d zp = z, zm = z;
        zp[i] += h;
        zm[i] -= h;
        s.zp[i] = curvilinear_components(plan, tau, zp);
        s.zm[i] = curvilinear_components(plan, tau, zm);
      }
      const double ct = std::sqrt(tau * tau + 1.0);
      const double cz = std::sqrt(z.squaredNorm() + 1.0);
      for (size_t q = 0; q < items.size(); ++q) {
        double hh = (q >= 9 && q <= 10) ? cfg.fd_tau : h;  // dtau items
        const double val = items[q].q(s, hh, z);
        const double env = items[q].env(ct, cz, cfg.eps_decay);
        reports[q].ratios[it] =
            std::max(reports[q].ratios[it], val / std::max(env, 1e-300));
      }
    }
  }
  (void)eps;
  for (auto& rep : reports) {
    for (double r : rep.ratios) rep.sup_ratio = std::max(rep.sup_ratio, r);
    if (rep.sup_ratio == 0.0) {
      rep.verdict = Verdict::PASS;
      continue;
    }
    const double npts = trend_fit(rep.taus, rep.ratios, &rep.trend_slope);
    rep.verdict = (npts < 4)               ? Verdict::INCONCLUSIVE
                  : (rep.trend_slope <= cfg.slope_tol) ? Verdict::PASS
                                                       : Verdict::FAIL;
  }
  return reports;
}

std::vector<TailReport> integrability_proxies(const GaugePlan& plan, double r,
                                              const BoundHarnessConfig& cfg) {
  const auto zset = ball_samples(r, cfg.z_samples);
  std::vector<double> taus(cfg.tau_samples);
  for (int i = 0; i < cfg.tau_samples; ++i)
    taus[i] = cfg.tau_min * std::pow(cfg.tau_max / cfg.tau_min,
                                     double(i) / (cfg.tau_samples - 1));

  std::vector<TailReport> out(4);
  out[0].name = "norm_A_tau";
  out[1].name = "invtau2_norm_A_i_sq";
  out[2].name = "invtau2_norm_dA_ij";
  out[3].name = "invtau_norm_dtauA_i";
  std::vector<std::vector<double>> series(4, std::vector<double>(taus.size(), 0));

  for (size_t it = 0; it < taus.size(); ++it) {
    const double tau = taus[it];
    const double ct2 = tau * tau + 1.0;
    const double ct = std::sqrt(ct2);
    for (const Vector3d& z : zset) {
      const CurvSample c = curvilinear_components(plan, tau, z);
      const CurvSample tp = curvilinear_components(plan, tau + cfg.fd_tau, z);
      const CurvSample tm = curvilinear_components(plan, tau - cfg.fd_tau, z);
      double dij = 0;
      for (int i = 0; i < 3; ++i) {
        Vector3d zp = z, zm = z;
        zp[i] += cfg.fd_z;
        zm[i] -= cfg.fd_z;
        const CurvSample cp = curvilinear_components(plan, tau, zp);
        const CurvSample cm = curvilinear_components(plan, tau, zm);
        dij = std::max(dij,
                       ((cp.a_i - cm.a_i) / (2.0 * cfg.fd_z)).cwiseAbs().maxCoeff());
      }
      series[0][it] = std::max(series[0][it], std::abs(c.a_tau));
      series[1][it] =
          std::max(series[1][it],
                   c.a_i.cwiseAbs().maxCoeff() * c.a_i.cwiseAbs().maxCoeff() / ct2);
      series[2][it] = std::max(series[2][it], dij / ct2);
      series[3][it] = std::max(
          series[3][it],
          ((tp.a_i - tm.a_i) / (2.0 * cfg.fd_tau)).cwiseAbs().maxCoeff() / ct);
    }
  }
  for (int q = 0; q < 4; ++q) {
    double slope = 0;
    const double npts = trend_fit(taus, series[q], &slope);
    out[q].exponent = slope;
    const double last = series[q].back();
    out[q].finite = (npts >= 4) && slope < -1.0;
    out[q].tail_estimate =
        out[q].finite ? last * taus.back() / (-slope - 1.0) : INFINITY;
  }
  return out;
}

CauchyReport gauge_difference_cauchy(const GaugePlan& plan,
                                     const LorenzField& base,
                                     const std::vector<Vector3d>& zset,
                                     const std::vector<double>& taus) {
  CauchyReport rep;
  rep.name = (plan.kind == GaugeKind::ConeLog) ? "cone_log" : "temporal";
  GaugePlan phi_plan;
  phi_plan.kind = GaugeKind::SpecialPhi;
  phi_plan.base = &base;
  phi_plan.analytic = plan.analytic;

  std::vector<std::vector<double>> G(taus.size());
  for (size_t it = 0; it < taus.size(); ++it) {
    G[it].resize(zset.size());
    for (size_t iz = 0; iz < zset.size(); ++iz)
      G[it][iz] = gauge_function(plan, taus[it], zset[iz]) -
                  gauge_function(phi_plan, taus[it], zset[iz]);
  }
  for (size_t it = 0; it + 1 < taus.size(); ++it) {
    double inc = 0;
    for (size_t iz = 0; iz < zset.size(); ++iz)
      inc = std::max(inc, std::abs(G[it + 1][iz] - G[it][iz]));
    rep.taus.push_back(taus[it + 1]);
    rep.increments.push_back(inc);
  }
  const size_t n = rep.increments.size();
  if (n >= 4) {
    double slope = 0;
    trend_fit(rep.taus, rep.increments, &slope);
    rep.decreasing_tail = slope < -0.2;
  }
  return rep;
}

}  // namespace dirfol
