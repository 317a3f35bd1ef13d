#include "dirfol/evolution.hpp"

#include <cmath>

namespace dirfol {

namespace {

/// alpha^i and (z.alpha) applied to a 4-component value.
inline void alpha1_apply(const complexd in[4], complexd out[4]) {
  out[0] = in[3];
  out[1] = in[2];
  out[2] = in[1];
  out[3] = in[0];
}
inline void alpha2_apply(const complexd in[4], complexd out[4]) {
  const complexd I(0, 1);
  out[0] = -I * in[3];
  out[1] = I * in[2];
  out[2] = -I * in[1];
  out[3] = I * in[0];
}
inline void alpha3_apply(const complexd in[4], complexd out[4]) {
  out[0] = in[2];
  out[1] = -in[3];
  out[2] = in[0];
  out[3] = -in[1];
}
inline void alpha_apply(int i, const complexd in[4], complexd out[4]) {
  if (i == 0) alpha1_apply(in, out);
  else if (i == 1) alpha2_apply(in, out);
  else alpha3_apply(in, out);
}
inline void zalpha_apply(const Vector3d& z, const complexd in[4],
                         complexd out[4]) {
  const complexd zp(z[0], z[1]);   // z1 + i z2
  const complexd zm(z[0], -z[1]);  // z1 - i z2
  out[0] = zm * in[3] + z[2] * in[2];
  out[1] = zp * in[2] - z[2] * in[3];
  out[2] = zm * in[1] + z[2] * in[0];
  out[3] = zp * in[0] - z[2] * in[1];
}

/// d/dz_axis with zero padding, central stencil of the given order.
void stencil_derivative(const SpinorGridField& in, int axis, int order,
                        SpinorGridField& out) {
  const GridSpec& g = in.grid;
  const int n = g.n;
  const double idz = 1.0 / g.dz();
  const std::int64_t stride =
      (axis == 0) ? std::int64_t(n) * n : (axis == 1) ? std::int64_t(n) : 1;

  for (int c = 0; c < 4; ++c) {
    const complexd* p = in.plane(c);
    complexd* q = out.plane(c);
#pragma omp parallel for schedule(static)
    for (std::int64_t a = 0; a < g.size(); ++a) {
      const std::int64_t pos =
          (axis == 0) ? a / (std::int64_t(n) * n)
                      : (axis == 1) ? (a / n) % n : a % n;
      complexd d;
      if (order == 2) {
        const complexd fp = (pos + 1 < n) ? p[a + stride] : complexd(0);
        const complexd fm = (pos >= 1) ? p[a - stride] : complexd(0);
        d = (fp - fm) * (0.5 * idz);
      } else {
        const complexd fp1 = (pos + 1 < n) ? p[a + stride] : complexd(0);
        const complexd fp2 = (pos + 2 < n) ? p[a + 2 * stride] : complexd(0);
        const complexd fm1 = (pos >= 1) ? p[a - stride] : complexd(0);
        const complexd fm2 = (pos >= 2) ? p[a - 2 * stride] : complexd(0);
        d = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) * (idz / 12.0);
      }
      q[a] = d;
    }
  }
}

void ensure_workspace(HWorkspace& ws, const GridSpec& g) {
  if (ws.dfield.grid == g && !ws.dfield.raw().empty()) return;
  for (int i = 0; i < 3; ++i) ws.u[i] = SpinorGridField(g, 0);
  ws.dfield = SpinorGridField(g, 0);
}

}  // namespace

void validate(const EvolutionConfig& cfg) {
  if (cfg.grid.n < 8) throw ConfigError("grid.n too small");
  if (cfg.dtau == 0) throw ConfigError("dtau must be nonzero");
  if (cfg.stencil_order != 2 && cfg.stencil_order != 4)
    throw ConfigError("stencil_order must be 2 or 4");
  if (cfg.r_support) {
    const double r_end =
        causal_radius(cfg.tau_start, *cfg.r_support, cfg.tau_end);
    if (r_end + cfg.mask_width > cfg.grid.half()) {
      throw ConfigError(
          "causal-box invariant violated: causal_radius(tau_start, r_support, "
          "tau_end) + mask width exceeds the box half-extent (" +
          std::to_string(r_end + cfg.mask_width) + " > " +
          std::to_string(cfg.grid.half()) + ")");
    }
  }
}

CoeffSlice coeff_slice(double tau, const GridSpec& grid) {
  CoeffSlice cs;
  cs.tau = tau;
  const std::int64_t N = grid.size();
  cs.lam_a.resize(N);
  cs.lam_c.resize(N);
  cs.mu_s.resize(N);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < N; ++i) {
    const FrameScalars sc = frame_scalars(foliation_point(tau, grid.node(i)));
    cs.lam_a[i] = sc.lam_a;
    cs.lam_c[i] = sc.lam_c;
    cs.mu_s[i] = sc.mu_s;
  }
  return cs;
}

PotentialSlice sample_slice(const GaugePlan* plan, double tau,
                            const GridSpec& grid, double support_radius) {
  PotentialSlice ps;
  ps.tau = tau;
  const std::int64_t N = grid.size();
  ps.a_tau.assign(N, 0.0);
  ps.ax.assign(N, 0.0);
  ps.ay.assign(N, 0.0);
  ps.az.assign(N, 0.0);
  if (!plan || !plan->base) return ps;
  const double r2 = support_radius * support_radius;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < N; ++i) {
    const Vector3d z = grid.node(i);
    if (z.squaredNorm() > r2) continue;
    const CurvSample c = curvilinear_components(*plan, tau, z);
    ps.a_tau[i] = c.a_tau;
    ps.ax[i] = c.a_i[0];
    ps.ay[i] = c.a_i[1];
    ps.az[i] = c.a_i[2];
  }
  return ps;
}

void apply_H(const SpinorGridField& in, const CoeffSlice& coeff,
             const PotentialSlice* W, int stencil_order, SpinorGridField& out,
             HWorkspace& ws) {
  const GridSpec& g = in.grid;
  ensure_workspace(ws, g);
  const std::int64_t N = g.size();
  const complexd mihalf(0, -0.5);  // -i/2

  // Pass A: u_i = lambda^i chi, out = (mu beta + a_tau + a.lambda) chi
#pragma omp parallel for schedule(static)
  for (std::int64_t idx = 0; idx < N; ++idx) {
    const Vector3d z = g.node(idx);
    complexd chi[4], ai[4], za[4];
    for (int c = 0; c < 4; ++c) chi[c] = in.at(c, idx);
    zalpha_apply(z, chi, za);
    const double la = coeff.lam_a[idx], lc = coeff.lam_c[idx];
    for (int i = 0; i < 3; ++i) {
      alpha_apply(i, chi, ai);
      for (int c = 0; c < 4; ++c)
        ws.u[i].at(c, idx) = la * ai[c] + lc * z[i] * za[c];
    }
    // mu chi = mu_s beta chi
    const double mu = coeff.mu_s[idx];
    complexd o[4] = {mu * chi[0], mu * chi[1], -mu * chi[2], -mu * chi[3]};
    if (W && !W->empty()) {
      const double at = W->a_tau[idx];
      const Vector3d av(W->ax[idx], W->ay[idx], W->az[idx]);
      // (a_tau + a_i lambda^i) chi = a_tau chi + la (a.alpha) chi + lc (a.z) za
      complexd aal[4];
      zalpha_apply(av, chi, aal);  // (a.alpha) chi
      const double adotz = av.dot(z);
      for (int c = 0; c < 4; ++c)
        o[c] += at * chi[c] + la * aal[c] + lc * adotz * za[c];
    }
    for (int c = 0; c < 4; ++c) out.at(c, idx) = o[c];
  }

  // Pass B: derivative terms
  for (int axis = 0; axis < 3; ++axis) {
    stencil_derivative(in, axis, stencil_order, ws.dfield);
#pragma omp parallel for schedule(static)
    for (std::int64_t idx = 0; idx < N; ++idx) {
      const Vector3d z = g.node(idx);
      complexd d[4], ad[4], zad[4];
      for (int c = 0; c < 4; ++c) d[c] = ws.dfield.at(c, idx);
      alpha_apply(axis, d, ad);
      zalpha_apply(z, d, zad);
      const double la = coeff.lam_a[idx], lc = coeff.lam_c[idx];
      for (int c = 0; c < 4; ++c)
        out.at(c, idx) += mihalf * (la * ad[c] + lc * z[axis] * zad[c]);
    }
    stencil_derivative(ws.u[axis], axis, stencil_order, ws.dfield);
#pragma omp parallel for schedule(static)
    for (std::int64_t idx = 0; idx < N; ++idx) {
      for (int c = 0; c < 4; ++c)
        out.at(c, idx) += mihalf * ws.dfield.at(c, idx);
    }
  }
  out.tau = in.tau;
}

void apply_W(const SpinorGridField& in, const CoeffSlice& coeff,
             const PotentialSlice& W, SpinorGridField& out) {
  const GridSpec& g = in.grid;
  const std::int64_t N = g.size();
#pragma omp parallel for schedule(static)
  for (std::int64_t idx = 0; idx < N; ++idx) {
    const Vector3d z = g.node(idx);
    complexd chi[4], za[4], aal[4];
    for (int c = 0; c < 4; ++c) chi[c] = in.at(c, idx);
    zalpha_apply(z, chi, za);
    const double la = coeff.lam_a[idx], lc = coeff.lam_c[idx];
    const double at = W.a_tau[idx];
    const Vector3d av(W.ax[idx], W.ay[idx], W.az[idx]);
    zalpha_apply(av, chi, aal);
    const double adotz = av.dot(z);
    for (int c = 0; c < 4; ++c)
      out.at(c, idx) = at * chi[c] + la * aal[c] + lc * adotz * za[c];
  }
  out.tau = in.tau;
}

void apply_X(const SpinorGridField& in, const CoeffSlice& coeff,
             const PotentialSlice& W, SpinorGridField& out) {
  const GridSpec& g = in.grid;
  const std::int64_t N = g.size();
  const double tau = coeff.tau;
  const double ctau = std::sqrt(tau * tau + 1.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t idx = 0; idx < N; ++idx) {
    const Vector3d z = g.node(idx);
    complexd chi[4], za[4], aal[4];
    for (int c = 0; c < 4; ++c) chi[c] = in.at(c, idx);
    zalpha_apply(z, chi, za);
    const double la = coeff.lam_a[idx], lc = coeff.lam_c[idx];
    const Vector3d av(W.ax[idx], W.ay[idx], W.az[idx]);
    zalpha_apply(av, chi, aal);
    const double adotz = av.dot(z);
    const double tz = std::sqrt(tau * tau + z.squaredNorm() + 1.0);
    const double half_mu_inv = 0.5 * ctau / tz;
    complexd t[4];
    for (int c = 0; c < 4; ++c) t[c] = la * aal[c] + lc * adotz * za[c];
    // beta multiplication
    out.at(0, idx) = half_mu_inv * t[0];
    out.at(1, idx) = half_mu_inv * t[1];
    out.at(2, idx) = -half_mu_inv * t[2];
    out.at(3, idx) = -half_mu_inv * t[3];
  }
  out.tau = in.tau;
}

SpinorGridField step(const SpinorGridField& chi, double dtau,
                     const EvolutionConfig& cfg, StepDiagnostics* diag) {
  const GridSpec& g = chi.grid;
  const double tau_mid = chi.tau + 0.5 * dtau;
  const CoeffSlice coeff = coeff_slice(tau_mid, g);
  PotentialSlice W;
  const PotentialSlice* Wp = nullptr;
  if (cfg.gauge && cfg.gauge->base) {
    double rs = g.half() * std::sqrt(3.0) + 1.0;
    if (cfg.restrict_support) {
      rs = std::min(rs, support_radius(chi, 1e-14) + cfg.support_margin +
                            std::abs(dtau) * 4.0);
    }
    W = sample_slice(cfg.gauge, tau_mid, g, rs);
    Wp = &W;
  }

  static thread_local HWorkspace ws;
  const double c = 0.5 * dtau;
  const complexd ic(0, c);

  SpinorGridField tmp(g, chi.tau), b(g, chi.tau), rhs(g, chi.tau);
  // b = chi - i c H chi
  apply_H(chi, coeff, Wp, cfg.stencil_order, tmp, ws);
  {
    const auto& src = chi.raw();
    const auto& h = tmp.raw();
    auto& dst = b.raw();
    for (size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] - ic * h[i];
  }
  // rhs = (1 - i c H) b
  apply_H(b, coeff, Wp, cfg.stencil_order, tmp, ws);
  {
    const auto& src = b.raw();
    const auto& h = tmp.raw();
    auto& dst = rhs.raw();
    for (size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] - ic * h[i];
  }

  // CG on M = 1 + c^2 H^2, x0 = b
  SpinorGridField x = b, r(g, chi.tau), p(g, chi.tau), Mp(g, chi.tau);
  auto apply_M = [&](const SpinorGridField& in, SpinorGridField& out) {
    apply_H(in, coeff, Wp, cfg.stencil_order, tmp, ws);
    apply_H(tmp, coeff, Wp, cfg.stencil_order, out, ws);
    const auto& src = in.raw();
    auto& dst = out.raw();
    const double c2 = c * c;
    for (size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] + c2 * dst[i];
  };
  apply_M(x, Mp);
  {
    const auto& rr = rhs.raw();
    const auto& mm = Mp.raw();
    auto& rd = r.raw();
    for (size_t i = 0; i < rd.size(); ++i) rd[i] = rr[i] - mm[i];
  }
  p = r;
  double rr_old = 0;
  for (const auto& v : r.raw()) rr_old += std::norm(v);
  double rhs_nrm2 = 0;
  for (const auto& v : rhs.raw()) rhs_nrm2 += std::norm(v);
  const double tol2 = cfg.solve_tol * cfg.solve_tol * rhs_nrm2;

  int it = 0;
  while (rr_old > tol2 && it < cfg.solve_max_iter) {
    apply_M(p, Mp);
    double pMp = 0;
    {
      const auto& pp = p.raw();
      const auto& mm = Mp.raw();
      for (size_t i = 0; i < pp.size(); ++i)
        pMp += (std::conj(pp[i]) * mm[i]).real();
    }
    const double alpha = rr_old / pMp;
    {
      auto& xx = x.raw();
      auto& rd = r.raw();
      const auto& pp = p.raw();
      const auto& mm = Mp.raw();
      for (size_t i = 0; i < xx.size(); ++i) {
        xx[i] += alpha * pp[i];
        rd[i] -= alpha * mm[i];
      }
    }
    double rr_new = 0;
    for (const auto& v : r.raw()) rr_new += std::norm(v);
    const double beta_cg = rr_new / rr_old;
    {
      auto& pp = p.raw();
      const auto& rd = r.raw();
      for (size_t i = 0; i < pp.size(); ++i) pp[i] = rd[i] + beta_cg * pp[i];
    }
    rr_old = rr_new;
    ++it;
  }
  if (rr_old > tol2)
    throw NoConvergence("CN solve exceeded the iteration cap (dtau too large "
                        "for the spectral radius?)");

  x.tau = chi.tau + dtau;
  double loss = 0;
  if (cfg.apply_mask) {
    const double before = grid_norm2(x);
    apply_radial_mask(x, g.half() - cfg.mask_width, g.half());
    loss = before - grid_norm2(x);
  }
  if (diag) {
    diag->iterations = it;
    diag->rel_residual = std::sqrt(rr_old / rhs_nrm2);
    diag->mask_loss = loss;
  }
  return x;
}

EvolveResult evolve(const SpinorGridField& chi0, const EvolutionConfig& cfg,
                    const std::vector<double>& snapshot_taus) {
  validate(cfg);
  EvolveResult res;
  res.state = chi0;
  res.state.tau = cfg.tau_start;
  const double span = cfg.tau_end - cfg.tau_start;
  const double dt = (span >= 0) ? std::abs(cfg.dtau) : -std::abs(cfg.dtau);
  const int nsteps = std::max(1, int(std::llround(span / dt)));

  size_t snap_next = 0;
  std::vector<double> snaps = snapshot_taus;

  auto maybe_snapshot = [&](const SpinorGridField& s) {
    while (snap_next < snaps.size() &&
           std::abs(s.tau - snaps[snap_next]) <= std::abs(dt) * 0.51) {
      res.snapshots.push_back(s);
      res.snapshot_taus.push_back(s.tau);
      ++snap_next;
    }
  };
  maybe_snapshot(res.state);

  for (int k = 0; k < nsteps; ++k) {
    const double target = cfg.tau_start + (k + 1) * dt;
    const double dtau = target - res.state.tau;
    StepDiagnostics d;
    res.state = step(res.state, dtau, cfg, &d);
    res.taus.push_back(res.state.tau);
    res.norms.push_back(grid_norm(res.state));
    res.iterations.push_back(d.iterations);
    res.total_mask_loss += d.mask_loss;
    maybe_snapshot(res.state);
  }
  return res;
}

namespace {

HyperboloidAmplitude amp_zero(const VGridSpec& vs) {
  HyperboloidAmplitude a;
  a.spec = vs;
  a.values.assign(vs.size(), Vector4c::Zero());
  return a;
}
void amp_axpy(HyperboloidAmplitude& y, complexd a, const HyperboloidAmplitude& x) {
  for (size_t i = 0; i < y.values.size(); ++i) y.values[i] += a * x.values[i];
}

}  // namespace

SpinorGridField dyson_reference(const SpinorGridField& chi0, double tau,
                                int order, const EvolutionConfig& cfg,
                                const VGridSpec& vspec, int ladder) {
  if (std::abs(tau) > 0.6)
    throw std::invalid_argument("dyson_reference: |tau| must be <= 0.6");
  if (order < 0 || order > 3)
    throw std::invalid_argument("dyson_reference: order must be in [0,3]");
  if (ladder % 2) ++ladder;

  const GridSpec& g = chi0.grid;
  HyperboloidAmplitude f0 = analyze(chi0, vspec).amplitude;

  TransformOptions topts;
  // one application of G(rho) = A_rho W(rho) F_rho
  auto Gap = [&](double rho, const HyperboloidAmplitude& f) {
    SpinorGridField field = free_evolve_sampled(f, rho, g, topts);
    const CoeffSlice coeff = coeff_slice(rho, g);
    const PotentialSlice W =
        sample_slice(cfg.gauge, rho, g, g.half() * std::sqrt(3.0) + 1.0);
    SpinorGridField wf(g, rho);
    apply_W(field, coeff, W, wf);
    return analyze_at_tau(wf, vspec);
  };

  // ladder nodes
  const int M = ladder;
  const double h = tau / M;
  std::vector<double> rho(M + 1);
  for (int m = 0; m <= M; ++m) rho[m] = m * h;

  HyperboloidAmplitude total = f0;
  std::vector<HyperboloidAmplitude> k(M + 1, amp_zero(vspec));
  std::vector<HyperboloidAmplitude> K(M + 1, amp_zero(vspec));
  for (int ord = 1; ord <= order; ++ord) {
    for (int m = 0; m <= M; ++m) k[m] = Gap(rho[m], (ord == 1) ? f0 : K[m]);
    // cumulative Simpson of k, multiplied by -i
    std::vector<HyperboloidAmplitude> cum(M + 1, amp_zero(vspec));
    for (int m = 2; m <= M; m += 2) {
      cum[m] = cum[m - 2];
      amp_axpy(cum[m], h / 3.0, k[m - 2]);
      amp_axpy(cum[m], 4.0 * h / 3.0, k[m - 1]);
      amp_axpy(cum[m], h / 3.0, k[m]);
    }
    for (int m = 1; m < M; m += 2) {
      cum[m] = cum[m - 1];
      amp_axpy(cum[m], 5.0 * h / 12.0, k[m - 1]);
      amp_axpy(cum[m], 8.0 * h / 12.0, k[m]);
      amp_axpy(cum[m], -h / 12.0, k[m + 1]);
    }
    for (int m = 0; m <= M; ++m) {
      HyperboloidAmplitude Km = amp_zero(vspec);
      amp_axpy(Km, complexd(0, -1), cum[m]);
      K[m] = Km;
    }
    amp_axpy(total, 1.0, K[M]);
  }
  return free_evolve_sampled(total, tau, g, topts);
}

}  // namespace dirfol
