#include "dirfol/scattering.hpp"

#include <algorithm>
#include <cmath>

namespace dirfol {

namespace {

/// Free-state evaluation radius: velocity support plus the shrinking
/// transient, clamped to the box.
double free_state_radius(const AnalyticAmplitude& amp, double r_psi, double tau,
                         const GridSpec& g) {
  const double s = amp.center.norm() + amp.radius;
  const double u_sup = s / std::sqrt(1.0 + s * s);
  const double ctau = std::sqrt(tau * tau + 1.0);
  const double denom = std::max(ctau - u_sup * std::abs(tau), 0.2);
  const double R = 1.15 * s + (r_psi + 2.0) / denom;
  return std::min(R, g.half() * std::sqrt(3.0) + 1.0);
}

void phi_conjugate(SpinorGridField& f, double tau) {
  // Phi(tau)^* = diag(e^{+i tau}, e^{+i tau}, e^{-i tau}, e^{-i tau})
  const complexd up = std::polar(1.0, tau);
  const complexd dn = std::polar(1.0, -tau);
  const std::int64_t N = f.grid.size();
  for (std::int64_t i = 0; i < N; ++i) {
    f.at(0, i) *= up;
    f.at(1, i) *= up;
    f.at(2, i) *= dn;
    f.at(3, i) *= dn;
  }
}

void scale_field(SpinorGridField& f, double s) {
  for (auto& v : f.raw()) v *= s;
}

PotentialSlice slice_for(const ProbeConfig& cfg, const SpinorGridField& chi) {
  const double rs =
      cfg.evo.restrict_support
          ? support_radius(chi, 1e-14) + cfg.evo.support_margin
          : chi.grid.half() * std::sqrt(3.0) + 1.0;
  return sample_slice(cfg.evo.gauge, chi.tau, chi.grid, rs);
}

}  // namespace

double fit_powerlaw_outer_half(const std::vector<double>& taus,
                               const std::vector<double>& values, bool* valid) {
  std::vector<double> lx, ly;
  for (size_t i = taus.size() / 2; i < taus.size(); ++i)
    if (values[i] > 0) {
      lx.push_back(std::log(taus[i]));
      ly.push_back(std::log(values[i]));
    }
  if (valid) *valid = lx.size() >= 3;
  if (lx.size() < 3) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double n = double(lx.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void classify_series(ConvergenceSeries& s, double floor) {
  s.floor = floor;
  s.fitted_exponent = fit_powerlaw_outer_half(s.taus, s.values, &s.fit_valid);
  double outer_max = 0;
  for (size_t i = s.taus.size() / 2; i < s.values.size(); ++i)
    outer_max = std::max(outer_max, s.values[i]);
  if (outer_max <= floor) {
    s.verdict = Verdict::PASS;  // converged to the numerical floor
    return;
  }
  if (!s.fit_valid) {
    s.verdict = Verdict::INCONCLUSIVE;
    return;
  }
  s.verdict = (s.fitted_exponent < -1.0) ? Verdict::PASS : Verdict::INCONCLUSIVE;
}

std::vector<double> geometric_ladder(double tau0, double ratio, double tau_max,
                                     double dtau) {
  std::vector<double> out;
  double t = tau0;
  while (t <= tau_max * 1.0001) {
    const double snapped = std::llround(t / dtau) * dtau;
    if (out.empty() || snapped > out.back() + 0.5 * dtau) out.push_back(snapped);
    t *= ratio;
  }
  return out;
}

ForwardProbeResult forward_wave_probe(const ProbeConfig& cfg) {
  ForwardProbeResult res;
  const GridSpec& g = cfg.evo.grid;
  const AnalyticAmplitude amp = gaussian_packet(cfg.packet);

  TransformOptions opts = cfg.free_opts;
  opts.eval_radius = std::min(free_state_radius(amp, 12.0, 0.0, g), g.half());
  SpinorGridField psi = free_evolve_exact(amp, 0.0, g, opts);
  const double N0 = grid_norm(psi);
  scale_field(psi, 1.0 / N0);
  res.psi_norm = 1.0;
  const double r_psi = support_radius(psi, cfg.support_eps);

  std::vector<SpinorGridField> W;
  for (double tk : cfg.tau_samples) {
    TransformOptions o2 = cfg.free_opts;
    o2.eval_radius = std::min(free_state_radius(amp, r_psi, tk, g), g.half());
    SpinorGridField phik = free_evolve_exact(amp, tk, g, o2);
    scale_field(phik, 1.0 / N0);

    EvolutionConfig back = cfg.evo;
    back.tau_start = tk;
    back.tau_end = 0.0;
    W.push_back(evolve(phik, back).state);
  }
  for (size_t k = 0; k + 1 < W.size(); ++k) {
    res.series.taus.push_back(cfg.tau_samples[k + 1]);
    res.series.values.push_back(grid_distance(W[k + 1], W[k]));
  }
  for (auto& w : W) res.series.norms.push_back(grid_norm(w));
  classify_series(res.series, cfg.floor);
  res.limit_state = W.back();
  return res;
}

InverseProbeResult inverse_wave_probe(const ProbeConfig& cfg) {
  InverseProbeResult res;
  const GridSpec& g = cfg.evo.grid;
  const AnalyticAmplitude amp = gaussian_packet(cfg.packet);
  TransformOptions opts = cfg.free_opts;
  opts.eval_radius = std::min(free_state_radius(amp, 12.0, 0.0, g), g.half());
  SpinorGridField psi = free_evolve_exact(amp, 0.0, g, opts);
  scale_field(psi, 1.0 / grid_norm(psi));

  EvolutionConfig fwd = cfg.evo;
  fwd.tau_start = 0.0;
  fwd.tau_end = cfg.tau_samples.back();
  const EvolveResult run = evolve(psi, fwd, cfg.tau_samples);

  std::vector<SpinorGridField> plain, corrected;
  for (size_t k = 0; k < run.snapshots.size(); ++k) {
    const SpinorGridField& chik = run.snapshots[k];
    const double tk = run.snapshot_taus[k];
    const CoeffSlice coeff = coeff_slice(tk, g);
    const PotentialSlice W = slice_for(cfg, chik);
    SpinorGridField Xchi(g, tk);
    apply_X(chik, coeff, W, Xchi);
    res.x_norms.taus.push_back(tk);
    res.x_norms.values.push_back(grid_norm(Xchi));

    SpinorGridField s_plain = chik;
    phi_conjugate(s_plain, tk);
    SpinorGridField s_corr = chik;
    for (size_t i = 0; i < s_corr.raw().size(); ++i)
      s_corr.raw()[i] += Xchi.raw()[i];
    phi_conjugate(s_corr, tk);
    plain.push_back(std::move(s_plain));
    corrected.push_back(std::move(s_corr));
  }
  for (size_t k = 0; k + 1 < plain.size(); ++k) {
    res.plain.taus.push_back(run.snapshot_taus[k + 1]);
    res.plain.values.push_back(grid_distance(plain[k + 1], plain[k]));
    res.corrected.taus.push_back(run.snapshot_taus[k + 1]);
    res.corrected.values.push_back(grid_distance(corrected[k + 1], corrected[k]));
  }
  for (auto& s : plain) res.plain.norms.push_back(grid_norm(s));
  classify_series(res.plain, cfg.floor);
  classify_series(res.corrected, cfg.floor);
  bool vx = false;
  res.x_norms.fitted_exponent =
      fit_powerlaw_outer_half(res.x_norms.taus, res.x_norms.values, &vx);
  res.x_norms.fit_valid = vx;

  res.limit_state = corrected.back();
  res.adjoint_image = picture_limit_inverse(+1, res.limit_state);
  res.unitarity_defect = std::abs(grid_norm(res.adjoint_image) - 1.0);
  return res;
}

PhiProbeResult phi_picture_probe(const ProbeConfig& cfg) {
  PhiProbeResult res;
  const GridSpec& g = cfg.evo.grid;
  const AnalyticAmplitude amp = gaussian_packet(cfg.packet);
  TransformOptions opts = cfg.free_opts;
  opts.eval_radius = std::min(free_state_radius(amp, 12.0, 0.0, g), g.half());
  SpinorGridField psi = free_evolve_exact(amp, 0.0, g, opts);
  scale_field(psi, 1.0 / grid_norm(psi));

  std::vector<SpinorGridField> p;
  for (double tk : cfg.tau_samples) {
    SpinorGridField start = psi;
    // Phi(tau_k) psi
    const complexd up = std::polar(1.0, -tk);
    const complexd dn = std::polar(1.0, tk);
    const std::int64_t N = g.size();
    for (std::int64_t i = 0; i < N; ++i) {
      start.at(0, i) *= up;
      start.at(1, i) *= up;
      start.at(2, i) *= dn;
      start.at(3, i) *= dn;
    }
    start.tau = tk;
    EvolutionConfig back = cfg.evo;
    back.tau_start = tk;
    back.tau_end = 0.0;
    p.push_back(evolve(start, back).state);
  }
  // Richardson with a 1/tau model from the last two samples
  const size_t K = p.size() - 1;
  const double i1 = 1.0 / cfg.tau_samples[K], i0 = 1.0 / cfg.tau_samples[K - 1];
  SpinorGridField L = p[K];
  {
    const double fac = i1 / (i1 - i0);
    for (size_t i = 0; i < L.raw().size(); ++i)
      L.raw()[i] -= fac * (p[K].raw()[i] - p[K - 1].raw()[i]);
  }
  for (size_t k = 0; k < p.size(); ++k) {
    res.series.taus.push_back(cfg.tau_samples[k]);
    res.series.values.push_back(grid_distance(p[k], L));
    res.series.norms.push_back(grid_norm(p[k]));
  }
  classify_series(res.series, cfg.floor);
  res.extrapolated_limit = L;
  return res;
}

double weighted_norm(const SpinorGridField& chi, const WeightFunction& xi,
                     const PotentialSlice* W, int stencil_order) {
  const GridSpec& g = chi.grid;
  const double tau = chi.tau;
  SpinorGridField d[3] = {SpinorGridField(g, tau), SpinorGridField(g, tau),
                          SpinorGridField(g, tau)};
  // p_i chi = -i d_i chi
  for (int axis = 0; axis < 3; ++axis) {
    const int n = g.n;
    const double idz = 1.0 / g.dz();
    const std::int64_t stride =
        (axis == 0) ? std::int64_t(n) * n : (axis == 1) ? std::int64_t(n) : 1;
    for (int c = 0; c < 4; ++c) {
      const complexd* p = chi.plane(c);
      complexd* q = d[axis].plane(c);
      for (std::int64_t a = 0; a < g.size(); ++a) {
        const std::int64_t pos =
            (axis == 0) ? a / (std::int64_t(n) * n)
                        : (axis == 1) ? (a / n) % n : a % n;
        complexd der;
        if (stencil_order == 2) {
          const complexd fp = (pos + 1 < n) ? p[a + stride] : complexd(0);
          const complexd fm = (pos >= 1) ? p[a - stride] : complexd(0);
          der = (fp - fm) * (0.5 * idz);
        } else {
          const complexd fp1 = (pos + 1 < n) ? p[a + stride] : complexd(0);
          const complexd fp2 = (pos + 2 < n) ? p[a + 2 * stride] : complexd(0);
          const complexd fm1 = (pos >= 1) ? p[a - stride] : complexd(0);
          const complexd fm2 = (pos >= 2) ? p[a - 2 * stride] : complexd(0);
          der = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) * (idz / 12.0);
        }
        q[a] = complexd(0, -1) * der;
      }
    }
  }
  double acc = 0;
  const std::int64_t N = g.size();
  for (std::int64_t idx = 0; idx < N; ++idx) {
    const Vector3d z = g.node(idx);
    const FrameScalars sc = frame_scalars(foliation_point(tau, z));
    complexd chiv[4], za[4], ai[4];
    for (int c = 0; c < 4; ++c) chiv[c] = chi.at(c, idx);
    // Lambda_i chi = i h ((z.alpha) alpha^i - z_i) chi
    Vector4c y[3];
    for (int i = 0; i < 3; ++i) {
      complexd tmp[4];
      // alpha^i chi then z.alpha of it
      {
        complexd achi[4];
        if (i == 0) {
          achi[0] = chiv[3]; achi[1] = chiv[2]; achi[2] = chiv[1]; achi[3] = chiv[0];
        } else if (i == 1) {
          const complexd I(0, 1);
          achi[0] = -I * chiv[3]; achi[1] = I * chiv[2];
          achi[2] = -I * chiv[1]; achi[3] = I * chiv[0];
        } else {
          achi[0] = chiv[2]; achi[1] = -chiv[3]; achi[2] = chiv[0]; achi[3] = -chiv[1];
        }
        const complexd zp(z[0], z[1]), zm(z[0], -z[1]);
        tmp[0] = zm * achi[3] + z[2] * achi[2];
        tmp[1] = zp * achi[2] - z[2] * achi[3];
        tmp[2] = zm * achi[1] + z[2] * achi[0];
        tmp[3] = zp * achi[0] - z[2] * achi[1];
      }
      for (int c = 0; c < 4; ++c) {
        complexd v = d[i].at(c, idx);  // p_i chi
        v += complexd(0, 1) * sc.cap_h * (tmp[c] - z[i] * chiv[c]);  // Lambda_i
        if (W && !W->empty()) {
          const double a =
              (i == 0) ? W->ax[idx] : (i == 1) ? W->ay[idx] : W->az[idx];
          v += a * chiv[c];
        }
        y[i][c] = v;
      }
      (void)za;
      (void)ai;
    }
    // sum_ij rho^ij conj(y_i) y_j = rho_a sum |y_i|^2 + rho_b |sum z_i y_i|^2
    double q = 0;
    Vector4c zy = Vector4c::Zero();
    for (int i = 0; i < 3; ++i) {
      q += sc.rho_a * y[i].squaredNorm();
      zy += z[i] * y[i];
    }
    q += sc.rho_b * zy.squaredNorm();
    const double cz = std::sqrt(1.0 + z.squaredNorm());
    const double wgt = 1.0 / xi(cz);
    acc += wgt * wgt * q;
  }
  const double dz = g.dz();
  return std::sqrt(acc * dz * dz * dz);
}

WeightedDiagnostic weighted_diagnostic(const ProbeConfig& cfg,
                                       const WeightFunction& xi) {
  WeightedDiagnostic res;
  const GridSpec& g = cfg.evo.grid;
  const AnalyticAmplitude amp = gaussian_packet(cfg.packet);
  TransformOptions opts = cfg.free_opts;
  opts.eval_radius = std::min(free_state_radius(amp, 12.0, 0.0, g), g.half());
  SpinorGridField psi = free_evolve_exact(amp, 0.0, g, opts);
  scale_field(psi, 1.0 / grid_norm(psi));

  EvolutionConfig fwd = cfg.evo;
  fwd.tau_start = 0.0;
  fwd.tau_end = cfg.tau_samples.back();
  std::vector<double> snaps = cfg.tau_samples;
  snaps.insert(snaps.begin(), 0.0);
  const EvolveResult run = evolve(psi, fwd, snaps);

  for (size_t k = 0; k < run.snapshots.size(); ++k) {
    const double tk = run.snapshot_taus[k];
    const PotentialSlice W = slice_for(cfg, run.snapshots[k]);
    const double v =
        weighted_norm(run.snapshots[k], xi, &W, cfg.evo.stencil_order);
    res.taus.push_back(tk);
    res.values.push_back(v);
    const double ct = std::sqrt(tk * tk + 1.0);
    res.companion.push_back(v * xi(ct));
  }
  // band: 2x median over tau in [2,6]
  std::vector<double> band;
  for (size_t k = 0; k < res.taus.size(); ++k)
    if (res.taus[k] >= 2.0 && res.taus[k] <= 6.0)
      band.push_back(res.companion[k]);
  if (!band.empty()) {
    std::sort(band.begin(), band.end());
    res.band_median = band[band.size() / 2];
    double mx = 0;
    for (size_t k = 0; k < res.taus.size(); ++k)
      if (res.taus[k] >= 2.0) mx = std::max(mx, res.companion[k]);
    res.companion_bounded = mx <= 2.0 * res.band_median;
  }
  return res;
}

}  // namespace dirfol
