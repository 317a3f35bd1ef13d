#include "dirfol/free_dirac.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dirfol/foliation_geometry.hpp"

namespace dirfol {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

/// Flat SoA node list for the direct oscillatory sums. Stores, per node,
/// sab = (w/v0)(gamma.v) f  and  dba = -(w/v0) f; the integrand then reads
/// cos(theta) sab + i sin(theta) dba with theta = x.v.
struct NodeBatch {
  std::vector<double> vx, vy, vz, v0;
  std::vector<double> sr[4], si[4], dr[4], di[4];
  size_t size() const { return vx.size(); }
  void push(const Vector3d& vv, double v0v, const Vector4c& sab,
            const Vector4c& dba) {
    vx.push_back(vv[0]);
    vy.push_back(vv[1]);
    vz.push_back(vv[2]);
    v0.push_back(v0v);
    for (int c = 0; c < 4; ++c) {
      sr[c].push_back(sab[c].real());
      si[c].push_back(sab[c].imag());
      dr[c].push_back(dba[c].real());
      di[c].push_back(dba[c].imag());
    }
  }
};

void make_node_terms(const Vector3d& vv, double w, const Vector4c& f,
                     Vector4c& sab, Vector4c& dba) {
  const double v0 = std::sqrt(1.0 + vv.squaredNorm());
  const Vector4d v4(v0, vv[0], vv[1], vv[2]);
  const double q = w / v0;
  sab = q * (gamma_dot(v4) * f);
  dba = -q * f;
}

/// Accumulates presum(z) += sum_k cos(theta) sab + i sin(theta) dba over the
/// batch, for the z-nodes listed in eval_idx. x(tau,z) = (tau<z>, <tau> z).
/// Tiled over z and chunked over v so the v-arrays stay cache-hot and the
/// trig evaluates through the vector math library.
void accumulate_batch(const NodeBatch& nb, double tau,
                      const std::vector<std::int64_t>& eval_idx,
                      SpinorGridField& out, bool parallel) {
  const GridSpec& g = out.grid;
  const double ctau = std::sqrt(tau * tau + 1.0);
  const std::int64_t M = (std::int64_t)eval_idx.size();
  const size_t K = nb.size();
  const std::int64_t plane_stride = g.size();
  complexd* base = out.raw().data();

  constexpr int TILE = 24;
  constexpr size_t CHUNK = 2048;
  const std::int64_t ntiles = (M + TILE - 1) / TILE;

#pragma omp parallel if (parallel)
  {
    alignas(64) double th[CHUNK], cs[CHUNK], sn[CHUNK];
    alignas(64) double xs0[TILE], xs1[TILE], xs2[TILE], xs3[TILE];
    alignas(64) double acc[TILE][8];

#pragma omp for schedule(dynamic)
    for (std::int64_t t = 0; t < ntiles; ++t) {
      const std::int64_t lo = t * TILE;
      const int nt = int(std::min<std::int64_t>(TILE, M - lo));
      for (int m = 0; m < nt; ++m) {
        const Vector3d zn = g.node(eval_idx[lo + m]);
        const double cz = std::sqrt(1.0 + zn.squaredNorm());
        xs0[m] = tau * cz;
        xs1[m] = ctau * zn[0];
        xs2[m] = ctau * zn[1];
        xs3[m] = ctau * zn[2];
        for (int c = 0; c < 8; ++c) acc[m][c] = 0.0;
      }
      for (size_t k0 = 0; k0 < K; k0 += CHUNK) {
        const size_t kk = std::min(CHUNK, K - k0);
        const double* __restrict vx = nb.vx.data() + k0;
        const double* __restrict vy = nb.vy.data() + k0;
        const double* __restrict vz = nb.vz.data() + k0;
        const double* __restrict v0 = nb.v0.data() + k0;
        for (int m = 0; m < nt; ++m) {
          const double x0 = xs0[m], x1 = xs1[m], x2 = xs2[m], x3 = xs3[m];
          for (size_t k = 0; k < kk; ++k)
            th[k] = x0 * v0[k] - x1 * vx[k] - x2 * vy[k] - x3 * vz[k];
          for (size_t k = 0; k < kk; ++k) cs[k] = std::cos(th[k]);
          for (size_t k = 0; k < kk; ++k) sn[k] = std::sin(th[k]);
          double a0 = 0, a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0, a6 = 0,
                 a7 = 0;
          for (int c = 0; c < 4; ++c) {
            const double* __restrict sr = nb.sr[c].data() + k0;
            const double* __restrict si = nb.si[c].data() + k0;
            const double* __restrict dr = nb.dr[c].data() + k0;
            const double* __restrict di = nb.di[c].data() + k0;
            double are = 0, aim = 0;
            for (size_t k = 0; k < kk; ++k) {
              are += cs[k] * sr[k] - sn[k] * di[k];
              aim += cs[k] * si[k] + sn[k] * dr[k];
            }
            switch (c) {
              case 0: a0 = are; a1 = aim; break;
              case 1: a2 = are; a3 = aim; break;
              case 2: a4 = are; a5 = aim; break;
              default: a6 = are; a7 = aim; break;
            }
          }
          acc[m][0] += a0; acc[m][1] += a1; acc[m][2] += a2; acc[m][3] += a3;
          acc[m][4] += a4; acc[m][5] += a5; acc[m][6] += a6; acc[m][7] += a7;
        }
      }
      for (int m = 0; m < nt; ++m) {
        const std::int64_t idx = eval_idx[lo + m];
        for (int c = 0; c < 4; ++c)
          base[c * plane_stride + idx] += complexd(acc[m][2 * c], acc[m][2 * c + 1]);
      }
    }
  }
}

/// Multiplies each evaluated node by the slice prefactor
/// (<tau>/2pi)^{3/2} (tz/(<tau><z>))^{1/2} K(tau,z)^{-1}.
void apply_prefactor(double tau, const std::vector<std::int64_t>& eval_idx,
                     SpinorGridField& out) {
  const double ctau = std::sqrt(tau * tau + 1.0);
  const double c3 = std::pow(ctau / kTwoPi, 1.5);
  for (std::int64_t idx : eval_idx) {
    const Vector3d zn = out.grid.node(idx);
    const double cz = std::sqrt(1.0 + zn.squaredNorm());
    const double tz = std::sqrt(tau * tau + zn.squaredNorm() + 1.0);
    const double pref = c3 * std::sqrt(tz / (ctau * cz));
    const Matrix4c kinv = k_matrix_inverse(tau, zn);
    out.set_spinor(idx, pref * (kinv * out.spinor(idx)));
  }
}

std::vector<std::int64_t> eval_indices(const GridSpec& g, double radius) {
  std::vector<std::int64_t> idx;
  const double r2 = radius * radius;
  for (std::int64_t i = 0; i < g.size(); ++i)
    if (g.node(i).squaredNorm() <= r2) idx.push_back(i);
  return idx;
}

/// Three-stage separable evaluation of S(z) = sum_v exp(i dir z.v) h(v),
/// h given per component on the v-grid, output on the z-grid.
void separable_sum(int dir, const VGridSpec& vs,
                   const std::vector<Vector4c>& h, const GridSpec& gs,
                   SpinorGridField& out, double scale) {
  using Eigen::MatrixXcd;
  const int m = vs.m, n = gs.n;
  MatrixXcd phase(n, m);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < m; ++b)
      phase(a, b) = std::polar(1.0, dir * gs.coord(a) * vs.coord(b));

  for (int comp = 0; comp < 4; ++comp) {
    // H[v1][v2*m+v3]
    MatrixXcd H(m, m * m);
    for (std::int64_t idx = 0; idx < vs.size(); ++idx) {
      const int k = int(idx % m), j = int((idx / m) % m), i = int(idx / (m * m));
      H(i, j * m + k) = h[idx][comp];
    }
    MatrixXcd T1 = phase * H;  // (n, m*m) indexed [z1][v2*m+v3]
    // reorder to (m, m*n): [v2][v3*n+z1]
    MatrixXcd T1r(m, m * n);
    for (int z1 = 0; z1 < n; ++z1)
      for (int v2 = 0; v2 < m; ++v2)
        for (int v3 = 0; v3 < m; ++v3) T1r(v2, v3 * n + z1) = T1(z1, v2 * m + v3);
    MatrixXcd T2 = phase * T1r;  // (n, m*n): [z2][v3*n+z1]
    MatrixXcd T2r(m, n * n);
    for (int z2 = 0; z2 < n; ++z2)
      for (int v3 = 0; v3 < m; ++v3)
        for (int z1 = 0; z1 < n; ++z1) T2r(v3, z1 * n + z2) = T2(z2, v3 * n + z1);
    MatrixXcd T3 = phase * T2r;  // (n, n*n): [z3][z1*n+z2]
    complexd* plane = out.plane(comp);
    for (int z1 = 0; z1 < n; ++z1)
      for (int z2 = 0; z2 < n; ++z2)
        for (int z3 = 0; z3 < n; ++z3)
          plane[gs.index(z1, z2, z3)] += scale * T3(z3, z1 * n + z2);
  }
}

}  // namespace

Vector4c synthesize(const HyperboloidAmplitude& f, const Vector4d& x) {
  Vector4c acc = Vector4c::Zero();
  const std::int64_t N = f.spec.size();
  for (std::int64_t idx = 0; idx < N; ++idx) {
    const Vector3d vv = f.vnode(idx);
    const double v0 = std::sqrt(1.0 + vv.squaredNorm());
    const Vector4d v4(v0, vv[0], vv[1], vv[2]);
    const double theta = minkowski_dot(x, v4);
    const double q = f.weight(idx) / v0;
    const Vector4c gf = gamma_dot(v4) * f.values[idx];
    // e^{-i theta} P+ f - e^{i theta} P- f = cos(theta) gf - i sin(theta) f
    acc += q * (std::cos(theta) * gf -
                complexd(0, 1) * std::sin(theta) * f.values[idx]);
  }
  return std::pow(kTwoPi, -1.5) * acc;
}

SpinorGridField synthesize_slice(const HyperboloidAmplitude& f,
                                 const GridSpec& grid) {
  SpinorGridField out(grid, 0.0);
  const std::int64_t N = f.spec.size();
  std::vector<Vector4c> hplus(N), hminus(N);
  for (std::int64_t idx = 0; idx < N; ++idx) {
    const Vector3d vv = f.vnode(idx);
    const double v0 = std::sqrt(1.0 + vv.squaredNorm());
    const Vector4d v4(v0, vv[0], vv[1], vv[2]);
    const double q = f.weight(idx) / v0;
    const Vector4c gf = gamma_dot(v4) * f.values[idx];
    hplus[idx] = q * 0.5 * (f.values[idx] + gf);   // (w/v0) P+ f
    hminus[idx] = q * 0.5 * (f.values[idx] - gf);  // (w/v0) P- f
  }
  const double scale = std::pow(kTwoPi, -1.5);
  separable_sum(+1, f.spec, hplus, grid, out, scale);
  separable_sum(-1, f.spec, hminus, grid, out, -scale);
  return out;
}

AnalyzeResult analyze(const SpinorGridField& chi0, const VGridSpec& spec,
                      double warn_threshold) {
  AnalyzeResult res;
  res.boundary_peak = boundary_max(chi0);
  double peak = 0.0;
  for (const complexd& v : chi0.raw()) peak = std::max(peak, std::abs(v));
  res.boundary_warning = peak > 0 && res.boundary_peak > warn_threshold * peak;

  const GridSpec& g = chi0.grid;
  const double dz3 = std::pow(g.dz(), 3);
  // G(u) = dz^3 sum_z e^{-i u.z} (gamma^0 chi)(z): reuse the separable kernel
  // with the roles of the grids swapped.
  std::vector<Vector4c> h(g.size());
  for (std::int64_t idx = 0; idx < g.size(); ++idx)
    h[idx] = beta() * chi0.spinor(idx);

  // pack the z-grid as the "v grid" of the helper and the v-grid as output
  VGridSpec zs;
  zs.vmax = g.half();
  zs.m = g.n;
  GridSpec vg;
  vg.n = spec.m;
  vg.box = 2.0 * spec.vmax;
  SpinorGridField G(vg, 0.0);
  separable_sum(-1, zs, h, vg, G, dz3);

  res.amplitude.spec = spec;
  res.amplitude.values.resize(spec.size());
  const double scale = std::pow(kTwoPi, -1.5);
  const int m = spec.m;
  for (std::int64_t idx = 0; idx < spec.size(); ++idx) {
    const int k = int(idx % m), j = int((idx / m) % m), i = int(idx / (m * m));
    const std::int64_t mirror =
        (std::int64_t(m - 1 - i) * m + (m - 1 - j)) * m + (m - 1 - k);
    const Vector3d vv = res.amplitude.vnode(idx);
    const double v0 = std::sqrt(1.0 + vv.squaredNorm());
    const Vector4d v4(v0, vv[0], vv[1], vv[2]);
    const Vector4c gplus = G.spinor(idx);
    const Vector4c gminus = G.spinor(mirror);
    const Matrix4c gv = gamma_dot(v4);
    res.amplitude.values[idx] =
        scale * 0.5 * ((gplus + gminus) + gv * (gplus - gminus));
  }
  return res;
}

SpinorGridField free_evolve_sampled(const HyperboloidAmplitude& f, double tau,
                                    const GridSpec& grid,
                                    const TransformOptions& opts) {
  SpinorGridField out(grid, tau);
  // peak integrand for pruning
  double peak = 0.0;
  for (const auto& v : f.values) peak = std::max(peak, v.cwiseAbs().maxCoeff());
  const double cut = opts.prune_rel * peak;

  NodeBatch nb;
  const std::int64_t N = f.spec.size();
  for (std::int64_t idx = 0; idx < N; ++idx) {
    if (f.values[idx].cwiseAbs().maxCoeff() <= cut) continue;
    Vector4c sab, dba;
    const Vector3d vv = f.vnode(idx);
    make_node_terms(vv, f.weight(idx), f.values[idx], sab, dba);
    nb.push(vv, std::sqrt(1.0 + vv.squaredNorm()), sab, dba);
  }
  const auto idxs = eval_indices(grid, opts.eval_radius);
  accumulate_batch(nb, tau, idxs, out, opts.parallel);
  apply_prefactor(tau, idxs, out);
  return out;
}

VGridSpec adaptive_vgrid(const AnalyticAmplitude& f, double tau,
                         double eval_radius, const GridSpec& grid,
                         const TransformOptions& opts) {
  const double R =
      std::min(eval_radius, std::sqrt(3.0) * grid.half() + grid.dz());
  const double cR = std::sqrt(1.0 + R * R);
  const double ctau = std::sqrt(tau * tau + 1.0);
  const double s = f.center.norm() + f.radius;
  const double u_sup = s / std::sqrt(1.0 + s * s);
  const double freq = std::abs(tau) * cR * u_sup + ctau * R;
  const double margin = 10.0 / std::max(f.width, 1e-3);
  const double dv = kTwoPi / (opts.safety * (freq + margin));
  VGridSpec vs;
  vs.vmax = f.center.cwiseAbs().maxCoeff() + f.radius;
  int m = int(std::ceil(2.0 * vs.vmax / dv)) + 1;
  m = std::clamp(m, opts.min_axis_nodes, opts.max_axis_nodes);
  if (m % 2 == 0) ++m;  // keep a center node
  vs.m = m;
  return vs;
}

SpinorGridField free_evolve_exact(const AnalyticAmplitude& f, double tau,
                                  const GridSpec& grid,
                                  const TransformOptions& opts) {
  SpinorGridField out(grid, tau);
  const VGridSpec vs = adaptive_vgrid(f, tau, opts.eval_radius, grid, opts);
  const auto idxs = eval_indices(grid, opts.eval_radius);

  const double rad2 = f.radius * f.radius;
  const size_t chunk_cap = 1 << 19;
  NodeBatch nb;
  for (int i = 0; i < vs.m; ++i)
    for (int j = 0; j < vs.m; ++j)
      for (int k = 0; k < vs.m; ++k) {
        const Vector3d vv(vs.coord(i), vs.coord(j), vs.coord(k));
        if ((vv - f.center).squaredNorm() > rad2) continue;
        const Vector4c val = f.eval(vv);
        if (val.cwiseAbs().maxCoeff() == 0.0) continue;
        const double w =
            vs.axis_weight(i) * vs.axis_weight(j) * vs.axis_weight(k);
        Vector4c sab, dba;
        make_node_terms(vv, w, val, sab, dba);
        nb.push(vv, std::sqrt(1.0 + vv.squaredNorm()), sab, dba);
        if (nb.size() >= chunk_cap) {
          accumulate_batch(nb, tau, idxs, out, opts.parallel);
          nb = NodeBatch();
        }
      }
  if (nb.size() > 0) accumulate_batch(nb, tau, idxs, out, opts.parallel);
  apply_prefactor(tau, idxs, out);
  return out;
}

HyperboloidAmplitude analyze_at_tau(const SpinorGridField& chi,
                                    const VGridSpec& spec,
                                    double support_radius, bool parallel,
                                    const Vector3d& out_center,
                                    double out_radius) {
  const GridSpec& g = chi.grid;
  const double tau = chi.tau;
  const double ctau = std::sqrt(tau * tau + 1.0);
  const double dz3 = std::pow(g.dz(), 3);
  const double scale = std::pow(ctau / kTwoPi, 1.5) * dz3;

  // phi(z) = gamma^0 pref(z)^+ chi(z), flattened SoA over the support
  const auto idxs = eval_indices(g, support_radius);
  const size_t NZ = idxs.size();
  std::vector<double> a0(NZ), a1(NZ), a2(NZ), a3(NZ);
  std::vector<double> pr[4], pi[4];
  for (int c = 0; c < 4; ++c) {
    pr[c].resize(NZ);
    pi[c].resize(NZ);
  }
  for (size_t m = 0; m < NZ; ++m) {
    const Vector3d zn = g.node(idxs[m]);
    const double cz = std::sqrt(1.0 + zn.squaredNorm());
    const double tz = std::sqrt(tau * tau + zn.squaredNorm() + 1.0);
    const double pref = std::sqrt(tz / (ctau * cz));
    const Vector4c phi =
        beta() * (pref * (k_matrix_inverse(tau, zn) * chi.spinor(idxs[m])));
    a0[m] = tau * cz;
    a1[m] = ctau * zn[0];
    a2[m] = ctau * zn[1];
    a3[m] = ctau * zn[2];
    for (int c = 0; c < 4; ++c) {
      pr[c][m] = phi[c].real();
      pi[c][m] = phi[c].imag();
    }
  }

  HyperboloidAmplitude out;
  out.spec = spec;
  out.values.assign(spec.size(), Vector4c::Zero());
  const std::int64_t NV = spec.size();
  constexpr size_t CHUNK = 2048;

#pragma omp parallel if (parallel)
  {
    alignas(64) double th[CHUNK], cs[CHUNK], sn[CHUNK];
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t idx = 0; idx < NV; ++idx) {
      const Vector3d vv = out.vnode(idx);
      if ((vv - out_center).norm() > out_radius) continue;
      const double v0 = std::sqrt(1.0 + vv.squaredNorm());
      double Cre[4] = {0, 0, 0, 0}, Cim[4] = {0, 0, 0, 0};
      double Dre[4] = {0, 0, 0, 0}, Dim[4] = {0, 0, 0, 0};
      for (size_t m0 = 0; m0 < NZ; m0 += CHUNK) {
        const size_t mm = std::min(CHUNK, NZ - m0);
        const double* __restrict b0 = a0.data() + m0;
        const double* __restrict b1 = a1.data() + m0;
        const double* __restrict b2 = a2.data() + m0;
        const double* __restrict b3 = a3.data() + m0;
        for (size_t m = 0; m < mm; ++m)
          th[m] = v0 * b0[m] - vv[0] * b1[m] - vv[1] * b2[m] - vv[2] * b3[m];
        for (size_t m = 0; m < mm; ++m) cs[m] = std::cos(th[m]);
        for (size_t m = 0; m < mm; ++m) sn[m] = std::sin(th[m]);
        for (int c = 0; c < 4; ++c) {
          const double* __restrict fr = pr[c].data() + m0;
          const double* __restrict fi = pi[c].data() + m0;
          double cre = 0, cim = 0, dre = 0, dim = 0;
          for (size_t m = 0; m < mm; ++m) {
            cre += cs[m] * fr[m];
            cim += cs[m] * fi[m];
            dre += sn[m] * fr[m];
            dim += sn[m] * fi[m];
          }
          Cre[c] += cre;
          Cim[c] += cim;
          Dre[c] += dre;
          Dim[c] += dim;
        }
      }
      const Vector4d v4(v0, vv[0], vv[1], vv[2]);
      const Matrix4c gv = gamma_dot(v4);
      Vector4c C, D;
      for (int c = 0; c < 4; ++c) {
        C[c] = complexd(Cre[c], Cim[c]);
        D[c] = complexd(Dre[c], Dim[c]);
      }
      const Vector4c S1 = C + complexd(0, 1) * D;  // e^{+i theta} sum
      const Vector4c S2 = C - complexd(0, 1) * D;  // e^{-i theta} sum
      out.values[idx] = scale * 0.5 * ((S1 + S2) + gv * (S1 - S2));
    }
  }
  return out;
}

namespace {
std::int64_t parity_index(const GridSpec& g, std::int64_t idx) {
  const int n = g.n;
  const int k = int(idx % n), j = int((idx / n) % n), i = int(idx / (std::int64_t(n) * n));
  return g.index(n - 1 - i, n - 1 - j, n - 1 - k);
}
}  // namespace

SpinorGridField picture_limit_forward(int sign, const SpinorGridField& fv) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("picture_limit_forward: sign must be +-1");
  SpinorGridField out(fv.grid, 0.0);
  const complexd pre = (sign > 0) ? complexd(0, -1) : complexd(0, 1);
  const Matrix4c phase = exp_minus_i_beta(sign * M_PI / 4.0);
  for (std::int64_t idx = 0; idx < fv.grid.size(); ++idx) {
    const Vector3d zn = fv.grid.node(idx);
    const double cz = std::sqrt(1.0 + zn.squaredNorm());
    const std::int64_t src = (sign > 0) ? idx : parity_index(fv.grid, idx);
    const Matrix4c kinv = k_infinity_inverse(+1, (sign > 0) ? zn : Vector3d(-zn));
    out.set_spinor(idx, pre / std::sqrt(cz) * (phase * (kinv * fv.spinor(src))));
  }
  return out;
}

SpinorGridField picture_limit_adjoint(int sign, const SpinorGridField& phi) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("picture_limit_adjoint: sign must be +-1");
  SpinorGridField out(phi.grid, 0.0);
  const complexd pre = (sign > 0) ? complexd(0, 1) : complexd(0, -1);
  const Matrix4c phase = exp_minus_i_beta(-sign * M_PI / 4.0);
  for (std::int64_t idx = 0; idx < phi.grid.size(); ++idx) {
    const Vector3d zn = phi.grid.node(idx);
    const double cz = std::sqrt(1.0 + zn.squaredNorm());
    const std::int64_t src = (sign > 0) ? idx : parity_index(phi.grid, idx);
    const Matrix4c kk = k_infinity(+1, zn);
    out.set_spinor(idx, pre * std::sqrt(cz) * (kk * (phase * phi.spinor(src))));
  }
  return out;
}

SpinorGridField asymptotic_free(int sign,
                                const std::function<Vector4c(const Vector3d&)>& f,
                                const GridSpec& grid) {
  SpinorGridField samples(grid, 0.0);
  for (std::int64_t idx = 0; idx < grid.size(); ++idx)
    samples.set_spinor(idx, f(grid.node(idx)));
  return picture_limit_forward(sign, samples);
}

SpinorGridField asymptotic_free(int sign, const HyperboloidAmplitude& f,
                                const GridSpec& grid) {
  return asymptotic_free(
      sign, [&f](const Vector3d& v) { return interpolate_amplitude(f, v); },
      grid);
}

SpinorGridField picture_limit_inverse(int sign, const SpinorGridField& phi) {
  const SpinorGridField g = picture_limit_adjoint(sign, phi);
  HyperboloidAmplitude amp;
  amp.spec.vmax = phi.grid.half();
  amp.spec.m = phi.grid.n;
  amp.values.resize(amp.spec.size());
  for (std::int64_t idx = 0; idx < amp.spec.size(); ++idx)
    amp.values[idx] = g.spinor(idx);
  return synthesize_slice(amp, phi.grid);
}

}  // namespace dirfol
