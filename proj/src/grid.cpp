#include "dirfol/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dirfol {

double grid_norm2(const SpinorGridField& f) {
  double acc = 0.0;
  for (const complexd& v : f.raw()) acc += std::norm(v);
  const double dz = f.grid.dz();
  return acc * dz * dz * dz;
}

double grid_norm(const SpinorGridField& f) { return std::sqrt(grid_norm2(f)); }

complexd grid_inner(const SpinorGridField& a, const SpinorGridField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("grid_inner: grid mismatch");
  complexd acc(0, 0);
  const auto& ra = a.raw();
  const auto& rb = b.raw();
  for (size_t i = 0; i < ra.size(); ++i) acc += std::conj(ra[i]) * rb[i];
  const double dz = a.grid.dz();
  return acc * (dz * dz * dz);
}

double grid_distance(const SpinorGridField& a, const SpinorGridField& b) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument("grid_distance: grid mismatch");
  double acc = 0.0;
  const auto& ra = a.raw();
  const auto& rb = b.raw();
  for (size_t i = 0; i < ra.size(); ++i) acc += std::norm(ra[i] - rb[i]);
  const double dz = a.grid.dz();
  return std::sqrt(acc * dz * dz * dz);
}

double mass_outside(const SpinorGridField& f, double r) {
  const std::int64_t N = f.grid.size();
  const double r2 = r * r;
  double acc = 0.0;
  for (std::int64_t idx = 0; idx < N; ++idx) {
    if (f.grid.node(idx).squaredNorm() > r2) {
      for (int c = 0; c < 4; ++c) acc += std::norm(f.at(c, idx));
    }
  }
  const double dz = f.grid.dz();
  return acc * dz * dz * dz;
}

double boundary_max(const SpinorGridField& f) {
  const int n = f.grid.n;
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i != 0 && i != n - 1 && j != 0 && j != n - 1 && k != 0 && k != n - 1)
          continue;
        const std::int64_t idx = f.grid.index(i, j, k);
        for (int c = 0; c < 4; ++c)
          m = std::max(m, std::abs(f.at(c, idx)));
      }
  return m;
}

double support_radius(const SpinorGridField& f, double eps_rel) {
  const std::int64_t N = f.grid.size();
  double peak = 0.0;
  for (const complexd& v : f.raw()) peak = std::max(peak, std::norm(v));
  if (peak == 0.0) return 0.0;
  const double cut = eps_rel * eps_rel * peak;
  double r2max = 0.0;
  for (std::int64_t idx = 0; idx < N; ++idx) {
    double a = 0.0;
    for (int c = 0; c < 4; ++c) a = std::max(a, std::norm(f.at(c, idx)));
    if (a > cut) r2max = std::max(r2max, f.grid.node(idx).squaredNorm());
  }
  return std::sqrt(r2max);
}

double mask_value(double r, double r0, double r1) {
  if (r <= r0) return 1.0;
  if (r >= r1) return 0.0;
  const double t = (r - r0) / (r1 - r0);
  const double c = std::cos(0.5 * M_PI * t);
  return c * c;
}

void apply_radial_mask(SpinorGridField& f, double r0, double r1) {
  const std::int64_t N = f.grid.size();
  for (std::int64_t idx = 0; idx < N; ++idx) {
    const double r = f.grid.node(idx).norm();
    if (r <= r0) continue;
    const double m = mask_value(r, r0, r1);
    for (int c = 0; c < 4; ++c) f.at(c, idx) *= m;
  }
}

}  // namespace dirfol
