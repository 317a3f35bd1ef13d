/* Uniform Cartesian z-grid and the bispinor field sampled on it.
 * Component planes are stored contiguously (component-major) so stencil
 * sweeps vectorize. Reductions run in a fixed serial order so results are
 * independent of thread count.
 */
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "dirfol/spinor_algebra.hpp"

namespace dirfol {

struct GridSpec {
  int n = 48;        // nodes per axis (inclusive, symmetric about 0)
  double box = 24.0; // full box width; half-extent = box/2

  double half() const { return 0.5 * box; }
  double dz() const { return box / (n - 1); }
  double coord(int i) const { return -half() + i * dz(); }
  std::int64_t size() const { return std::int64_t(n) * n * n; }
  std::int64_t index(int i, int j, int k) const {
    return (std::int64_t(i) * n + j) * n + k;
  }
  Vector3d node(std::int64_t idx) const {
    const int k = int(idx % n);
    const int j = int((idx / n) % n);
    const int i = int(idx / (std::int64_t(n) * n));
    return Vector3d(coord(i), coord(j), coord(k));
  }
  bool operator==(const GridSpec& o) const { return n == o.n && box == o.box; }
};

class SpinorGridField {
 public:
  SpinorGridField() = default;
  SpinorGridField(const GridSpec& g, double tau)
      : grid(g), tau(tau), data_(4 * g.size(), complexd(0, 0)) {}

  GridSpec grid;
  double tau = 0;

  complexd& at(int c, std::int64_t idx) { return data_[c * grid.size() + idx]; }
  const complexd& at(int c, std::int64_t idx) const {
    return data_[c * grid.size() + idx];
  }
  complexd* plane(int c) { return data_.data() + c * grid.size(); }
  const complexd* plane(int c) const { return data_.data() + c * grid.size(); }

  Vector4c spinor(std::int64_t idx) const {
    Vector4c v;
    for (int c = 0; c < 4; ++c) v[c] = at(c, idx);
    return v;
  }
  void set_spinor(std::int64_t idx, const Vector4c& v) {
    for (int c = 0; c < 4; ++c) at(c, idx) = v[c];
  }

  std::vector<complexd>& raw() { return data_; }
  const std::vector<complexd>& raw() const { return data_; }

 private:
  std::vector<complexd> data_;
};

/// Deterministic (serial, fixed-order) reductions.
double grid_norm2(const SpinorGridField& f);                      // dz^3 sum |chi|^2
double grid_norm(const SpinorGridField& f);
complexd grid_inner(const SpinorGridField& a, const SpinorGridField& b);
double grid_distance(const SpinorGridField& a, const SpinorGridField& b);

/// Mass (dz^3 sum |chi|^2) at radius |z| > r.
double mass_outside(const SpinorGridField& f, double r);
/// Largest |component| on the outermost node shell.
double boundary_max(const SpinorGridField& f);
/// Smallest radius containing all nodes with |chi| > eps * max |chi|.
double support_radius(const SpinorGridField& f, double eps_rel = 1e-14);

/// Smooth radial cosine taper: 1 for |z| <= r0, 0 for |z| >= r1.
double mask_value(double r, double r0, double r1);
void apply_radial_mask(SpinorGridField& f, double r0, double r1);

}  // namespace dirfol
