#pragma once

// Torus geometry: points on T^d = [-1/2, 1/2)^d, weighted point sets,
// integer grids, cube partitions and jittered samples.  d is restricted
// to {1, 2, 3}.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "discrelab/rng.hpp"

namespace discrelab {

inline constexpr int kMaxDim = 3;

inline void check_dim(int d) {
  if (d < 1 || d > kMaxDim)
    throw std::invalid_argument("dimension must be 1, 2 or 3");
}

// Canonical wrap to [-1/2, 1/2); ties at 1/2 go to -1/2.
inline double wrap_coord(double t) {
  double w = t - std::floor(t + 0.5);
  if (w >= 0.5) w = -0.5;  // guards rounding at the seam
  return w;
}

struct TorusPoint {
  int dim = 1;
  std::array<double, kMaxDim> x{0.0, 0.0, 0.0};

  TorusPoint() = default;
  TorusPoint(int d, std::array<double, kMaxDim> coords) : dim(d), x(coords) {
    check_dim(d);
    for (int a = 0; a < dim; ++a) x[a] = wrap_coord(x[a]);
    for (int a = dim; a < kMaxDim; ++a) x[a] = 0.0;
  }
  static TorusPoint d1(double a) { return TorusPoint(1, {a, 0, 0}); }
  static TorusPoint d2(double a, double b) { return TorusPoint(2, {a, b, 0}); }
  static TorusPoint d3(double a, double b, double c) {
    return TorusPoint(3, {a, b, c});
  }
  double operator[](int a) const { return x[a]; }
};

// min over integer shifts of the Euclidean distance; in [0, sqrt(d)/2]
inline double wrap_distance(const TorusPoint& p, const TorusPoint& q) {
  if (p.dim != q.dim) throw std::invalid_argument("wrap_distance: dim mismatch");
  double s = 0.0;
  for (int a = 0; a < p.dim; ++a) {
    double delta = wrap_coord(p.x[a] - q.x[a]);
    s += delta * delta;
  }
  return std::sqrt(s);
}

struct WeightedPointSet {
  int dim = 1;
  std::vector<TorusPoint> points;
  std::vector<double> weights;
  bool nonneg = true;

  WeightedPointSet() = default;
  WeightedPointSet(int d, std::vector<TorusPoint> pts, std::vector<double> w)
      : dim(d), points(std::move(pts)), weights(std::move(w)) {
    check_dim(d);
    if (points.empty() || points.size() != weights.size())
      throw std::invalid_argument("point/weight lists must be nonempty and equal");
    for (const auto& p : points)
      if (p.dim != dim) throw std::invalid_argument("point dim mismatch");
    refresh_nonneg();
  }
  std::size_t size() const { return points.size(); }
  void refresh_nonneg() {
    nonneg = true;
    for (double a : weights)
      if (a < 0.0) { nonneg = false; break; }
  }
};

// normalized l2 norm of the weights: (N^-1 sum a_j^2)^(1/2)
inline double weight_norm(const WeightedPointSet& ps) {
  double s = 0.0;
  for (double a : ps.weights) s += a * a;
  return std::sqrt(s / double(ps.size()));
}

// (1/H) Z^d intersected with [-1/2, 1/2)^d, all weights 1
inline WeightedPointSet grid_points(int H, int d) {
  check_dim(d);
  if (H < 1) throw std::invalid_argument("grid_points: H >= 1 required");
  std::size_t N = 1;
  for (int a = 0; a < d; ++a) N *= std::size_t(H);
  std::vector<TorusPoint> pts;
  pts.reserve(N);
  std::array<int, kMaxDim> k{0, 0, 0};
  for (std::size_t j = 0; j < N; ++j) {
    std::array<double, kMaxDim> c{0, 0, 0};
    for (int a = 0; a < d; ++a) c[a] = wrap_coord(double(k[a]) / double(H));
    pts.push_back(TorusPoint(d, c));
    for (int a = 0; a < d; ++a) {
      if (++k[a] < H) break;
      k[a] = 0;
    }
  }
  return WeightedPointSet(d, std::move(pts), std::vector<double>(N, 1.0));
}

struct BallWindow {
  int dim = 1;
  double radius = 0.25;
  TorusPoint center;  // default origin

  BallWindow(int d, double r, TorusPoint c = {})
      : dim(d), radius(r), center(c.dim == d ? c : TorusPoint(d, {0, 0, 0})) {
    check_dim(d);
    if (!(r > 0.0 && r < 0.5))
      throw std::invalid_argument("ball radius must lie in (0, 1/2)");
  }
};

inline double ball_volume(int d, double r) {
  switch (d) {
    case 1: return 2.0 * r;
    case 2: return M_PI * r * r;
    default: return 4.0 / 3.0 * M_PI * r * r * r;
  }
}

// H^d half-open cubes of side 1/H tiling [-1/2, 1/2)^d; cells are indexed
// row-major and materialized on demand.
struct PartitionCells {
  int dim = 1;
  int side_count = 1;

  PartitionCells(int d, int H) : dim(d), side_count(H) {
    check_dim(d);
    if (H < 1) throw std::invalid_argument("cube_partition: H >= 1 required");
  }
  std::size_t cell_count() const {
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= std::size_t(side_count);
    return n;
  }
  double side() const { return 1.0 / double(side_count); }
  std::array<int, kMaxDim> cell_index(std::size_t j) const {
    std::array<int, kMaxDim> idx{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      idx[a] = int(j % std::size_t(side_count));
      j /= std::size_t(side_count);
    }
    return idx;
  }
  TorusPoint lower_corner(std::size_t j) const {
    auto idx = cell_index(j);
    std::array<double, kMaxDim> c{0, 0, 0};
    for (int a = 0; a < dim; ++a)
      c[a] = -0.5 + double(idx[a]) * side();
    return TorusPoint(dim, c);
  }
  TorusPoint center(std::size_t j) const {
    auto idx = cell_index(j);
    std::array<double, kMaxDim> c{0, 0, 0};
    for (int a = 0; a < dim; ++a)
      c[a] = -0.5 + (double(idx[a]) + 0.5) * side();
    return TorusPoint(dim, c);
  }
  bool contains(std::size_t j, const TorusPoint& p) const {
    auto lo = lower_corner(j);
    for (int a = 0; a < dim; ++a) {
      double t = p.x[a] - lo.x[a];
      if (t < 0.0 || t >= side()) return false;
    }
    return true;
  }
  std::size_t find_cell(const TorusPoint& p) const {
    std::size_t j = 0, stride = 1;
    for (int a = 0; a < dim; ++a) {
      int i = int(std::floor((p.x[a] + 0.5) * double(side_count)));
      if (i < 0) i = 0;
      if (i >= side_count) i = side_count - 1;
      j += std::size_t(i) * stride;
      stride *= std::size_t(side_count);
    }
    return j;
  }
};

inline PartitionCells cube_partition(int H, int d) { return PartitionCells(d, H); }

// One uniform point per cell; cell j depends only on (seed, j).
// Weights default to 1 (callers overwrite with f(z_j) for jittered runs).
inline WeightedPointSet sample_jitter(const PartitionCells& cells,
                                      std::uint64_t seed) {
  const std::size_t N = cells.cell_count();
  std::vector<TorusPoint> pts;
  pts.reserve(N);
  for (std::size_t j = 0; j < N; ++j) {
    TorusPoint lo = cells.lower_corner(j);
    std::array<double, kMaxDim> c{0, 0, 0};
    for (int a = 0; a < cells.dim; ++a) {
      double u = uniform01(seed, j, std::uint64_t(a));
      c[a] = lo.x[a] + u * cells.side();
    }
    pts.push_back(TorusPoint(cells.dim, c));
  }
  return WeightedPointSet(cells.dim, std::move(pts),
                          std::vector<double>(N, 1.0));
}

}  // namespace discrelab
