#include "pdann/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "pdann/errors.hpp"
#include "pdann/text.hpp"

namespace pdann {

double linf_dist(const Point& a, const Point& b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

double diag_distance(const Point& p) { return std::abs(p.y - p.x) / 2.0; }

Point project_to_diagonal(const Point& p) {
  double mid = (p.x + p.y) / 2.0;
  return {mid, mid};
}

void validate_bounded(const Diagram& d, double half_extent, std::size_t max_points) {
  if (d.size() > max_points) {
    throw DomainError("diagram has " + std::to_string(d.size()) +
                      " points, bound is " + std::to_string(max_points));
  }
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    const Point& p = d.points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) ||
        std::abs(p.x) > half_extent || std::abs(p.y) > half_extent) {
      throw DomainError("point " + std::to_string(i) + " (" + format_double(p.x) +
                        ", " + format_double(p.y) + ") outside [-" +
                        format_double(half_extent) + ", " + format_double(half_extent) +
                        "]^2");
    }
  }
}

Lattice::Lattice(double half_extent, std::uint32_t side)
    : half_extent_(half_extent), side_(side) {
  if (!(half_extent > 0.0) || !std::isfinite(half_extent)) {
    throw DomainError("lattice half extent must be positive and finite");
  }
  if (side == 0 || side > kMaxSide) {
    throw DomainError("lattice side must be in [1, " + std::to_string(kMaxSide) +
                      "] (cell ids are 32-bit)");
  }
  spacing_ = 2.0 * half_extent / static_cast<double>(side);
}

Lattice Lattice::for_level(double half_extent, int level) {
  if (level < 0 || level > kMaxLevel) {
    throw DomainError("lattice level " + std::to_string(level) + " out of range [0, " +
                      std::to_string(kMaxLevel) + "]");
  }
  return Lattice(half_extent, std::uint32_t{1} << level);
}

Point Lattice::cell_coords(CellId id) const {
  std::uint32_t ix = id % side_;
  std::uint32_t iy = id / side_;
  return {-half_extent_ + (ix + 0.5) * spacing_, -half_extent_ + (iy + 0.5) * spacing_};
}

std::uint32_t Lattice::nearest_axis_index(double v) const {
  // u counts cell widths from the lower edge of the square; cell i covers
  // u in [i, i+1), and u exactly integral is the boundary shared by cells
  // i-1 and i, which breaks toward the smaller index.
  double u = (v + half_extent_) / spacing_;
  double f = std::floor(u);
  std::int64_t idx = static_cast<std::int64_t>(f);
  if (u == f) --idx;
  idx = std::clamp<std::int64_t>(idx, 0, static_cast<std::int64_t>(side_) - 1);
  return static_cast<std::uint32_t>(idx);
}

CellId Lattice::nearest_cell(const Point& p) const {
  std::uint64_t ix = nearest_axis_index(p.x);
  std::uint64_t iy = nearest_axis_index(p.y);
  return static_cast<CellId>(iy * side_ + ix);
}

void Lattice::axis_candidates(double v, double tol, std::uint32_t out[3],
                              int* count) const {
  // w measures in lattice-point units: point i sits at w == i. Indices within
  // one spacing of v are those with |i - w| <= 1; that closed ball holds three
  // indices exactly when w is integral, two otherwise.
  double w = (v + half_extent_) / spacing_ - 0.5;
  double r = std::round(w);
  std::int64_t lo, hi;
  if (std::abs(w - r) * spacing_ <= tol) {
    lo = static_cast<std::int64_t>(r) - 1;
    hi = lo + 2;
  } else {
    lo = static_cast<std::int64_t>(std::floor(w));
    hi = lo + 1;
  }
  *count = 0;
  for (std::int64_t i = lo; i <= hi; ++i) {
    if (i >= 0 && i < static_cast<std::int64_t>(side_)) {
      out[(*count)++] = static_cast<std::uint32_t>(i);
    }
  }
}

std::vector<CellId> Lattice::snap_candidates(const Point& p, double tol) const {
  std::uint32_t xs[3], ys[3];
  int nx = 0, ny = 0;
  axis_candidates(p.x, tol, xs, &nx);
  axis_candidates(p.y, tol, ys, &ny);
  std::vector<CellId> cells;
  cells.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      cells.push_back(static_cast<CellId>(std::uint64_t{ys[j]} * side_ + xs[i]));
    }
  }
  return cells;
}

std::vector<CellId> Lattice::snap_candidates(const Point& p) const {
  return snap_candidates(p, grid_tolerance());
}

}  // namespace pdann
