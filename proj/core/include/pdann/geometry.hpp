#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pdann {

/// A point of a persistence diagram, (birth, death). Extended persistence is
/// allowed, so y < x is legal.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// A finite multiset of off-diagonal points. The diagonal itself is implicit
/// and carries infinite multiplicity, so it is never stored.
struct Diagram {
  std::vector<Point> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  friend bool operator==(const Diagram&, const Diagram&) = default;
};

/// L-infinity distance between two points.
double linf_dist(const Point& a, const Point& b);

/// L-infinity distance from p to the diagonal y = x, which is |y - x| / 2.
double diag_distance(const Point& p);

/// Nearest point of the diagonal to p under L-infinity, ((x+y)/2, (x+y)/2).
Point project_to_diagonal(const Point& p);

/// Throws DomainError if any coordinate of d lies outside [-half_extent,
/// half_extent], or ResourceError if d has more than max_points points.
void validate_bounded(const Diagram& d, double half_extent, std::size_t max_points);

/// Identifier of a lattice cell, row-major: iy * side + ix.
using CellId = std::uint32_t;

/// A side x side grid of points centered in [-half_extent, half_extent]^2.
/// With spacing delta = 2 * half_extent / side, the point with axis indices
/// (ix, iy) sits at (-half_extent + (ix + 0.5) * delta, ...). Cells tile the
/// square, so every point of the square is within delta/2 of some lattice
/// point per axis.
class Lattice {
 public:
  /// Largest representable side: side^2 cell ids must fit in 32 bits.
  static constexpr std::uint32_t kMaxSide = 1u << 16;
  static constexpr int kMaxLevel = 16;

  Lattice(double half_extent, std::uint32_t side);

  /// The lattice for resolution level i: side 2^i, spacing 2 * half_extent / 2^i.
  /// Level 0 is the single point at the origin.
  static Lattice for_level(double half_extent, int level);

  double half_extent() const { return half_extent_; }
  std::uint32_t side() const { return side_; }
  double spacing() const { return spacing_; }

  /// Absolute slack used to decide whether a coordinate lies on a cell
  /// boundary: 1e-9 * spacing.
  double grid_tolerance() const { return 1e-9 * spacing_; }

  /// Coordinates of the lattice point with the given cell id.
  Point cell_coords(CellId id) const;

  /// The cell id of the lattice point nearest to p. Voronoi ties (p exactly
  /// on a cell boundary) break toward the smaller index on each axis
  /// independently; points outside the square clamp to the border cells.
  CellId nearest_cell(const Point& p) const;

  /// All lattice points within L-infinity distance spacing of p, sorted by
  /// cell id. Generic points get 2 candidate indices per axis; a coordinate
  /// within tol of a grid line (equidistant from two lattice points) gets 3.
  /// So the result has 4, 6, or 9 cells, fewer near the border where the
  /// index range clips.
  std::vector<CellId> snap_candidates(const Point& p, double tol) const;
  std::vector<CellId> snap_candidates(const Point& p) const;

 private:
  // Axis index of the lattice point nearest to coordinate v, tie toward the
  // smaller index, clamped to [0, side).
  std::uint32_t nearest_axis_index(double v) const;

  // Candidate axis indices within spacing of v, ascending, clamped.
  void axis_candidates(double v, double tol, std::uint32_t out[3], int* count) const;

  double half_extent_;
  std::uint32_t side_;
  double spacing_;
};

}  // namespace pdann
