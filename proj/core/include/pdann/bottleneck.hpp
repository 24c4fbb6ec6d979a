#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pdann/geometry.hpp"

namespace pdann {

/// Bipartite instance for the bottleneck distance between diagrams A and B.
/// left holds A's points followed by the diagonal projections of B's points;
/// right holds B's points followed by the projections of A's points. Both
/// sides have |A| + |B| entries, so a perfect matching always exists.
struct AugmentedInstance {
  std::vector<Point> left;
  std::vector<Point> right;
  std::size_t left_real = 0;   // left[0 .. left_real) are points of A
  std::size_t right_real = 0;  // right[0 .. right_real) are points of B

  std::size_t size() const { return left.size(); }
  bool left_is_projection(std::size_t i) const { return i >= left_real; }
  bool right_is_projection(std::size_t j) const { return j >= right_real; }
};

AugmentedInstance make_augmented_instance(const Diagram& a, const Diagram& b);

/// Cost of matching left[i] with right[j]: zero when both are projections
/// (the diagonal absorbs any number of points for free), the L-infinity
/// distance otherwise.
double edge_cost(const AugmentedInstance& inst, std::size_t i, std::size_t j);

/// Whether a perfect matching exists using only edges of cost <= r.
/// Monotone in r.
bool feasible(const AugmentedInstance& inst, double r);

/// Exact bottleneck distance between two diagrams. The optimum is always one
/// of the pairwise edge costs, so a binary search over the sorted distinct
/// costs, with a matching feasibility test at each step, is exact up to the
/// floating-point evaluation of the costs themselves.
double bottleneck_distance(const Diagram& a, const Diagram& b);

struct ClosestPair {
  double distance = 0.0;
  std::size_t first = 0;
  std::size_t second = 0;
};

/// Minimum bottleneck distance over all unordered pairs, with the achieving
/// pair (first < second; the earliest such pair on ties). Throws DomainError
/// when fewer than two diagrams are given. A zero distance means the list
/// contains duplicates.
ClosestPair min_pairwise_distance(std::span<const Diagram> diagrams);

}  // namespace pdann
