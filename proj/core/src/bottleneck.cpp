#include "pdann/bottleneck.hpp"

#include <algorithm>
#include <vector>

#include "pdann/errors.hpp"

namespace pdann {

AugmentedInstance make_augmented_instance(const Diagram& a, const Diagram& b) {
  AugmentedInstance inst;
  inst.left_real = a.size();
  inst.right_real = b.size();
  inst.left.reserve(a.size() + b.size());
  inst.right.reserve(a.size() + b.size());
  inst.left = a.points;
  for (const Point& q : b.points) inst.left.push_back(project_to_diagonal(q));
  inst.right = b.points;
  for (const Point& p : a.points) inst.right.push_back(project_to_diagonal(p));
  return inst;
}

double edge_cost(const AugmentedInstance& inst, std::size_t i, std::size_t j) {
  if (inst.left_is_projection(i) && inst.right_is_projection(j)) return 0.0;
  return linf_dist(inst.left[i], inst.right[j]);
}

namespace {

// Augmenting-path step of Kuhn's maximum matching. right_match[j] is the left
// vertex matched to j, or -1.
bool try_augment(const AugmentedInstance& inst, double r, std::size_t i,
                 std::vector<char>& visited, std::vector<int>& right_match) {
  for (std::size_t j = 0; j < inst.size(); ++j) {
    if (visited[j] || edge_cost(inst, i, j) > r) continue;
    visited[j] = 1;
    if (right_match[j] < 0 ||
        try_augment(inst, r, static_cast<std::size_t>(right_match[j]), visited,
                    right_match)) {
      right_match[j] = static_cast<int>(i);
      return true;
    }
  }
  return false;
}

}  // namespace

bool feasible(const AugmentedInstance& inst, double r) {
  std::size_t n = inst.size();
  std::vector<int> right_match(n, -1);
  std::vector<char> visited(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(visited.begin(), visited.end(), 0);
    if (!try_augment(inst, r, i, visited, right_match)) return false;
  }
  return true;
}

double bottleneck_distance(const Diagram& a, const Diagram& b) {
  AugmentedInstance inst = make_augmented_instance(a, b);
  std::size_t n = inst.size();
  if (n == 0) return 0.0;

  std::vector<double> costs;
  costs.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) costs.push_back(edge_cost(inst, i, j));
  }
  std::sort(costs.begin(), costs.end());
  costs.erase(std::unique(costs.begin(), costs.end()), costs.end());

  // Smallest candidate cost admitting a perfect matching. The full bipartite
  // graph is always feasible at the largest cost, so the search is total.
  std::size_t lo = 0, hi = costs.size() - 1;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(inst, costs[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return costs[lo];
}

ClosestPair min_pairwise_distance(std::span<const Diagram> diagrams) {
  if (diagrams.size() < 2) {
    throw DomainError("minimum pairwise distance needs at least two diagrams");
  }
  ClosestPair best;
  bool have = false;
  for (std::size_t i = 0; i + 1 < diagrams.size(); ++i) {
    for (std::size_t j = i + 1; j < diagrams.size(); ++j) {
      double d = bottleneck_distance(diagrams[i], diagrams[j]);
      if (!have || d < best.distance) {
        best = {d, i, j};
        have = true;
      }
    }
  }
  return best;
}

}  // namespace pdann
