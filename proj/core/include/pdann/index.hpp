#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pdann/geometry.hpp"
#include "pdann/keys.hpp"

namespace pdann {

/// Position of a diagram in the indexed collection, assigned by input order.
using DiagramId = std::uint32_t;

/// One key of a level together with the sorted distinct ids of the diagrams
/// having that key among their snap-roundings.
struct Bucket {
  Key key;
  std::vector<DiagramId> ids;

  std::size_t distinct_count() const { return ids.size(); }
};

/// All buckets of one resolution level, sorted by key for binary search.
struct LevelIndex {
  int level = 0;
  double spacing = 0.0;
  std::vector<Bucket> buckets;

  const Bucket* lookup(const Key& key) const;
};

/// Build parameters recorded with an index. min_distance is empty when the
/// level count was supplied explicitly and the pairwise pass was skipped.
struct IndexParams {
  double half_extent = 0.0;            // M: coordinate bound
  std::uint32_t max_points = 0;        // m: points-per-diagram bound
  double separation_factor = 2.0;      // c: level-count margin, > 3/2
  std::optional<double> min_distance;  // minimum pairwise bottleneck distance
  int max_level = 0;                   // deepest level (level count - 1)
};

struct BuildOptions {
  double half_extent = 0.0;
  std::uint32_t max_points = 0;
  double separation_factor = 2.0;
  /// Overrides the computed level count; required when the collection
  /// contains duplicate diagrams.
  std::optional<int> max_level;
  /// Skips the quadratic pairwise-distance pass when already known.
  std::optional<double> min_distance;
  /// Estimated bytes of key material allowed per build, checked per level
  /// before materialization.
  std::uint64_t memory_budget = std::uint64_t{2} << 30;
  /// Per-diagram point cap for key enumeration (it grows as 5^points).
  std::size_t enumeration_cap = 12;
};

/// Smallest level count making diagrams at bottleneck distance min_distance
/// stop colliding with the given margin: the smallest tau with
/// separation_factor * spacing(tau) <= min_distance, spacing(tau) =
/// 2 * half_extent / 2^tau. Zero when even the root level separates.
int compute_max_level(double half_extent, double separation_factor,
                      double min_distance);

enum class SearchStrategy {
  kBinary,       // bisect the level range
  kExponential,  // double from the root, then bisect the last octave
};

struct NNResult {
  DiagramId id = 0;
  int level = 0;         // deepest level where the query collides
  double spacing = 0.0;  // spacing of that level
  double bound = 0.0;    // certified distance bound: 1.5 * spacing
  std::size_t probes = 0;
};

struct KNNResult {
  std::vector<DiagramId> ids;
  int level = 0;
  double spacing = 0.0;
  double bound = 0.0;
  std::size_t probes = 0;
};

struct ExactNNResult {
  DiagramId id = 0;
  double distance = 0.0;
  int collision_level = 0;  // deepest level where the query collides
  int scan_level = 0;       // level whose bucket was scanned exactly
  std::size_t candidates = 0;
  std::size_t probes = 0;
};

struct LevelStats {
  int level = 0;
  double spacing = 0.0;
  std::size_t key_count = 0;
  std::size_t max_distinct = 0;
  std::size_t total_ids = 0;
};

/// Static multi-resolution index over a collection of diagrams.
///
/// Level i holds, for every stored diagram, all its deduplicated snap keys on
/// the lattice with spacing 2 * half_extent / 2^i, including the variants
/// with near-diagonal points deleted. A query is answered by locating the
/// deepest level whose table contains the query's own thresholded key; the
/// deeper the collision, the closer the match, with certified bounds of 6x
/// the true nearest distance (24x for k nearest).
class DiagramIndex {
 public:
  /// Builds an index over the diagrams, ids assigned by input order.
  /// Computes the pairwise minimum distance to size the level count unless
  /// options pin it. Throws DomainError for bound violations, for
  /// separation_factor <= 3/2, and for duplicate diagrams without an
  /// explicit level count; ResourceError when a cap or the memory budget is
  /// exceeded.
  static DiagramIndex build(std::vector<Diagram> diagrams,
                            const BuildOptions& options);

  /// Reassembles an index from stored parts, validating structure; the
  /// deserialization entry point. Throws FormatError on inconsistencies.
  static DiagramIndex assemble(IndexParams params, std::vector<Diagram> diagrams,
                               std::vector<LevelIndex> levels);

  const IndexParams& params() const { return params_; }
  std::size_t size() const { return diagrams_.size(); }
  const Diagram& diagram(DiagramId id) const { return diagrams_[id]; }
  const std::vector<Diagram>& diagrams() const { return diagrams_; }
  const std::vector<LevelIndex>& levels() const { return levels_; }

  /// The smallest-id diagram of the deepest-level bucket colliding with q.
  /// Its bottleneck distance to q is at most bound, and at most 6 times the
  /// distance of q's true nearest neighbor.
  NNResult query_nn(const Diagram& q,
                    SearchStrategy strategy = SearchStrategy::kBinary) const;

  /// The k smallest ids of the deepest-level bucket colliding with q that
  /// still holds k distinct diagrams. Each returned diagram is within 24
  /// times the distance of q's true kth nearest neighbor. k = 1 delegates to
  /// query_nn; k > size() is a DomainError.
  KNNResult query_knn(const Diagram& q, std::size_t k,
                      SearchStrategy strategy = SearchStrategy::kBinary) const;

  /// The true nearest neighbor: finds the deepest colliding level i, then
  /// scans the bucket two levels up (level max(i-2, 0)), which provably
  /// contains the true nearest neighbor, with the exact distance oracle.
  /// Ties break toward the smaller id.
  ExactNNResult query_nn_exact(
      const Diagram& q, SearchStrategy strategy = SearchStrategy::kBinary) const;

  struct CollisionProbe {
    int level = 0;
    const Bucket* bucket = nullptr;
    std::size_t probes = 0;
  };

  /// The deepest level whose bucket for q's thresholded key holds at least
  /// min_distinct diagrams, with the bucket and the number of level lookups
  /// performed. Level 0 always qualifies for min_distinct <= size(): every
  /// stored point is deletable at the root spacing, so the empty key holds
  /// every id. Both strategies return identical levels; binary probes at
  /// most ceil(log2(levels)) + 1.
  CollisionProbe find_deepest_collision(const Diagram& q, std::size_t min_distinct,
                                        SearchStrategy strategy) const;

  std::vector<LevelStats> stats() const;

 private:
  DiagramIndex() = default;

  const Bucket* probe_level(const Diagram& q, int level) const;
  void validate_query(const Diagram& q) const;

  IndexParams params_;
  std::vector<Diagram> diagrams_;
  std::vector<LevelIndex> levels_;
};

}  // namespace pdann
