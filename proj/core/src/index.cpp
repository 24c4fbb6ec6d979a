#include "pdann/index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "pdann/bottleneck.hpp"
#include "pdann/errors.hpp"

namespace pdann {

const Bucket* LevelIndex::lookup(const Key& key) const {
  auto it = std::lower_bound(
      buckets.begin(), buckets.end(), key,
      [](const Bucket& b, const Key& k) { return b.key < k; });
  if (it == buckets.end() || it->key != key) return nullptr;
  return &*it;
}

int compute_max_level(double half_extent, double separation_factor,
                      double min_distance) {
  if (!(half_extent > 0.0) || !std::isfinite(half_extent)) {
    throw DomainError("half extent must be positive and finite");
  }
  if (!(separation_factor > 1.5)) {
    throw DomainError("separation factor must exceed 3/2");
  }
  if (!(min_distance > 0.0)) {
    throw DomainError(
        "minimum pairwise distance must be positive; for a collection with "
        "duplicates supply the level count explicitly");
  }
  // Smallest tau with separation_factor * spacing(tau) <= min_distance. The
  // spacing halves per step, so the loop terminates (it underflows to zero
  // in the worst case).
  int tau = 0;
  double spacing = 2.0 * half_extent;
  while (separation_factor * spacing > min_distance) {
    ++tau;
    spacing /= 2.0;
  }
  return tau;
}

namespace {

void validate_build_options(const BuildOptions& opt) {
  if (!(opt.half_extent > 0.0) || !std::isfinite(opt.half_extent)) {
    throw DomainError("half extent must be positive and finite");
  }
  if (!(opt.separation_factor > 1.5) || !std::isfinite(opt.separation_factor)) {
    throw DomainError("separation factor must exceed 3/2");
  }
  if (opt.min_distance && !(*opt.min_distance > 0.0)) {
    throw DomainError("minimum distance override must be positive");
  }
  if (opt.max_level && *opt.max_level < 0) {
    throw DomainError("level count override must be non-negative");
  }
  if (opt.max_points > opt.enumeration_cap) {
    throw ResourceError("point bound " + std::to_string(opt.max_points) +
                        " exceeds the key enumeration cap of " +
                        std::to_string(opt.enumeration_cap) +
                        " (key counts grow as 5^points)");
  }
}

// Bytes of key material one snap assignment costs, conservatively: the key
// entries plus container and id bookkeeping.
std::uint64_t bytes_per_assignment(std::uint32_t max_points) {
  return 8ull * std::max<std::uint32_t>(max_points, 1) + 56ull;
}

}  // namespace

DiagramIndex DiagramIndex::build(std::vector<Diagram> diagrams,
                                 const BuildOptions& opt) {
  if (diagrams.empty()) {
    throw DomainError("cannot build an index over zero diagrams");
  }
  if (diagrams.size() > std::numeric_limits<DiagramId>::max()) {
    throw ResourceError("collection size exceeds 32-bit diagram ids");
  }
  validate_build_options(opt);
  for (std::size_t i = 0; i < diagrams.size(); ++i) {
    try {
      validate_bounded(diagrams[i], opt.half_extent, opt.max_points);
    } catch (const std::runtime_error& e) {
      throw DomainError("diagram " + std::to_string(i) + ": " + e.what());
    }
  }

  IndexParams params;
  params.half_extent = opt.half_extent;
  params.max_points = opt.max_points;
  params.separation_factor = opt.separation_factor;
  params.min_distance = opt.min_distance;

  if (opt.max_level) {
    params.max_level = *opt.max_level;
  } else {
    if (!params.min_distance && diagrams.size() >= 2) {
      ClosestPair cp = min_pairwise_distance(diagrams);
      if (cp.distance == 0.0) {
        throw DomainError(
            "diagrams " + std::to_string(cp.first) + " and " +
            std::to_string(cp.second) +
            " are identical, so the minimum pairwise distance is zero and no "
            "finite level count separates them; pass an explicit level count "
            "(--tau) to build anyway");
      }
      params.min_distance = cp.distance;
    }
    // A single diagram needs no separation: one level answers every query.
    params.max_level = params.min_distance
                           ? compute_max_level(opt.half_extent, opt.separation_factor,
                                               *params.min_distance)
                           : 0;
  }
  if (params.max_level > Lattice::kMaxLevel) {
    throw ResourceError(
        "level count " + std::to_string(params.max_level + 1) + " exceeds " +
        std::to_string(Lattice::kMaxLevel + 1) +
        " (cell ids are 32-bit, capping the lattice side at 2^16); increase the "
        "minimum distance or pass a smaller explicit level count");
  }

  DiagramIndex index;
  index.params_ = params;
  index.diagrams_ = std::move(diagrams);
  index.levels_.reserve(static_cast<std::size_t>(params.max_level) + 1);

  for (int lvl = 0; lvl <= params.max_level; ++lvl) {
    Lattice lat = Lattice::for_level(params.half_extent, lvl);

    std::uint64_t assignments = 0;
    for (const Diagram& d : index.diagrams_) {
      std::uint64_t a = snap_assignment_count(d, lat, /*allow_deletion=*/true);
      if (assignments > std::numeric_limits<std::uint64_t>::max() - a) {
        assignments = std::numeric_limits<std::uint64_t>::max();
        break;
      }
      assignments += a;
    }
    std::uint64_t per = bytes_per_assignment(params.max_points);
    if (assignments > opt.memory_budget / per) {
      throw ResourceError(
          "level " + std::to_string(lvl) + " needs about " +
          std::to_string(assignments) + " key assignments (" +
          std::to_string(index.diagrams_.size()) + " diagrams, point bound " +
          std::to_string(params.max_points) + "), over the memory budget of " +
          std::to_string(opt.memory_budget) + " bytes");
    }

    std::vector<std::pair<Key, DiagramId>> entries;
    for (std::size_t id = 0; id < index.diagrams_.size(); ++id) {
      std::vector<Key> keys =
          enum_delsnap_keys(index.diagrams_[id], lat, opt.enumeration_cap);
      for (Key& k : keys) {
        entries.emplace_back(std::move(k), static_cast<DiagramId>(id));
      }
    }
    std::sort(entries.begin(), entries.end());

    LevelIndex level;
    level.level = lvl;
    level.spacing = lat.spacing();
    for (std::size_t i = 0; i < entries.size();) {
      std::size_t j = i + 1;
      while (j < entries.size() && entries[j].first == entries[i].first) ++j;
      Bucket bucket;
      bucket.ids.reserve(j - i);
      for (std::size_t k = i; k < j; ++k) bucket.ids.push_back(entries[k].second);
      bucket.key = std::move(entries[i].first);
      level.buckets.push_back(std::move(bucket));
      i = j;
    }
    index.levels_.push_back(std::move(level));
  }
  return index;
}

DiagramIndex DiagramIndex::assemble(IndexParams params, std::vector<Diagram> diagrams,
                                    std::vector<LevelIndex> levels) {
  if (!(params.half_extent > 0.0) || !std::isfinite(params.half_extent)) {
    throw FormatError("invalid half extent");
  }
  if (!(params.separation_factor > 1.5)) {
    throw FormatError("invalid separation factor");
  }
  if (params.min_distance && !(*params.min_distance > 0.0)) {
    throw FormatError("invalid minimum distance");
  }
  if (params.max_level < 0 || params.max_level > Lattice::kMaxLevel) {
    throw FormatError("invalid level count");
  }
  if (diagrams.empty()) {
    throw FormatError("index holds no diagrams");
  }
  if (levels.size() != static_cast<std::size_t>(params.max_level) + 1) {
    throw FormatError("level count does not match the declared deepest level");
  }
  for (const Diagram& d : diagrams) {
    try {
      validate_bounded(d, params.half_extent, params.max_points);
    } catch (const std::runtime_error& e) {
      throw FormatError(std::string("stored diagram out of bounds: ") + e.what());
    }
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    LevelIndex& lvl = levels[i];
    if (lvl.level != static_cast<int>(i)) {
      throw FormatError("levels out of order");
    }
    lvl.spacing = Lattice::for_level(params.half_extent, lvl.level).spacing();
    const Key* prev = nullptr;
    for (const Bucket& b : lvl.buckets) {
      if (prev && !(*prev < b.key)) {
        throw FormatError("bucket keys not strictly increasing");
      }
      prev = &b.key;
      if (b.ids.empty()) {
        throw FormatError("empty bucket");
      }
      for (std::size_t k = 0; k < b.ids.size(); ++k) {
        if (b.ids[k] >= diagrams.size() ||
            (k > 0 && b.ids[k - 1] >= b.ids[k])) {
          throw FormatError("bucket ids not sorted distinct in range");
        }
      }
      std::uint64_t total = 0;
      for (std::size_t k = 0; k < b.key.entries.size(); ++k) {
        const KeyEntry& e = b.key.entries[k];
        if (e.count == 0 || (k > 0 && b.key.entries[k - 1].cell >= e.cell)) {
          throw FormatError("key not in canonical form");
        }
        total += e.count;
      }
      if (total > params.max_points) {
        throw FormatError("key multiplicity exceeds the point bound");
      }
    }
  }
  DiagramIndex index;
  index.params_ = params;
  index.diagrams_ = std::move(diagrams);
  index.levels_ = std::move(levels);
  return index;
}

void DiagramIndex::validate_query(const Diagram& q) const {
  try {
    validate_bounded(q, params_.half_extent, params_.max_points);
  } catch (const std::runtime_error& e) {
    throw DomainError(std::string("query diagram: ") + e.what());
  }
}

const Bucket* DiagramIndex::probe_level(const Diagram& q, int level) const {
  const LevelIndex& lvl = levels_[level];
  Lattice lat = Lattice::for_level(params_.half_extent, level);
  Key key = key_of(threshold_diagram(q, lat.spacing()), lat);
  return lvl.lookup(key);
}

DiagramIndex::CollisionProbe DiagramIndex::find_deepest_collision(
    const Diagram& q, std::size_t min_distinct, SearchStrategy strategy) const {
  validate_query(q);
  if (min_distinct > size()) {
    throw DomainError("requested " + std::to_string(min_distinct) +
                      " distinct diagrams, but the index holds " +
                      std::to_string(size()));
  }

  std::size_t probes = 0;
  auto probe = [&](int level) -> const Bucket* {
    ++probes;
    const Bucket* b = probe_level(q, level);
    return (b != nullptr && b->distinct_count() >= min_distinct) ? b : nullptr;
  };

  // The collision predicate is monotone: a collision at a level implies one
  // at every shallower level, and level 0 always collides (every stored
  // point is deletable at the root spacing, so the empty key holds all ids,
  // and every query thresholds to the empty diagram there).
  int tau = params_.max_level;
  int best_level = -1;
  const Bucket* best = nullptr;

  if (strategy == SearchStrategy::kBinary) {
    int lo = 0, hi = tau;
    while (lo < hi) {
      int mid = lo + (hi - lo + 1) / 2;
      if (const Bucket* b = probe(mid)) {
        lo = mid;
        best = b;
        best_level = mid;
      } else {
        hi = mid - 1;
      }
    }
    if (best_level != lo) {
      best = probe(lo);
      best_level = lo;
    }
  } else {
    best = probe(0);
    best_level = 0;
    if (best != nullptr && tau > 0) {
      int last_true = 0;
      int next = 1;
      while (next <= tau) {
        if (const Bucket* b = probe(next)) {
          last_true = next;
          best = b;
          best_level = next;
          next *= 2;
        } else {
          break;
        }
      }
      int lo = last_true;
      int hi = std::min(next - 1, tau);
      while (lo < hi) {
        int mid = lo + (hi - lo + 1) / 2;
        if (const Bucket* b = probe(mid)) {
          lo = mid;
          best = b;
          best_level = mid;
        } else {
          hi = mid - 1;
        }
      }
    }
  }

  if (best == nullptr) {
    throw std::logic_error("level 0 failed to collide");
  }
  return {best_level, best, probes};
}

NNResult DiagramIndex::query_nn(const Diagram& q, SearchStrategy strategy) const {
  CollisionProbe cp = find_deepest_collision(q, 1, strategy);
  double spacing = levels_[cp.level].spacing;
  return {cp.bucket->ids.front(), cp.level, spacing, 1.5 * spacing, cp.probes};
}

KNNResult DiagramIndex::query_knn(const Diagram& q, std::size_t k,
                                  SearchStrategy strategy) const {
  if (k == 0) {
    throw DomainError("k must be at least 1");
  }
  if (k > size()) {
    throw DomainError("k = " + std::to_string(k) + " exceeds the collection size " +
                      std::to_string(size()));
  }
  if (k == 1) {
    NNResult nn = query_nn(q, strategy);
    return {{nn.id}, nn.level, nn.spacing, nn.bound, nn.probes};
  }
  CollisionProbe cp = find_deepest_collision(q, k, strategy);
  KNNResult out;
  out.ids.assign(cp.bucket->ids.begin(), cp.bucket->ids.begin() + k);
  out.level = cp.level;
  out.spacing = levels_[cp.level].spacing;
  out.bound = 1.5 * out.spacing;
  out.probes = cp.probes;
  return out;
}

ExactNNResult DiagramIndex::query_nn_exact(const Diagram& q,
                                           SearchStrategy strategy) const {
  CollisionProbe cp = find_deepest_collision(q, 1, strategy);
  int scan_level = std::max(cp.level - 2, 0);
  std::size_t probes = cp.probes;
  const Bucket* scan = cp.bucket;
  if (scan_level != cp.level) {
    ++probes;
    scan = probe_level(q, scan_level);
  }
  // A collision at cp.level implies one at every shallower level, and the
  // bucket two levels up provably contains the true nearest neighbor.
  if (scan == nullptr) {
    throw std::logic_error("no collision two levels above the deepest hit");
  }

  ExactNNResult out;
  out.collision_level = cp.level;
  out.scan_level = scan_level;
  out.candidates = scan->ids.size();
  out.probes = probes;
  double best = std::numeric_limits<double>::infinity();
  DiagramId best_id = scan->ids.front();
  for (DiagramId id : scan->ids) {
    double d = bottleneck_distance(q, diagrams_[id]);
    if (d < best) {
      best = d;
      best_id = id;
    }
  }
  out.id = best_id;
  out.distance = best;
  return out;
}

std::vector<LevelStats> DiagramIndex::stats() const {
  std::vector<LevelStats> out;
  out.reserve(levels_.size());
  for (const LevelIndex& lvl : levels_) {
    LevelStats s;
    s.level = lvl.level;
    s.spacing = lvl.spacing;
    s.key_count = lvl.buckets.size();
    for (const Bucket& b : lvl.buckets) {
      s.max_distinct = std::max(s.max_distinct, b.distinct_count());
      s.total_ids += b.ids.size();
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace pdann
