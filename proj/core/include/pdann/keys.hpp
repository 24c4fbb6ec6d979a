#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "pdann/geometry.hpp"

namespace pdann {

/// One run of a sparse key: a lattice cell and how many diagram points
/// snapped to it.
struct KeyEntry {
  CellId cell = 0;
  std::uint32_t count = 0;

  friend auto operator<=>(const KeyEntry&, const KeyEntry&) = default;
};

/// Canonical sparse key: entries strictly increasing by cell, counts
/// positive. The empty key is the key of the empty diagram. Comparison is
/// lexicographic on the entry sequence, which matches dictionary order on
/// the dense count vectors because cells ascend like vector positions.
struct Key {
  std::vector<KeyEntry> entries;

  bool empty() const { return entries.empty(); }

  friend auto operator<=>(const Key&, const Key&) = default;
};

/// The key of d on lat: the multiset of nearest lattice cells, one per point.
Key key_of(const Diagram& d, const Lattice& lat);

/// Removes the points within delta/2 of the diagonal, boundary included;
/// survivors keep their order. This is the query-side filter matched by the
/// stored-side delete option of enum_delsnap_keys.
Diagram threshold_diagram(const Diagram& d, double delta);

/// Number of snap assignments of d on lat before deduplication: the product
/// over points of the candidate-cell count, plus one per point for the delete
/// option when allow_deletion and the point is within lat.spacing() of the
/// diagonal. Saturates at the maximum uint64 value.
std::uint64_t snap_assignment_count(const Diagram& d, const Lattice& lat,
                                    bool allow_deletion);

/// All distinct keys over assignments of each point of d to one of its snap
/// candidate cells, sorted ascending. Throws ResourceError when d has more
/// than max_points points (the enumeration grows as 4^|d| and worse).
std::vector<Key> enum_snap_keys(const Diagram& d, const Lattice& lat,
                                std::size_t max_points = 12);

/// As enum_snap_keys, but every point within lat.spacing() of the diagonal
/// (boundary included) may additionally be deleted. Superset of the snap
/// keys; grows as 5^|d|.
std::vector<Key> enum_delsnap_keys(const Diagram& d, const Lattice& lat,
                                   std::size_t max_points = 12);

}  // namespace pdann
