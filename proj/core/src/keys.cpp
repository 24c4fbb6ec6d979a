#include "pdann/keys.hpp"

#include <algorithm>
#include <limits>

#include "pdann/errors.hpp"

namespace pdann {

namespace {

Key key_from_cells(std::vector<CellId>& cells) {
  std::sort(cells.begin(), cells.end());
  Key key;
  for (std::size_t i = 0; i < cells.size();) {
    std::size_t j = i;
    while (j < cells.size() && cells[j] == cells[i]) ++j;
    key.entries.push_back({cells[i], static_cast<std::uint32_t>(j - i)});
    i = j;
  }
  return key;
}

struct PointChoices {
  std::vector<CellId> cells;
  bool deletable = false;  // adds one extra choice: drop the point

  std::size_t options() const { return cells.size() + (deletable ? 1 : 0); }
};

std::vector<PointChoices> choice_lists(const Diagram& d, const Lattice& lat,
                                       bool allow_deletion) {
  std::vector<PointChoices> choices;
  choices.reserve(d.size());
  for (const Point& p : d.points) {
    PointChoices pc;
    pc.cells = lat.snap_candidates(p);
    pc.deletable = allow_deletion && diag_distance(p) <= lat.spacing();
    choices.push_back(std::move(pc));
  }
  return choices;
}

std::vector<Key> enumerate_keys(const Diagram& d, const Lattice& lat,
                                bool allow_deletion, std::size_t max_points) {
  if (d.size() > max_points) {
    throw ResourceError("key enumeration over " + std::to_string(d.size()) +
                        " points exceeds the cap of " + std::to_string(max_points));
  }
  std::vector<PointChoices> choices = choice_lists(d, lat, allow_deletion);

  std::vector<Key> keys;
  std::vector<std::size_t> pick(choices.size(), 0);
  std::vector<CellId> cells;
  for (;;) {
    cells.clear();
    for (std::size_t i = 0; i < choices.size(); ++i) {
      // The choice one past the candidate cells is the delete option.
      if (pick[i] < choices[i].cells.size()) cells.push_back(choices[i].cells[pick[i]]);
    }
    keys.push_back(key_from_cells(cells));

    // Advance the odometer; done once it wraps past the last digit.
    std::size_t i = 0;
    for (; i < choices.size(); ++i) {
      if (++pick[i] < choices[i].options()) break;
      pick[i] = 0;
    }
    if (i == choices.size()) break;
  }

  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

}  // namespace

Key key_of(const Diagram& d, const Lattice& lat) {
  std::vector<CellId> cells;
  cells.reserve(d.size());
  for (const Point& p : d.points) cells.push_back(lat.nearest_cell(p));
  return key_from_cells(cells);
}

Diagram threshold_diagram(const Diagram& d, double delta) {
  if (!(delta > 0.0)) {
    throw DomainError("threshold spacing must be positive");
  }
  Diagram out;
  for (const Point& p : d.points) {
    if (diag_distance(p) > delta / 2.0) out.points.push_back(p);
  }
  return out;
}

std::uint64_t snap_assignment_count(const Diagram& d, const Lattice& lat,
                                    bool allow_deletion) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 1;
  for (const Point& p : d.points) {
    std::uint64_t options = lat.snap_candidates(p).size();
    if (allow_deletion && diag_distance(p) <= lat.spacing()) ++options;
    if (options != 0 && total > kMax / options) return kMax;
    total *= options;
  }
  return total;
}

std::vector<Key> enum_snap_keys(const Diagram& d, const Lattice& lat,
                                std::size_t max_points) {
  return enumerate_keys(d, lat, /*allow_deletion=*/false, max_points);
}

std::vector<Key> enum_delsnap_keys(const Diagram& d, const Lattice& lat,
                                   std::size_t max_points) {
  return enumerate_keys(d, lat, /*allow_deletion=*/true, max_points);
}

}  // namespace pdann
