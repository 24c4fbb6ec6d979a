#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "pdann/bottleneck.hpp"
#include "pdann/errors.hpp"
#include "pdann/keys.hpp"
#include "support/test_support.hpp"

using namespace pdann;

namespace {

bool contains(const std::vector<Key>& keys, const Key& k) {
  return std::binary_search(keys.begin(), keys.end(), k);
}

}  // namespace

TEST_CASE("key ordering is lexicographic on entries") {
  Key empty;
  Key a{{{0, 1}}};
  Key b{{{3, 1}}};
  Key c{{{3, 2}}};
  Key d{{{2, 5}}};
  CHECK(empty < a);
  CHECK(b < c);
  CHECK(d < b);
  CHECK(a == Key{{{0, 1}}});
}

TEST_CASE("key of a diagram on the 4x4 example lattice") {
  Lattice lat(4.0, 4);
  Diagram two{{{0.5, 2.6}, {0.7, 2.7}}};
  Key k = key_of(two, lat);
  REQUIRE(k.entries.size() == 1);
  CHECK(k.entries[0] == KeyEntry{14, 2});

  CHECK(key_of(Diagram{}, lat).empty());

  Key corner = key_of(Diagram{{{-3, 3}}}, lat);
  REQUIRE(corner.entries.size() == 1);
  CHECK(corner.entries[0] == KeyEntry{12, 1});
}

TEST_CASE("thresholding removes near-diagonal points inclusively") {
  Diagram q{{{0, 3}, {0, 0.5}}};
  Diagram kept = threshold_diagram(q, 2.0);
  REQUIRE(kept.size() == 1);
  CHECK(kept.points[0] == Point{0, 3});

  // Distance exactly delta/2 is removed.
  CHECK(threshold_diagram(Diagram{{{0, 2}}}, 2.0).empty());
  CHECK(threshold_diagram(Diagram{}, 2.0).empty());
  CHECK_THROWS_AS(threshold_diagram(q, 0.0), DomainError);
}

TEST_CASE("snap key enumeration on the example lattice") {
  Lattice lat(4.0, 4);

  Diagram corner{{{-3, 3}}};
  std::vector<Key> snap = enum_snap_keys(corner, lat);
  CHECK(snap.size() == 4);

  CHECK(enum_snap_keys(Diagram{}, lat) == std::vector<Key>{Key{}});
  CHECK(enum_delsnap_keys(Diagram{}, lat) == std::vector<Key>{Key{}});

  // Two points in one interior cell: at most 16 assignments.
  Diagram pair{{{0.5, 2.6}, {0.7, 2.7}}};
  std::vector<Key> keys = enum_snap_keys(pair, lat);
  CHECK(keys.size() <= 16);
  CHECK(contains(keys, key_of(pair, lat)));
}

TEST_CASE("deletion option applies within one spacing of the diagonal") {
  Lattice lat(4.0, 4);

  // Distance exactly delta qualifies for deletion.
  Diagram borderline{{{-2, 2}}};
  std::vector<Key> with_del = enum_delsnap_keys(borderline, lat);
  CHECK(with_del.size() == 5);
  CHECK(contains(with_del, Key{}));

  // Distance above delta: identical to plain snap enumeration.
  Diagram far{{{-3, 3}}};
  CHECK(enum_delsnap_keys(far, lat) == enum_snap_keys(far, lat));
}

TEST_CASE("enumeration cap fails fast") {
  Lattice lat(4.0, 4);
  Diagram big;
  for (int i = 0; i < 13; ++i) big.points.push_back({-3.0 + i * 0.4, 3.0});
  CHECK_THROWS_AS(enum_snap_keys(big, lat), ResourceError);
  CHECK_THROWS_AS(enum_delsnap_keys(big, lat), ResourceError);

  // Raising the cap admits the diagram; copies of one corner point keep the
  // enumeration itself tiny (a single candidate cell each).
  Diagram stacked;
  for (int i = 0; i < 13; ++i) stacked.points.push_back({-3.5, -3.2});
  CHECK(enum_snap_keys(stacked, lat, 13).size() == 1);
  CHECK(enum_delsnap_keys(stacked, lat, 13).size() == 14);
}

TEST_CASE("assignment counts multiply per-point options") {
  Lattice lat(4.0, 4);
  Diagram borderline{{{-2, 2}}};
  CHECK(snap_assignment_count(borderline, lat, false) == 4);
  CHECK(snap_assignment_count(borderline, lat, true) == 5);
  CHECK(snap_assignment_count(Diagram{}, lat, true) == 1);

  // Saturation instead of overflow.
  Diagram big;
  for (int i = 0; i < 60; ++i) big.points.push_back({-2.0, 2.0});
  CHECK(snap_assignment_count(big, lat, true) ==
        std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("key enumeration invariants on random diagrams") {
  auto rng = testutil::make_rng(31);
  for (int t = 0; t < 100; ++t) {
    Lattice lat = Lattice::for_level(10.0, 1 + static_cast<int>(t % 5));
    Diagram d = testutil::random_diagram(rng, 10.0, 0, 4);

    std::vector<Key> snap = enum_snap_keys(d, lat);
    std::vector<Key> delsnap = enum_delsnap_keys(d, lat);

    CHECK(std::is_sorted(snap.begin(), snap.end()));
    CHECK(std::is_sorted(delsnap.begin(), delsnap.end()));
    CHECK(std::includes(delsnap.begin(), delsnap.end(), snap.begin(), snap.end()));
    CHECK(contains(snap, key_of(d, lat)));
    CHECK(contains(delsnap, key_of(d, lat)));

    // Random continuous points sit off grid lines, so options are 4 or 5.
    std::size_t m = d.size();
    CHECK(snap.size() <= static_cast<std::size_t>(std::pow(4.0, double(m)) + 0.5));
    CHECK(delsnap.size() <= static_cast<std::size_t>(std::pow(5.0, double(m)) + 0.5));
  }
}

TEST_CASE("points on lattice points keep full multiplicity") {
  Lattice lat(4.0, 4);
  Diagram d{{{-3, 3}, {-1, 3}, {1, 3}}};
  Key k = key_of(d, lat);
  std::uint32_t total = 0;
  for (const KeyEntry& e : k.entries) total += e.count;
  CHECK(total == 3);
  CHECK(contains(enum_snap_keys(d, lat), k));
}

TEST_CASE("collision at a level bounds the bottleneck distance") {
  // Forward direction of the collision property, small scale.
  auto rng = testutil::make_rng(32);
  int collisions = 0;
  for (int t = 0; t < 150; ++t) {
    Diagram p = testutil::random_diagram(rng, 4.0, 0, 3);
    Diagram q = testutil::random_diagram(rng, 4.0, 0, 3);
    for (int level = 0; level <= 4; ++level) {
      Lattice lat = Lattice::for_level(4.0, level);
      std::vector<Key> stored = enum_delsnap_keys(p, lat);
      Key qk = key_of(threshold_diagram(q, lat.spacing()), lat);
      if (contains(stored, qk)) {
        ++collisions;
        CHECK(bottleneck_distance(p, q) <= 1.5 * lat.spacing() + 1e-9);
      }
    }
  }
  CHECK(collisions > 0);
}

TEST_CASE("close diagrams always collide") {
  // Backward direction: perturb within half a spacing and require a collision.
  auto rng = testutil::make_rng(33);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int t = 0; t < 150; ++t) {
    int level = t % 5;
    Lattice lat = Lattice::for_level(4.0, level);
    double half_spacing = lat.spacing() / 2.0;
    Diagram p = testutil::random_diagram(rng, 4.0, 1, 3);
    Diagram q;
    for (const Point& pt : p.points) {
      double x = std::clamp(pt.x + unit(rng) * half_spacing, -4.0, 4.0);
      double y = std::clamp(pt.y + unit(rng) * half_spacing, -4.0, 4.0);
      q.points.push_back({x, y});
    }
    REQUIRE(bottleneck_distance(p, q) <= half_spacing + 1e-12);
    std::vector<Key> stored = enum_delsnap_keys(p, lat);
    Key qk = key_of(threshold_diagram(q, lat.spacing()), lat);
    CHECK(contains(stored, qk));
  }
}

TEST_CASE("far from the diagonal, deletion never fires and snap keys suffice") {
  auto rng = testutil::make_rng(34);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> birth(-4.0, 0.0);
  for (int t = 0; t < 100; ++t) {
    int level = 2 + t % 3;
    Lattice lat = Lattice::for_level(4.0, level);
    double spacing = lat.spacing();

    // Points with diagonal distance above the spacing even after perturbing.
    Diagram p;
    std::uniform_int_distribution<int> count(1, 3);
    int n = count(rng);
    for (int i = 0; i < n; ++i) {
      double b = birth(rng) * 0.5 - 1.0;
      double gap = 2.0 * spacing + 1.0;
      p.points.push_back({b, std::min(b + gap, 4.0)});
    }
    CHECK(enum_delsnap_keys(p, lat) == enum_snap_keys(p, lat));

    Diagram q;
    for (const Point& pt : p.points) {
      double x = std::clamp(pt.x + unit(rng) * spacing / 2.0, -4.0, 4.0);
      double y = std::clamp(pt.y + unit(rng) * spacing / 2.0, -4.0, 4.0);
      q.points.push_back({x, y});
    }
    std::vector<Key> stored = enum_snap_keys(p, lat);
    Key qk = key_of(q, lat);
    CHECK(contains(stored, qk));
  }
}
