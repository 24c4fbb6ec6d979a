#include <doctest.h>

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "pdann/errors.hpp"
#include "pdann/index.hpp"
#include "pdann/serialize.hpp"
#include "support/test_support.hpp"

using namespace pdann;

namespace {

DiagramIndex sample_index(std::uint64_t seed, int count) {
  auto rng = testutil::make_rng(seed);
  std::vector<Diagram> diagrams;
  for (int i = 0; i < count; ++i) {
    diagrams.push_back(testutil::random_diagram(rng, 10.0, 1, 3));
  }
  BuildOptions opt;
  opt.half_extent = 10.0;
  opt.max_points = 3;
  return DiagramIndex::build(std::move(diagrams), opt);
}

std::string to_bytes(const DiagramIndex& index) {
  std::ostringstream out(std::ios::binary);
  save_index(index, out);
  return out.str();
}

DiagramIndex from_bytes(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return load_index(in);
}

bool same_levels(const DiagramIndex& a, const DiagramIndex& b) {
  if (a.levels().size() != b.levels().size()) return false;
  for (std::size_t i = 0; i < a.levels().size(); ++i) {
    const LevelIndex& la = a.levels()[i];
    const LevelIndex& lb = b.levels()[i];
    if (la.level != lb.level || la.spacing != lb.spacing) return false;
    if (la.buckets.size() != lb.buckets.size()) return false;
    for (std::size_t j = 0; j < la.buckets.size(); ++j) {
      if (la.buckets[j].key != lb.buckets[j].key) return false;
      if (la.buckets[j].ids != lb.buckets[j].ids) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("save and load round trip") {
  DiagramIndex index = sample_index(7, 10);
  std::string bytes = to_bytes(index);
  DiagramIndex loaded = from_bytes(bytes);

  CHECK(loaded.params().half_extent == index.params().half_extent);
  CHECK(loaded.params().max_points == index.params().max_points);
  CHECK(loaded.params().separation_factor == index.params().separation_factor);
  REQUIRE(loaded.params().min_distance.has_value());
  CHECK(*loaded.params().min_distance == *index.params().min_distance);
  CHECK(loaded.params().max_level == index.params().max_level);
  CHECK(loaded.diagrams() == index.diagrams());
  CHECK(same_levels(loaded, index));

  // Queries answer identically through the loaded copy.
  auto rng = testutil::make_rng(8);
  for (int t = 0; t < 10; ++t) {
    Diagram q = testutil::random_diagram(rng, 10.0, 0, 3);
    NNResult a = index.query_nn(q);
    NNResult b = loaded.query_nn(q);
    CHECK(a.id == b.id);
    CHECK(a.level == b.level);
    CHECK(a.bound == b.bound);
    CHECK(a.probes == b.probes);
    ExactNNResult ea = index.query_nn_exact(q);
    ExactNNResult eb = loaded.query_nn_exact(q);
    CHECK(ea.id == eb.id);
    CHECK(ea.distance == eb.distance);
  }
}

TEST_CASE("round trip without a recorded minimum distance") {
  Diagram p{{{0, 2}}};
  BuildOptions opt;
  opt.half_extent = 4.0;
  opt.max_points = 1;
  opt.max_level = 2;
  DiagramIndex index = DiagramIndex::build({p, p}, opt);

  DiagramIndex loaded = from_bytes(to_bytes(index));
  CHECK_FALSE(loaded.params().min_distance.has_value());
  CHECK(loaded.params().max_level == 2);
  CHECK(same_levels(loaded, index));
}

TEST_CASE("serialization is byte-deterministic") {
  DiagramIndex a = sample_index(9, 8);
  DiagramIndex b = sample_index(9, 8);
  CHECK(to_bytes(a) == to_bytes(b));

  std::string once = to_bytes(a);
  DiagramIndex loaded = from_bytes(once);
  CHECK(to_bytes(loaded) == once);
}

TEST_CASE("the header starts with the magic and version") {
  std::string bytes = to_bytes(sample_index(10, 3));
  REQUIRE(bytes.size() > 6);
  CHECK(bytes.substr(0, 5) == "PDANN");
  CHECK(static_cast<unsigned char>(bytes[5]) == kIndexFormatVersion);
}

TEST_CASE("corrupt streams are rejected") {
  std::string bytes = to_bytes(sample_index(11, 5));

  SUBCASE("bad magic") {
    std::string bad = bytes;
    bad[0] = 'Q';
    CHECK_THROWS_AS(from_bytes(bad), FormatError);
  }
  SUBCASE("unknown version") {
    std::string bad = bytes;
    bad[5] = 2;
    CHECK_THROWS_AS(from_bytes(bad), FormatError);
  }
  SUBCASE("truncation at every prefix length") {
    for (std::size_t len : {std::size_t{0}, std::size_t{3}, std::size_t{8},
                            std::size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
      CHECK_THROWS_AS(from_bytes(bytes.substr(0, len)), FormatError);
    }
  }
  SUBCASE("trailing garbage") {
    CHECK_THROWS_AS(from_bytes(bytes + "x"), FormatError);
  }
  SUBCASE("id out of range") {
    // The final bytes of the stream are the deepest level's last bucket ids;
    // corrupting the last id's high byte pushes it past the collection size.
    std::string bad = bytes;
    bad[bad.size() - 1] = '\x7f';
    CHECK_THROWS_AS(from_bytes(bad), FormatError);
  }
}

TEST_CASE("file round trip and open failures") {
  DiagramIndex index = sample_index(12, 6);
  std::string path = "pdann_serialize_test.idx";
  save_index(index, path);
  DiagramIndex loaded = load_index(path);
  CHECK(same_levels(loaded, index));
  CHECK(to_bytes(loaded) == to_bytes(index));
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_index(std::string("no_such_dir/no_such_file.idx")),
                  DomainError);
  CHECK_THROWS_AS(save_index(index, std::string("no_such_dir/out.idx")),
                  DomainError);
}
