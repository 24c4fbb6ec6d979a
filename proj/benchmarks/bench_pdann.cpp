// Microbenchmarks for the exact matcher, key enumeration, index builds, and
// the query path against its linear-scan baseline.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "pdann/bottleneck.hpp"
#include "pdann/index.hpp"
#include "pdann/keys.hpp"

namespace {

using namespace pdann;

constexpr double kHalfExtent = 10.0;

Diagram random_diagram(std::mt19937_64& rng, std::size_t min_points,
                       std::size_t max_points) {
  std::uniform_int_distribution<std::size_t> count(min_points, max_points);
  std::uniform_real_distribution<double> coord(-kHalfExtent, kHalfExtent);
  Diagram d;
  std::size_t n = count(rng);
  for (std::size_t i = 0; i < n; ++i) {
    double x = coord(rng);
    double y = coord(rng);
    if (x == y) y = std::nextafter(y, kHalfExtent);
    d.points.push_back({x, y});
  }
  return d;
}

std::vector<Diagram> random_collection(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::vector<Diagram> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_diagram(rng, 1, 4));
  return out;
}

BuildOptions bench_options() {
  BuildOptions opt;
  opt.half_extent = kHalfExtent;
  opt.max_points = 4;
  // Pinning the minimum distance skips the quadratic pairwise pass and keeps
  // the level count identical across collection sizes.
  opt.min_distance = 0.1;
  return opt;
}

const DiagramIndex& cached_index(std::size_t n) {
  static std::map<std::size_t, DiagramIndex> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache
             .emplace(n, DiagramIndex::build(random_collection(7, n),
                                             bench_options()))
             .first;
  }
  return it->second;
}

std::vector<Diagram> query_pool() {
  std::mt19937_64 rng(8);
  std::vector<Diagram> out;
  for (int i = 0; i < 32; ++i) out.push_back(random_diagram(rng, 0, 4));
  return out;
}

void BM_BottleneckDistance(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::size_t m = static_cast<std::size_t>(state.range(0));
  Diagram a = random_diagram(rng, m, m);
  Diagram b = random_diagram(rng, m, m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bottleneck_distance(a, b));
  }
}
BENCHMARK(BM_BottleneckDistance)->Arg(2)->Arg(4)->Arg(8)->Arg(12);

void BM_KeyEnumeration(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::size_t m = static_cast<std::size_t>(state.range(0));
  Diagram d = random_diagram(rng, m, m);
  Lattice lat = Lattice::for_level(kHalfExtent, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enum_delsnap_keys(d, lat, 12));
  }
}
BENCHMARK(BM_KeyEnumeration)->Arg(1)->Arg(2)->Arg(3)->Arg(4);

void BM_IndexBuild(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<Diagram> diagrams = random_collection(3, n);
  for (auto _ : state) {
    DiagramIndex index = DiagramIndex::build(diagrams, bench_options());
    benchmark::DoNotOptimize(index.levels().size());
  }
  state.SetComplexityN(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_IndexBuild)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->Complexity();

void BM_QueryNN(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  const DiagramIndex& index = cached_index(n);
  std::vector<Diagram> queries = query_pool();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.query_nn(queries[i]).id);
    i = (i + 1) % queries.size();
  }
  state.SetComplexityN(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_QueryNN)->Arg(64)->Arg(256)->Arg(1024)->Complexity();

void BM_LinearScanNN(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  const DiagramIndex& index = cached_index(n);
  std::vector<Diagram> queries = query_pool();
  std::size_t i = 0;
  for (auto _ : state) {
    const Diagram& q = queries[i];
    double best = std::numeric_limits<double>::infinity();
    DiagramId best_id = 0;
    for (std::size_t id = 0; id < index.size(); ++id) {
      double d = bottleneck_distance(q, index.diagram(static_cast<DiagramId>(id)));
      if (d < best) {
        best = d;
        best_id = static_cast<DiagramId>(id);
      }
    }
    benchmark::DoNotOptimize(best_id);
    i = (i + 1) % queries.size();
  }
  state.SetComplexityN(static_cast<std::int64_t>(n));
}
BENCHMARK(BM_LinearScanNN)->Arg(64)->Arg(256)->Arg(1024)->Complexity();

}  // namespace

BENCHMARK_MAIN();
