// pdann: build, query, and benchmark multi-resolution snap-rounding indexes
// over persistence diagrams, plus an exact bottleneck-distance oracle.
//
// Exit codes: 0 success, 2 invalid input or usage, 3 resource limit exceeded.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdann/bottleneck.hpp"
#include "pdann/diagram_io.hpp"
#include "pdann/errors.hpp"
#include "pdann/index.hpp"
#include "pdann/serialize.hpp"
#include "pdann/text.hpp"

namespace {

using nlohmann::ordered_json;

void warn_dropped(const pdann::ParsedDiagram& parsed) {
  if (parsed.dropped_diagonal > 0) {
    std::cerr << "warning: " << parsed.source << ": dropped "
              << parsed.dropped_diagonal
              << " point(s) on the diagonal (birth == death)\n";
  }
}

pdann::ParsedDiagram load_checked(const std::string& path, double half_extent,
                                  std::size_t max_points) {
  pdann::ParsedDiagram parsed = pdann::read_diagram_file(path);
  warn_dropped(parsed);
  pdann::check_bounds(parsed, half_extent, max_points);
  return parsed;
}

std::vector<pdann::Diagram> load_dataset(const std::string& dataset,
                                         double half_extent, std::size_t max_points,
                                         std::vector<std::string>* paths_out) {
  std::vector<std::string> paths = pdann::resolve_dataset(dataset);
  std::vector<pdann::Diagram> diagrams;
  diagrams.reserve(paths.size());
  for (const std::string& p : paths) {
    diagrams.push_back(load_checked(p, half_extent, max_points).diagram);
  }
  if (paths_out != nullptr) *paths_out = std::move(paths);
  return diagrams;
}

std::uint64_t memory_budget_from_env(std::uint64_t fallback) {
  const char* raw = std::getenv("PDANN_MEM_CAP");
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || v == 0) {
    throw pdann::DomainError(
        "PDANN_MEM_CAP must be a positive byte count, got '" + std::string(raw) +
        "'");
  }
  return v;
}

pdann::SearchStrategy parse_strategy(const std::string& name) {
  return name == "exponential" ? pdann::SearchStrategy::kExponential
                               : pdann::SearchStrategy::kBinary;
}

std::string join_ids(const std::vector<pdann::DiagramId>& ids, char sep) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out.push_back(sep);
    out += std::to_string(ids[i]);
  }
  return out;
}

void print_index_summary(const pdann::DiagramIndex& index, std::ostream& out,
                         bool with_totals) {
  const pdann::IndexParams& p = index.params();
  out << "n=" << index.size() << " tau=" << p.max_level << " epsilon="
      << (p.min_distance ? pdann::format_double(*p.min_distance) : "none")
      << " M=" << pdann::format_double(p.half_extent) << " m=" << p.max_points
      << " c=" << pdann::format_double(p.separation_factor) << "\n";
  for (const pdann::LevelStats& s : index.stats()) {
    out << "level " << s.level << ": keys=" << s.key_count
        << " max_distinct=" << s.max_distinct;
    if (with_totals) {
      out << " total_ids=" << s.total_ids
          << " delta=" << pdann::format_double(s.spacing);
    }
    out << "\n";
  }
}

struct BuildArgs {
  std::string dataset;
  std::string out;
  double half_extent = 0.0;
  std::uint32_t max_points = 0;
  double factor = 2.0;
  int tau = 0;
  bool tau_set = false;
  double epsilon = 0.0;
  bool epsilon_set = false;
};

int run_build(const BuildArgs& args) {
  std::vector<pdann::Diagram> diagrams =
      load_dataset(args.dataset, args.half_extent, args.max_points, nullptr);

  pdann::BuildOptions options;
  options.half_extent = args.half_extent;
  options.max_points = args.max_points;
  options.separation_factor = args.factor;
  if (args.tau_set) options.max_level = args.tau;
  if (args.epsilon_set) options.min_distance = args.epsilon;
  options.memory_budget = memory_budget_from_env(options.memory_budget);

  pdann::DiagramIndex index =
      pdann::DiagramIndex::build(std::move(diagrams), options);
  pdann::save_index(index, args.out);
  print_index_summary(index, std::cout, /*with_totals=*/false);
  return 0;
}

struct QueryArgs {
  std::string index_path;
  std::string diagram_path;
  std::size_t k = 1;
  bool exact = false;
  std::string search = "binary";
  std::string format = "text";
};

int run_query(const QueryArgs& args) {
  pdann::DiagramIndex index = pdann::load_index(args.index_path);
  const pdann::IndexParams& p = index.params();
  pdann::ParsedDiagram parsed =
      load_checked(args.diagram_path, p.half_extent, p.max_points);
  pdann::SearchStrategy strategy = parse_strategy(args.search);

  pdann::KNNResult result = index.query_knn(parsed.diagram, args.k, strategy);
  int approx = args.k == 1 ? 6 : 24;

  std::optional<pdann::ExactNNResult> exact;
  if (args.exact) exact = index.query_nn_exact(parsed.diagram, strategy);

  if (args.format == "json") {
    ordered_json j;
    j["ids"] = result.ids;
    j["k"] = args.k;
    j["level"] = result.level;
    j["delta"] = result.spacing;
    j["bound"] = result.bound;
    j["approx"] = approx;
    j["probes"] = result.probes;
    if (exact) {
      j["exact"] = ordered_json{{"id", exact->id},
                                {"distance", exact->distance},
                                {"collision_level", exact->collision_level},
                                {"scan_level", exact->scan_level},
                                {"candidates", exact->candidates},
                                {"probes", exact->probes}};
    }
    std::cout << j.dump() << "\n";
    return 0;
  }

  if (args.k == 1) {
    std::cout << "id=" << result.ids.front();
  } else {
    std::cout << "ids=" << join_ids(result.ids, ',');
  }
  std::cout << " level=" << result.level
            << " delta=" << pdann::format_double(result.spacing)
            << " bound=" << pdann::format_double(result.bound) << " approx=" << approx
            << " probes=" << result.probes << "\n";
  if (exact) {
    std::cout << "exact id=" << exact->id
              << " distance=" << pdann::format_double(exact->distance)
              << " scan_level=" << exact->scan_level
              << " candidates=" << exact->candidates << " probes=" << exact->probes
              << "\n";
  }
  return 0;
}

struct DistArgs {
  std::string a;
  std::string b;
  double half_extent = 0.0;
  bool half_extent_set = false;
  std::uint32_t max_points = 0;
  bool max_points_set = false;
};

int run_dist(const DistArgs& args) {
  double bound = args.half_extent_set ? args.half_extent
                                      : std::numeric_limits<double>::infinity();
  std::size_t cap = args.max_points_set ? args.max_points
                                        : std::numeric_limits<std::size_t>::max();
  pdann::ParsedDiagram a = load_checked(args.a, bound, cap);
  pdann::ParsedDiagram b = load_checked(args.b, bound, cap);
  std::cout << pdann::format_double(pdann::bottleneck_distance(a.diagram, b.diagram))
            << "\n";
  return 0;
}

struct StatsArgs {
  std::string index_path;
  std::string format = "text";
};

int run_stats(const StatsArgs& args) {
  pdann::DiagramIndex index = pdann::load_index(args.index_path);
  if (args.format == "json") {
    const pdann::IndexParams& p = index.params();
    ordered_json j;
    j["n"] = index.size();
    j["tau"] = p.max_level;
    if (p.min_distance) {
      j["epsilon"] = *p.min_distance;
    } else {
      j["epsilon"] = nullptr;
    }
    j["M"] = p.half_extent;
    j["m"] = p.max_points;
    j["c"] = p.separation_factor;
    ordered_json levels = ordered_json::array();
    for (const pdann::LevelStats& s : index.stats()) {
      levels.push_back(ordered_json{{"level", s.level},
                                    {"delta", s.spacing},
                                    {"keys", s.key_count},
                                    {"max_distinct", s.max_distinct},
                                    {"total_ids", s.total_ids}});
    }
    j["levels"] = std::move(levels);
    std::cout << j.dump() << "\n";
    return 0;
  }
  print_index_summary(index, std::cout, /*with_totals=*/true);
  return 0;
}

struct BenchArgs {
  std::string dataset;
  std::string queries;
  double half_extent = 0.0;
  std::uint32_t max_points = 0;
  double factor = 2.0;
  std::size_t k = 1;
  std::size_t repeats = 1;
  int tau = 0;
  bool tau_set = false;
  double epsilon = 0.0;
  bool epsilon_set = false;
};

// kth smallest bottleneck distance from q to the collection, by full scan.
double oracle_kth_distance(const pdann::DiagramIndex& index, const pdann::Diagram& q,
                           std::size_t k) {
  std::vector<double> dists;
  dists.reserve(index.size());
  for (std::size_t id = 0; id < index.size(); ++id) {
    dists.push_back(pdann::bottleneck_distance(
        q, index.diagram(static_cast<pdann::DiagramId>(id))));
  }
  std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
  return dists[k - 1];
}

int run_bench(const BenchArgs& args) {
  std::vector<pdann::Diagram> diagrams =
      load_dataset(args.dataset, args.half_extent, args.max_points, nullptr);
  std::vector<pdann::Diagram> queries =
      load_dataset(args.queries, args.half_extent, args.max_points, nullptr);

  pdann::BuildOptions options;
  options.half_extent = args.half_extent;
  options.max_points = args.max_points;
  options.separation_factor = args.factor;
  if (args.tau_set) options.max_level = args.tau;
  if (args.epsilon_set) options.min_distance = args.epsilon;
  options.memory_budget = memory_budget_from_env(options.memory_budget);

  pdann::DiagramIndex index =
      pdann::DiagramIndex::build(std::move(diagrams), options);
  if (args.k == 0 || args.k > index.size()) {
    throw pdann::DomainError("k must be in [1, " + std::to_string(index.size()) +
                             "]");
  }

  using clock = std::chrono::steady_clock;
  auto micros = [](clock::duration d) {
    return std::chrono::duration<double, std::micro>(d).count();
  };

  std::cout << "query,repeat,k,ids,index_distance,oracle_distance,ratio,probes,"
               "index_us,scan_us\n";
  double max_ratio = 0.0;
  char row[64];
  for (std::size_t rep = 0; rep < args.repeats; ++rep) {
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
      const pdann::Diagram& q = queries[qi];

      auto t0 = clock::now();
      pdann::KNNResult result = index.query_knn(q, args.k);
      auto t1 = clock::now();

      double index_distance = 0.0;
      for (pdann::DiagramId id : result.ids) {
        index_distance =
            std::max(index_distance, pdann::bottleneck_distance(q, index.diagram(id)));
      }

      auto t2 = clock::now();
      double oracle = oracle_kth_distance(index, q, args.k);
      auto t3 = clock::now();

      double ratio;
      if (oracle > 0.0) {
        ratio = index_distance / oracle;
      } else {
        ratio = index_distance == 0.0 ? 1.0
                                      : std::numeric_limits<double>::infinity();
      }
      max_ratio = std::max(max_ratio, ratio);

      std::cout << qi << ',' << rep << ',' << args.k << ','
                << join_ids(result.ids, ';') << ','
                << pdann::format_double(index_distance) << ','
                << pdann::format_double(oracle) << ',' << pdann::format_double(ratio)
                << ',' << result.probes << ',';
      std::snprintf(row, sizeof row, "%.3f,%.3f", micros(t1 - t0), micros(t3 - t2));
      std::cout << row << "\n";
    }
  }
  std::cout << "summary,,,,,," << pdann::format_double(max_ratio) << ",,,\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Sublinear approximate nearest-neighbor search over persistence "
      "diagrams under the bottleneck distance"};
  app.require_subcommand(1);

  BuildArgs build_args;
  CLI::App* build = app.add_subcommand(
      "build", "Build an index from a dataset and write it to a file");
  build->add_option("dataset", build_args.dataset,
                    "Diagram directory or manifest file")
      ->required();
  build->add_option("--M", build_args.half_extent,
                    "Coordinate bound: all coordinates lie in [-M, M]")
      ->required();
  build->add_option("--m", build_args.max_points, "Points-per-diagram bound")
      ->required();
  build->add_option("--c", build_args.factor,
                    "Separation factor (> 1.5) sizing the level count");
  CLI::Option* tau_opt =
      build->add_option("--tau", build_args.tau, "Explicit deepest level");
  CLI::Option* eps_opt = build->add_option(
      "--epsilon", build_args.epsilon,
      "Known minimum pairwise distance; skips the quadratic pass");
  build->add_option("--out", build_args.out, "Output index path")->required();

  QueryArgs query_args;
  CLI::App* query =
      app.add_subcommand("query", "Query an index with a diagram file");
  query->add_option("index", query_args.index_path, "Index file")->required();
  query->add_option("diagram", query_args.diagram_path, "Query diagram file")
      ->required();
  query->add_option("--k", query_args.k, "Number of neighbors (default 1)");
  query->add_flag("--exact", query_args.exact,
                  "Also report the true nearest neighbor with its distance");
  query->add_option("--search", query_args.search, "Level search strategy")
      ->check(CLI::IsMember({"binary", "exponential"}));
  query->add_option("--format", query_args.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));

  DistArgs dist_args;
  CLI::App* dist = app.add_subcommand(
      "dist", "Exact bottleneck distance between two diagram files");
  dist->add_option("a", dist_args.a, "First diagram file")->required();
  dist->add_option("b", dist_args.b, "Second diagram file")->required();
  CLI::Option* dist_m_opt =
      dist->add_option("--M", dist_args.half_extent, "Validate coordinates against M");
  CLI::Option* dist_pts_opt =
      dist->add_option("--m", dist_args.max_points, "Validate point counts against m");

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "Summarize an index file");
  stats->add_option("index", stats_args.index_path, "Index file")->required();
  stats->add_option("--format", stats_args.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand(
      "bench", "Compare index queries against the linear-scan oracle (CSV)");
  bench->add_option("dataset", bench_args.dataset, "Diagrams to index")->required();
  bench->add_option("queries", bench_args.queries, "Query diagrams")->required();
  bench->add_option("--M", bench_args.half_extent, "Coordinate bound")->required();
  bench->add_option("--m", bench_args.max_points, "Points-per-diagram bound")
      ->required();
  bench->add_option("--c", bench_args.factor, "Separation factor");
  bench->add_option("--k", bench_args.k, "Neighbors per query (default 1)");
  bench->add_option("--repeats", bench_args.repeats, "Repetitions of the suite");
  CLI::Option* bench_tau_opt =
      bench->add_option("--tau", bench_args.tau, "Explicit deepest level");
  CLI::Option* bench_eps_opt = bench->add_option(
      "--epsilon", bench_args.epsilon, "Known minimum pairwise distance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  build_args.tau_set = tau_opt->count() > 0;
  build_args.epsilon_set = eps_opt->count() > 0;
  dist_args.half_extent_set = dist_m_opt->count() > 0;
  dist_args.max_points_set = dist_pts_opt->count() > 0;
  bench_args.tau_set = bench_tau_opt->count() > 0;
  bench_args.epsilon_set = bench_eps_opt->count() > 0;

  try {
    if (build->parsed()) return run_build(build_args);
    if (query->parsed()) return run_query(query_args);
    if (dist->parsed()) return run_dist(dist_args);
    if (stats->parsed()) return run_stats(stats_args);
    if (bench->parsed()) return run_bench(bench_args);
  } catch (const pdann::ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pdann::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pdann::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pdann::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
