#include "pdann/diagram_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pdann/errors.hpp"
#include "pdann/text.hpp"

namespace pdann {

namespace {

// Strips a '#' comment and surrounding whitespace; empty result means the
// line carries no data.
std::string strip_line(const std::string& raw) {
  std::string s = raw.substr(0, raw.find('#'));
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ParsedDiagram read_diagram(std::istream& in, const std::string& source_name) {
  ParsedDiagram out;
  out.source = source_name;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip_line(raw);
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');

    std::istringstream fields(line);
    double birth = 0.0, death = 0.0;
    std::string extra;
    if (!(fields >> birth >> death)) {
      throw ParseError(source_name, line_no, "expected 'birth death'");
    }
    if (fields >> extra) {
      throw ParseError(source_name, line_no, "trailing data '" + extra + "'");
    }
    if (!std::isfinite(birth) || !std::isfinite(death)) {
      throw ParseError(source_name, line_no, "non-finite coordinate");
    }
    if (birth == death) {
      ++out.dropped_diagonal;
      continue;
    }
    out.diagram.points.push_back({birth, death});
    out.lines.push_back(line_no);
  }
  return out;
}

ParsedDiagram read_diagram_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DomainError("cannot open '" + path + "' for reading");
  }
  return read_diagram(in, path);
}

void check_bounds(const ParsedDiagram& parsed, double half_extent,
                  std::size_t max_points) {
  if (parsed.diagram.size() > max_points) {
    throw DomainError(parsed.source + ": diagram has " +
                      std::to_string(parsed.diagram.size()) +
                      " points, bound is " + std::to_string(max_points));
  }
  for (std::size_t i = 0; i < parsed.diagram.points.size(); ++i) {
    const Point& p = parsed.diagram.points[i];
    if (std::abs(p.x) > half_extent || std::abs(p.y) > half_extent) {
      throw DomainError(parsed.source + ":" + std::to_string(parsed.lines[i]) +
                        ": point (" + format_double(p.x) + ", " + format_double(p.y) +
                        ") outside [-" + format_double(half_extent) + ", " +
                        format_double(half_extent) + "]^2");
    }
  }
}

std::vector<std::string> resolve_dataset(const std::string& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    std::vector<std::string> files;
    for (const fs::directory_entry& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file()) {
        files.push_back(entry.path().string());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      throw DomainError("dataset directory '" + path + "' holds no files");
    }
    return files;
  }

  std::ifstream in(path);
  if (!in) {
    throw DomainError("cannot open dataset '" + path + "'");
  }
  fs::path base = fs::path(path).parent_path();
  std::vector<std::string> files;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip_line(raw);
    if (line.empty()) continue;
    fs::path entry(line);
    if (entry.is_relative()) entry = base / entry;
    files.push_back(entry.string());
  }
  if (files.empty()) {
    throw DomainError("manifest '" + path + "' lists no files");
  }
  return files;
}

}  // namespace pdann
