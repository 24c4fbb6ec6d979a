#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "pdann/geometry.hpp"

namespace pdann {

/// A diagram parsed from text, with enough origin information to report
/// bound violations by source line.
struct ParsedDiagram {
  Diagram diagram;
  /// lines[i] is the 1-based source line of diagram.points[i].
  std::vector<std::size_t> lines;
  /// Points with birth == death carry no information (the diagonal has
  /// infinite multiplicity); they are skipped and counted here so callers
  /// can warn.
  std::size_t dropped_diagonal = 0;
  std::string source;
};

/// Parses the diagram text format: one "birth death" pair per line, separated
/// by whitespace or a comma; '#' starts a comment; blank lines are ignored.
/// Throws ParseError naming source_name and the line on malformed input.
ParsedDiagram read_diagram(std::istream& in, const std::string& source_name);
ParsedDiagram read_diagram_file(const std::string& path);

/// Throws DomainError, with the source file and line in the message, when a
/// point lies outside [-half_extent, half_extent]^2 or the diagram exceeds
/// max_points points.
void check_bounds(const ParsedDiagram& parsed, double half_extent,
                  std::size_t max_points);

/// Expands a dataset argument into an ordered list of diagram files. A
/// directory yields its regular files sorted by filename; any other path is
/// read as a manifest with one file path per line ('#' comments and blank
/// lines ignored), resolved relative to the manifest's directory. The order
/// defines diagram ids 0..n-1.
std::vector<std::string> resolve_dataset(const std::string& path);

}  // namespace pdann
