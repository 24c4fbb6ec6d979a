#pragma once

#include <iosfwd>
#include <string>

#include "pdann/index.hpp"

namespace pdann {

/// Current index file format version. The layout is documented in
/// docs/index-format.md; all integers and doubles are little-endian.
inline constexpr unsigned kIndexFormatVersion = 1;

/// Writes the index in the versioned binary format. Byte-deterministic for a
/// fixed index.
void save_index(const DiagramIndex& index, std::ostream& out);
void save_index(const DiagramIndex& index, const std::string& path);

/// Reads an index back, validating structure. Throws FormatError for
/// truncated or corrupt data and for unknown format versions; the path
/// overload throws DomainError when the file cannot be opened.
DiagramIndex load_index(std::istream& in);
DiagramIndex load_index(const std::string& path);

}  // namespace pdann
