#include "pdann/serialize.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <ostream>

#include "pdann/errors.hpp"

namespace pdann {

namespace {

constexpr char kMagic[5] = {'P', 'D', 'A', 'N', 'N'};

// min_distance is optional; this sentinel marks "not computed" on disk.
constexpr double kNoMinDistance = -1.0;

void put_bytes(std::ostream& out, const void* data, std::size_t n) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

void put_u8(std::ostream& out, std::uint8_t v) { put_bytes(out, &v, 1); }

void put_u16(std::ostream& out, std::uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v),
                        static_cast<unsigned char>(v >> 8)};
  put_bytes(out, b, 2);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  put_bytes(out, b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  put_bytes(out, b, 8);
}

void put_f64(std::ostream& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

void get_bytes(std::istream& in, void* data, std::size_t n) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw FormatError("unexpected end of index data");
  }
}

std::uint8_t get_u8(std::istream& in) {
  unsigned char b;
  get_bytes(in, &b, 1);
  return b;
}

std::uint16_t get_u16(std::istream& in) {
  unsigned char b[2];
  get_bytes(in, b, 2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  get_bytes(in, b, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{b[i]} << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  get_bytes(in, b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return v;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void save_index(const DiagramIndex& index, std::ostream& out) {
  const IndexParams& p = index.params();
  put_bytes(out, kMagic, sizeof kMagic);
  put_u8(out, static_cast<std::uint8_t>(kIndexFormatVersion));
  put_u16(out, 0);  // reserved
  put_f64(out, p.half_extent);
  put_f64(out, p.separation_factor);
  put_f64(out, p.min_distance ? *p.min_distance : kNoMinDistance);
  put_u32(out, p.max_points);
  put_u32(out, static_cast<std::uint32_t>(p.max_level));
  put_u64(out, index.size());

  for (const Diagram& d : index.diagrams()) {
    put_u32(out, static_cast<std::uint32_t>(d.size()));
    for (const Point& pt : d.points) {
      put_f64(out, pt.x);
      put_f64(out, pt.y);
    }
  }

  for (const LevelIndex& lvl : index.levels()) {
    put_u64(out, lvl.buckets.size());
    for (const Bucket& b : lvl.buckets) {
      put_u32(out, static_cast<std::uint32_t>(b.key.entries.size()));
      for (const KeyEntry& e : b.key.entries) {
        put_u32(out, e.cell);
        put_u32(out, e.count);
      }
      put_u32(out, static_cast<std::uint32_t>(b.ids.size()));
      for (DiagramId id : b.ids) put_u32(out, id);
    }
  }
  if (!out) {
    throw FormatError("failed to write index data");
  }
}

void save_index(const DiagramIndex& index, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DomainError("cannot open '" + path + "' for writing");
  }
  save_index(index, out);
  out.flush();
  if (!out) {
    throw FormatError("failed to write '" + path + "'");
  }
}

DiagramIndex load_index(std::istream& in) {
  char magic[sizeof kMagic];
  get_bytes(in, magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw FormatError("not an index file (bad magic)");
  }
  unsigned version = get_u8(in);
  if (version != kIndexFormatVersion) {
    throw FormatError("unsupported index format version " + std::to_string(version));
  }
  get_u16(in);  // reserved

  IndexParams params;
  params.half_extent = get_f64(in);
  params.separation_factor = get_f64(in);
  double eps = get_f64(in);
  if (eps != kNoMinDistance) params.min_distance = eps;
  params.max_points = get_u32(in);
  std::uint32_t max_level = get_u32(in);
  if (max_level > static_cast<std::uint32_t>(Lattice::kMaxLevel)) {
    throw FormatError("level count out of range");
  }
  params.max_level = static_cast<int>(max_level);
  std::uint64_t n = get_u64(in);
  if (n == 0 || n > std::numeric_limits<DiagramId>::max()) {
    throw FormatError("diagram count out of range");
  }

  std::vector<Diagram> diagrams;
  diagrams.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    std::uint32_t count = get_u32(in);
    if (count > params.max_points) {
      throw FormatError("stored diagram exceeds the point bound");
    }
    Diagram d;
    d.points.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
      double x = get_f64(in);
      double y = get_f64(in);
      d.points.push_back({x, y});
    }
    diagrams.push_back(std::move(d));
  }

  std::vector<LevelIndex> levels;
  levels.reserve(static_cast<std::size_t>(params.max_level) + 1);
  for (int lvl = 0; lvl <= params.max_level; ++lvl) {
    LevelIndex level;
    level.level = lvl;
    std::uint64_t bucket_count = get_u64(in);
    level.buckets.reserve(bucket_count);
    for (std::uint64_t b = 0; b < bucket_count; ++b) {
      Bucket bucket;
      std::uint32_t entry_count = get_u32(in);
      if (entry_count > params.max_points) {
        throw FormatError("key length exceeds the point bound");
      }
      bucket.key.entries.reserve(entry_count);
      for (std::uint32_t e = 0; e < entry_count; ++e) {
        std::uint32_t cell = get_u32(in);
        std::uint32_t count = get_u32(in);
        bucket.key.entries.push_back({cell, count});
      }
      std::uint32_t id_count = get_u32(in);
      if (id_count > n) {
        throw FormatError("bucket id count exceeds the diagram count");
      }
      bucket.ids.reserve(id_count);
      for (std::uint32_t k = 0; k < id_count; ++k) {
        bucket.ids.push_back(get_u32(in));
      }
      level.buckets.push_back(std::move(bucket));
    }
    levels.push_back(std::move(level));
  }

  in.peek();
  if (!in.eof()) {
    throw FormatError("trailing bytes after index data");
  }
  return DiagramIndex::assemble(std::move(params), std::move(diagrams),
                                std::move(levels));
}

DiagramIndex load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DomainError("cannot open '" + path + "' for reading");
  }
  return load_index(in);
}

}  // namespace pdann
