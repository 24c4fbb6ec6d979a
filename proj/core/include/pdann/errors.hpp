#pragma once

#include <stdexcept>
#include <string>

namespace pdann {

/// Invalid input: out-of-range coordinates, bad parameters, malformed queries.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A configured resource limit was exceeded (point budget, memory cap, level cap).
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Text input that could not be parsed; carries the offending file and line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& detail)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + detail),
        file_(file),
        line_(line) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

/// A serialized index that is truncated, corrupt, or of an unknown version.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pdann
