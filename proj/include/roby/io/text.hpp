#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "roby/error.hpp"

namespace roby::io {

/// 17 significant digits, enough to round-trip any double.
inline std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Plain comma split; no quoting.
inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Reads lines, tracking 1-based line numbers and skipping blank lines.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::optional<std::string_view> next() {
    while (std::getline(in_, buffer_)) {
      ++line_no_;
      if (!trim(buffer_).empty()) return trim(buffer_);
    }
    return std::nullopt;
  }

  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::istream& in_;
  std::string buffer_;
  std::size_t line_no_ = 0;
};

inline std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

/// Strict decimal real; NaN and infinities are reported as NonFiniteValue.
inline double parse_real(std::string_view field, const std::string& location) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || end != field.data() + field.size()) {
    throw Error(ErrorCode::MalformedValue, location + ": '" + std::string(field) + "' is not a real number");
  }
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NonFiniteValue, location + ": non-finite value '" + std::string(field) + "'");
  }
  return v;
}

template <typename UInt>
UInt parse_unsigned(std::string_view field, const std::string& location) {
  UInt v = 0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || end != field.data() + field.size()) {
    throw Error(ErrorCode::MalformedValue,
                location + ": '" + std::string(field) + "' is not a non-negative integer");
  }
  return v;
}

inline std::ifstream open_input(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for reading");
  return in;
}

inline void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write to '" + path.string() + "' failed");
}

}  // namespace roby::io
