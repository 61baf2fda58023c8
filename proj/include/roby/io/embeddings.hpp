#pragma once

// Embedding dump formats.
//
// CSV: header `index,label,e_0,...,e_{M-1}`, optionally with a `truth` column
// (ground-truth class) right after `label`. One record per line.
//
// Binary (all integers little-endian, reals IEEE-754 binary64 little-endian):
//   magic    8 bytes  "ROBYEMB1"
//   version  u16      1
//   dims     u32      M
//   classes  u32      K
//   count    u64      number of records
//   count x { label u32, M x f64 }
// The record index is its position in the file.

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "roby/dataset.hpp"
#include "roby/error.hpp"
#include "roby/io/text.hpp"

namespace roby::io {

enum class EmbeddingFormat { Csv, Binary };

inline constexpr std::array<char, 8> kEmbeddingMagic = {'R', 'O', 'B', 'Y', 'E', 'M', 'B', '1'};
inline constexpr std::uint16_t kEmbeddingVersion = 1;
inline constexpr std::size_t kEmbeddingHeaderSize = 8 + 2 + 4 + 4 + 8;

struct LoadOptions {
  /// Declared class count. Defaults to max label + 1 (CSV) or the header value (binary).
  std::optional<std::size_t> num_classes;
  /// Keep only records whose predicted label equals the ground truth.
  bool drop_misclassified = false;
  /// Defaults to the file stem.
  std::optional<std::string> model_name;
};

namespace detail {

inline EmbeddingDataset finish(std::string model, std::size_t dims, std::size_t num_classes,
                               std::vector<EmbeddingRecord> records, const LoadOptions& opts,
                               const std::string& source) {
  try {
    EmbeddingDataset ds(std::move(model), dims, num_classes, std::move(records));
    return opts.drop_misclassified ? drop_misclassified(ds) : ds;
  } catch (const Error& e) {
    throw e.annotated(source);
  }
}

template <typename UInt>
void put_le(std::string& out, UInt v) {
  for (std::size_t b = 0; b < sizeof(UInt); ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

template <typename UInt>
UInt get_le(const unsigned char* p) {
  UInt v = 0;
  for (std::size_t b = 0; b < sizeof(UInt); ++b) v |= static_cast<UInt>(p[b]) << (8 * b);
  return v;
}

}  // namespace detail

inline EmbeddingDataset read_embeddings_csv(std::istream& in, const std::string& source,
                                            const LoadOptions& opts = {}) {
  LineReader reader(in);
  const auto header_line = reader.next();
  if (!header_line) throw Error(ErrorCode::MalformedHeader, source + ": empty file");
  const auto header = split_fields(*header_line);
  const std::string header_at = where(source, reader.line_no());
  if (header.size() < 3 || header[0] != "index" || header[1] != "label") {
    throw Error(ErrorCode::MalformedHeader, header_at + ": expected 'index,label,[truth,]e_0,...'");
  }
  const bool has_truth = header[2] == "truth";
  const std::size_t first_coord = has_truth ? 3 : 2;
  const std::size_t dims = header.size() - first_coord;
  if (dims == 0) throw Error(ErrorCode::MalformedHeader, header_at + ": no embedding columns");
  for (std::size_t d = 0; d < dims; ++d) {
    if (header[first_coord + d] != "e_" + std::to_string(d)) {
      throw Error(ErrorCode::MalformedHeader, header_at + ": column " + std::to_string(first_coord + d + 1) +
                                                  " should be 'e_" + std::to_string(d) + "', found '" +
                                                  std::string(header[first_coord + d]) + "'");
    }
  }

  std::vector<EmbeddingRecord> records;
  std::size_t max_label = 0;
  while (const auto line = reader.next()) {
    const std::string at = where(source, reader.line_no());
    const auto fields = split_fields(*line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::RaggedRow, at + ": " + std::to_string(fields.size()) + " fields, header has " +
                                            std::to_string(header.size()));
    }
    EmbeddingRecord r;
    r.index = parse_unsigned<RecordIndex>(fields[0], at);
    r.label = parse_unsigned<ClassLabel>(fields[1], at);
    if (has_truth) r.truth = parse_unsigned<ClassLabel>(fields[2], at);
    if (opts.num_classes && (r.label >= *opts.num_classes || (r.truth && *r.truth >= *opts.num_classes))) {
      throw Error(ErrorCode::LabelOutOfRange,
                  at + ": label outside [0, " + std::to_string(*opts.num_classes) + ")");
    }
    r.vector.reserve(dims);
    for (std::size_t d = 0; d < dims; ++d) r.vector.push_back(parse_real(fields[first_coord + d], at));
    max_label = std::max<std::size_t>(max_label, r.label);
    records.push_back(std::move(r));
  }
  if (records.empty()) throw Error(ErrorCode::EmptyClass, source + ": no records, every class is empty");
  const std::size_t k = opts.num_classes.value_or(max_label + 1);
  return detail::finish(opts.model_name.value_or(std::filesystem::path(source).stem().string()), dims, k,
                        std::move(records), opts, source);
}

inline EmbeddingDataset load_embeddings_csv(const std::filesystem::path& path, const LoadOptions& opts = {}) {
  auto in = open_input(path);
  return read_embeddings_csv(in, path.string(), opts);
}

inline std::string embeddings_to_csv(const EmbeddingDataset& ds) {
  std::string out = "index,label";
  if (ds.has_truth()) out += ",truth";
  for (std::size_t d = 0; d < ds.dims(); ++d) out += ",e_" + std::to_string(d);
  out += '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out += std::to_string(ds.index(i));
    out += ',';
    out += std::to_string(ds.label(i));
    if (ds.has_truth()) {
      out += ',';
      out += std::to_string(*ds.truth(i));
    }
    for (const double x : ds.vector(i)) {
      out += ',';
      out += format_real(x);
    }
    out += '\n';
  }
  return out;
}

inline void write_embeddings_csv(const EmbeddingDataset& ds, const std::filesystem::path& path) {
  write_file(path, embeddings_to_csv(ds));
}

/// Record indices and ground truth are not stored; indices become positions.
inline std::string embeddings_to_binary(const EmbeddingDataset& ds) {
  std::string out;
  out.reserve(kEmbeddingHeaderSize + ds.size() * (4 + 8 * ds.dims()));
  out.append(kEmbeddingMagic.data(), kEmbeddingMagic.size());
  detail::put_le<std::uint16_t>(out, kEmbeddingVersion);
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ds.dims()));
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ds.num_classes()));
  detail::put_le<std::uint64_t>(out, ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    detail::put_le<std::uint32_t>(out, ds.label(i));
    for (const double x : ds.vector(i)) detail::put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(x));
  }
  return out;
}

inline void write_embeddings_binary(const EmbeddingDataset& ds, const std::filesystem::path& path) {
  write_file(path, embeddings_to_binary(ds));
}

inline EmbeddingDataset read_embeddings_binary(std::string_view bytes, const std::string& source,
                                               const LoadOptions& opts = {}) {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < kEmbeddingMagic.size()) {
    throw Error(ErrorCode::TruncatedFile, source + ": shorter than the magic number");
  }
  if (!std::equal(kEmbeddingMagic.begin(), kEmbeddingMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::BadMagic, source + ": magic is '" + std::string(bytes.substr(0, 8)) +
                                         "', expected 'ROBYEMB1'");
  }
  if (bytes.size() < kEmbeddingHeaderSize) throw Error(ErrorCode::TruncatedFile, source + ": header is cut short");
  const auto version = detail::get_le<std::uint16_t>(p + 8);
  if (version != kEmbeddingVersion) {
    throw Error(ErrorCode::BadVersion, source + ": version " + std::to_string(version) + ", expected " +
                                           std::to_string(kEmbeddingVersion));
  }
  const std::size_t dims = detail::get_le<std::uint32_t>(p + 10);
  const std::size_t header_k = detail::get_le<std::uint32_t>(p + 14);
  const std::uint64_t count = detail::get_le<std::uint64_t>(p + 18);
  if (dims == 0) throw Error(ErrorCode::InvalidDataset, source + ": header declares zero dimensions");
  if (count == 0) throw Error(ErrorCode::EmptyClass, source + ": no records, every class is empty");

  const std::uint64_t record_size = 4 + 8 * static_cast<std::uint64_t>(dims);
  const std::uint64_t body = bytes.size() - kEmbeddingHeaderSize;
  if (body / record_size < count) {
    throw Error(ErrorCode::TruncatedFile, source + ": header declares " + std::to_string(count) +
                                              " records, file holds " + std::to_string(body / record_size));
  }
  if (body != count * record_size) {
    throw Error(ErrorCode::TrailingData, source + ": " + std::to_string(body - count * record_size) +
                                             " bytes after the last record");
  }

  const std::size_t k = opts.num_classes.value_or(header_k);
  std::vector<EmbeddingRecord> records(count);
  const unsigned char* rec = p + kEmbeddingHeaderSize;
  for (std::uint64_t i = 0; i < count; ++i, rec += record_size) {
    auto& r = records[i];
    r.index = i;
    r.label = detail::get_le<std::uint32_t>(rec);
    if (r.label >= k) {
      throw Error(ErrorCode::LabelOutOfRange, source + ": record " + std::to_string(i) + " has label " +
                                                  std::to_string(r.label) + " outside [0, " + std::to_string(k) + ")");
    }
    r.vector.resize(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      r.vector[d] = std::bit_cast<double>(detail::get_le<std::uint64_t>(rec + 4 + 8 * d));
      if (!std::isfinite(r.vector[d])) {
        throw Error(ErrorCode::NonFiniteValue, source + ": record " + std::to_string(i) + " coordinate " +
                                                   std::to_string(d) + " is not finite");
      }
    }
  }
  return detail::finish(opts.model_name.value_or(std::filesystem::path(source).stem().string()), dims, k,
                        std::move(records), opts, source);
}

inline EmbeddingDataset load_embeddings_binary(const std::filesystem::path& path, const LoadOptions& opts = {}) {
  auto in = open_input(path, std::ios::in | std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return read_embeddings_binary(bytes, path.string(), opts);
}

/// `.csv` files are CSV; anything else is read as binary.
inline EmbeddingFormat guess_format(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv" ? EmbeddingFormat::Csv : EmbeddingFormat::Binary;
}

inline EmbeddingDataset load_embeddings(const std::filesystem::path& path, const LoadOptions& opts = {}) {
  return guess_format(path) == EmbeddingFormat::Csv ? load_embeddings_csv(path, opts)
                                                    : load_embeddings_binary(path, opts);
}

inline void write_embeddings(const EmbeddingDataset& ds, const std::filesystem::path& path, EmbeddingFormat format) {
  if (format == EmbeddingFormat::Csv) {
    write_embeddings_csv(ds, path);
  } else {
    write_embeddings_binary(ds, path);
  }
}

}  // namespace roby::io
