#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "roby/analysis.hpp"
#include "roby/error.hpp"
#include "roby/io/text.hpp"

namespace roby::io {

/// Per-dataset model table: header `model,ACC,ASR_INF,...,ROBY_2` (the nine
/// kMetricsColumns, any order, extra numeric columns allowed).
inline ModelMetricsTable read_metrics_table(std::istream& in, const std::string& source,
                                            const std::string& dataset_name) {
  LineReader reader(in);
  const auto header_line = reader.next();
  if (!header_line) throw Error(ErrorCode::MalformedHeader, source + ": empty file");
  const auto header = split_fields(*header_line);
  if (header.empty() || header[0] != "model") {
    throw Error(ErrorCode::MalformedHeader, where(source, reader.line_no()) + ": first column must be 'model'");
  }
  std::vector<std::string> columns;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty()) {
      throw Error(ErrorCode::MalformedHeader,
                  where(source, reader.line_no()) + ": column " + std::to_string(c + 1) + " has no name");
    }
    columns.emplace_back(header[c]);
  }
  for (const auto required : kMetricsColumns) {
    if (std::find(columns.begin(), columns.end(), required) == columns.end()) {
      throw Error(ErrorCode::MissingColumn, source + ": no '" + std::string(required) + "' column");
    }
  }

  std::vector<ModelRow> rows;
  while (const auto line = reader.next()) {
    const std::string at = where(source, reader.line_no());
    const auto fields = split_fields(*line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::RaggedRow, at + ": " + std::to_string(fields.size()) + " fields, header has " +
                                            std::to_string(header.size()));
    }
    ModelRow row;
    row.model = std::string(fields[0]);
    for (std::size_t c = 1; c < fields.size(); ++c) row.values.push_back(parse_real(fields[c], at));
    rows.push_back(std::move(row));
  }
  try {
    return ModelMetricsTable(dataset_name, std::move(columns), std::move(rows));
  } catch (const Error& e) {
    throw e.annotated(source);
  }
}

/// Dataset name is the file stem.
inline ModelMetricsTable load_metrics_table(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_metrics_table(in, path.string(), path.stem().string());
}

}  // namespace roby::io
