#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roby/error.hpp"
#include "roby/normalize.hpp"

namespace roby {

/// Column names of a per-dataset metrics table, in file order after `model`.
inline constexpr std::array<std::string_view, 9> kMetricsColumns = {
    "ACC", "ASR_INF", "FSA_INF", "FSD_INF", "ROBY_INF", "ASR_2", "FSA_2", "FSD_2", "ROBY_2"};

struct ModelRow {
  std::string model;
  std::vector<double> values;  // aligned with ModelMetricsTable::columns()
  friend bool operator==(const ModelRow&, const ModelRow&) = default;
};

/// One row per model, one real-valued column per metric. Every row carries
/// every column.
class ModelMetricsTable {
 public:
  ModelMetricsTable(std::string dataset_name, std::vector<std::string> columns, std::vector<ModelRow> rows)
      : dataset_name_(std::move(dataset_name)), columns_(std::move(columns)), rows_(std::move(rows)) {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (std::find(columns_.begin() + static_cast<std::ptrdiff_t>(c) + 1, columns_.end(), columns_[c]) !=
          columns_.end()) {
        throw Error(ErrorCode::MalformedHeader, "column '" + columns_[c] + "' appears twice");
      }
    }
    for (const auto& row : rows_) {
      if (row.values.size() != columns_.size()) {
        throw Error(ErrorCode::RaggedRow, "row '" + row.model + "' has " + std::to_string(row.values.size()) +
                                              " values for " + std::to_string(columns_.size()) + " columns");
      }
      for (const double v : row.values) {
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "row '" + row.model + "' has a non-finite value");
      }
    }
  }

  const std::string& dataset_name() const noexcept { return dataset_name_; }
  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<ModelRow>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }

  bool has_column(std::string_view name) const {
    return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
  }

  std::size_t column_index(std::string_view name) const {
    const auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end()) {
      throw Error(ErrorCode::UnknownColumn, "no column '" + std::string(name) + "' in table '" + dataset_name_ + "'");
    }
    return static_cast<std::size_t>(it - columns_.begin());
  }

  std::vector<double> column(std::string_view name) const {
    const std::size_t c = column_index(name);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) out.push_back(row.values[c]);
    return out;
  }

  double value(std::string_view model, std::string_view column_name) const {
    const std::size_t c = column_index(column_name);
    for (const auto& row : rows_) {
      if (row.model == model) return row.values[c];
    }
    throw Error(ErrorCode::UnknownColumn, "no model '" + std::string(model) + "' in table '" + dataset_name_ + "'");
  }

 private:
  std::string dataset_name_;
  std::vector<std::string> columns_;
  std::vector<ModelRow> rows_;
};

/// Pearson product-moment correlation, clamped to [-1, 1].
/// A constant sequence is an error rather than r = 0.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "sequences of length " + std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
  if (x.size() < 3) {
    throw Error(ErrorCode::TooFewPoints, "need at least 3 points, got " + std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw Error(ErrorCode::NonFiniteInput, "non-finite sample");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::ZeroVariance, "a sequence is constant");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Model names ordered by a column; ties go to the lexicographically smaller name.
inline std::vector<std::string> rank_models(const ModelMetricsTable& table, std::string_view column,
                                            bool descending) {
  const std::size_t c = table.column_index(column);
  std::vector<const ModelRow*> rows;
  for (const auto& r : table.rows()) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [&](const ModelRow* a, const ModelRow* b) {
    const double va = a->values[c];
    const double vb = b->values[c];
    if (va != vb) return descending ? va > vb : va < vb;
    return a->model < b->model;
  });
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const auto* r : rows) out.push_back(r->model);
  return out;
}

struct CorrelationResult {
  std::string column_x;
  std::string column_y;
  double r = 0.0;
  std::size_t n = 0;
  /// Table the result came from; "mean" for cross-table averages.
  std::string dataset;
  friend bool operator==(const CorrelationResult&, const CorrelationResult&) = default;
};

inline CorrelationResult correlate(const ModelMetricsTable& table, std::string_view x, std::string_view y) {
  try {
    return CorrelationResult{std::string(x), std::string(y), pearson(table.column(x), table.column(y)),
                             table.size(), table.dataset_name()};
  } catch (const Error& e) {
    throw e.annotated(table.dataset_name() + " (" + std::string(x) + " vs " + std::string(y) + ")");
  }
}

/// One result per target column, each correlated against `against`.
inline std::vector<CorrelationResult> correlation_matrix(const ModelMetricsTable& table,
                                                         std::span<const std::string> targets,
                                                         std::string_view against) {
  table.column_index(against);
  for (const auto& t : targets) table.column_index(t);
  std::vector<CorrelationResult> out;
  out.reserve(targets.size());
  for (const auto& t : targets) out.push_back(correlate(table, t, against));
  return out;
}

/// r(target, against) averaged over several tables.
inline CorrelationResult mean_correlation(std::span<const ModelMetricsTable> tables, std::string_view target,
                                          std::string_view against) {
  if (tables.empty()) throw Error(ErrorCode::EmptyInput, "no tables to average over");
  std::vector<double> rs;
  rs.reserve(tables.size());
  for (const auto& t : tables) rs.push_back(correlate(t, target, against).r);
  return CorrelationResult{std::string(target), std::string(against), mean(rs), tables.size(), "mean"};
}

/// Average r of ROBY_2/ROBY_INF against ASR_2/ASR_INF across datasets.
/// Indexed [asr][roby] with 0 = l2 form and 1 = l-infinity form.
struct CrossNormSummary {
  static constexpr std::array<std::string_view, 2> kAsr = {"ASR_2", "ASR_INF"};
  static constexpr std::array<std::string_view, 2> kRoby = {"ROBY_2", "ROBY_INF"};
  std::array<std::array<double, 2>, 2> r{};
  std::size_t datasets = 0;

  std::vector<CorrelationResult> results() const {
    std::vector<CorrelationResult> out;
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b)
        out.push_back({std::string(kRoby[b]), std::string(kAsr[a]), r[a][b], datasets, "mean"});
    return out;
  }
};

inline CrossNormSummary cross_norm_summary(std::span<const ModelMetricsTable> tables) {
  for (const auto& t : tables) {
    for (const auto col : {"ROBY_2", "ROBY_INF", "ASR_2", "ASR_INF"}) {
      if (!t.has_column(col)) {
        throw Error(ErrorCode::MissingColumn, "table '" + t.dataset_name() + "' lacks column " + col);
      }
    }
  }
  CrossNormSummary s;
  s.datasets = tables.size();
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      s.r[a][b] = mean_correlation(tables, CrossNormSummary::kRoby[b], CrossNormSummary::kAsr[a]).r;
  return s;
}

}  // namespace roby
