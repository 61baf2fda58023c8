#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roby/dataset.hpp"
#include "roby/distance.hpp"
#include "roby/error.hpp"
#include "roby/normalize.hpp"
#include "roby/parallel.hpp"

namespace roby {

/// Unordered class pair, always i < j.
struct ClassPair {
  std::size_t i = 0;
  std::size_t j = 0;
  friend bool operator==(const ClassPair&, const ClassPair&) = default;
};

constexpr std::size_t pair_count(std::size_t num_classes) noexcept {
  return num_classes < 2 ? 0 : num_classes * (num_classes - 1) / 2;
}

/// All pairs (i, j), i < j, in lexicographic order. Every per-pair list in
/// this library is indexed this way.
inline std::vector<ClassPair> class_pairs(std::size_t num_classes) {
  std::vector<ClassPair> out;
  out.reserve(pair_count(num_classes));
  for (std::size_t i = 0; i + 1 < num_classes; ++i)
    for (std::size_t j = i + 1; j < num_classes; ++j) out.push_back({i, j});
  return out;
}

class ClassCenters {
 public:
  ClassCenters(std::size_t dims, std::vector<double> packed) : dims_(dims), coords_(std::move(packed)) {
    if (dims_ == 0 || coords_.size() % dims_ != 0) {
      throw Error(ErrorCode::DimensionMismatch, "packed centers do not split into rows of the given dimension");
    }
  }

  explicit ClassCenters(const std::vector<std::vector<double>>& centers)
      : dims_(centers.empty() ? 0 : centers.front().size()) {
    if (centers.empty() || dims_ == 0) throw Error(ErrorCode::EmptyInput, "no class centers");
    for (const auto& c : centers) {
      if (c.size() != dims_) throw Error(ErrorCode::DimensionMismatch, "class centers differ in length");
      if (!detail::all_finite(c)) throw Error(ErrorCode::NonFiniteInput, "class center has a non-finite coordinate");
      coords_.insert(coords_.end(), c.begin(), c.end());
    }
  }

  std::size_t num_classes() const noexcept { return coords_.size() / dims_; }
  std::size_t dims() const noexcept { return dims_; }
  std::span<const double> center(std::size_t k) const {
    return std::span<const double>(coords_).subspan(k * dims_, dims_);
  }

  friend bool operator==(const ClassCenters&, const ClassCenters&) = default;

 private:
  std::size_t dims_;
  std::vector<double> coords_;
};

/// Mean embedding of each class, summed in canonical record order.
inline ClassCenters compute_class_centers(const EmbeddingDataset& ds, Parallelism par = {}) {
  const std::size_t m = ds.dims();
  std::vector<double> packed(ds.num_classes() * m, 0.0);
  parallel_for(ds.num_classes(), par, [&](std::size_t k) {
    const auto [first, last] = ds.class_range(k);
    if (first == last) throw Error(ErrorCode::EmptyClass, "class " + std::to_string(k) + " has no records");
    double* acc = packed.data() + k * m;
    for (std::size_t r = first; r < last; ++r) {
      const auto v = ds.vector(r);
      for (std::size_t d = 0; d < m; ++d) acc[d] += v[d];
    }
    const double n = static_cast<double>(last - first);
    for (std::size_t d = 0; d < m; ++d) acc[d] /= n;
  });
  return ClassCenters(m, std::move(packed));
}

/// Per class: mean distance of its records to its center (before normalization).
inline std::vector<double> fsa_raw_per_class(const EmbeddingDataset& ds, const ClassCenters& centers,
                                             const DistanceSpec& spec, Parallelism par = {}) {
  if (centers.num_classes() != ds.num_classes() || centers.dims() != ds.dims()) {
    throw Error(ErrorCode::DimensionMismatch, "class centers do not match the dataset shape");
  }
  std::vector<double> raw(ds.num_classes(), 0.0);
  parallel_for(ds.num_classes(), par, [&](std::size_t k) {
    const auto [first, last] = ds.class_range(k);
    const auto c = centers.center(k);
    double sum = 0.0;
    for (std::size_t r = first; r < last; ++r) sum += detail::minkowski_unchecked(ds.vector(r), c, spec);
    raw[k] = sum / static_cast<double>(last - first);
  });
  return raw;
}

/// 1 - mean(minmax(raw)). Higher means tighter classes.
inline double fsa_aggregate(std::span<const double> raw) {
  if (raw.empty()) throw Error(ErrorCode::EmptyInput, "no per-class values to aggregate");
  return 1.0 - mean(minmax_normalize(raw));
}

/// Center-to-center distance for every class pair.
inline std::vector<double> fsd_raw_per_pair(const ClassCenters& centers, const DistanceSpec& spec,
                                            Parallelism par = {}) {
  const std::size_t k = centers.num_classes();
  if (k < 2) throw Error(ErrorCode::InvalidDataset, "need at least 2 class centers");
  const auto pairs = class_pairs(k);
  std::vector<double> raw(pairs.size(), 0.0);
  parallel_for(pairs.size(), par, [&](std::size_t n) {
    raw[n] = detail::minkowski_unchecked(centers.center(pairs[n].i), centers.center(pairs[n].j), spec);
  });
  return raw;
}

inline double fsd_aggregate(std::span<const double> raw_pairs) {
  if (raw_pairs.empty()) throw Error(ErrorCode::EmptyInput, "no per-pair values to aggregate");
  return mean(minmax_normalize(raw_pairs));
}

/// FSA_i + FSA_j - dist(c_i, c_j) on raw per-class values. May be negative.
inline std::vector<double> roby_raw_per_pair(std::span<const double> fsa_raw, const ClassCenters& centers,
                                             const DistanceSpec& spec, Parallelism par = {}) {
  if (fsa_raw.size() != centers.num_classes()) {
    throw Error(ErrorCode::DimensionMismatch, "per-class FSA list has " + std::to_string(fsa_raw.size()) +
                                                  " entries for " + std::to_string(centers.num_classes()) +
                                                  " centers");
  }
  const auto center_dist = fsd_raw_per_pair(centers, spec, par);
  const auto pairs = class_pairs(centers.num_classes());
  std::vector<double> raw(pairs.size());
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    raw[n] = fsa_raw[pairs[n].i] + fsa_raw[pairs[n].j] - center_dist[n];
  }
  return raw;
}

inline double roby_aggregate(std::span<const double> raw_pairs) {
  if (raw_pairs.empty()) throw Error(ErrorCode::EmptyInput, "no per-pair values to aggregate");
  return mean(minmax_normalize(raw_pairs));
}

inline constexpr std::string_view kDegenerateWarning = "K<3: aggregates degenerate";

struct MetricReport {
  std::string model;
  std::size_t num_classes = 0;
  std::size_t dims = 0;
  std::size_t num_records = 0;
  DistanceSpec distance = DistanceSpec::infinity();
  std::string normalization{kNormalizationTag};

  std::vector<double> fsa_per_class;
  double fsa = 0.0;
  std::vector<double> fsd_per_pair;  // indexed by class_pairs(num_classes)
  double fsd = 0.0;
  std::vector<double> roby_per_pair;  // indexed by class_pairs(num_classes)
  double roby = 0.0;

  /// Set when K < 3: min-max over one or two values pins the aggregates.
  std::optional<std::string> warning;

  friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

/// Centers, per-class FSA, per-pair FSD and ROBY, and their aggregates.
/// Deterministic for a given dataset whatever the thread count.
inline MetricReport evaluate(const EmbeddingDataset& ds, const DistanceSpec& spec, Parallelism par = {}) {
  auto stage = [](const char* name, auto&& fn) {
    try {
      return fn();
    } catch (const Error& e) {
      throw e.annotated(std::string("stage '") + name + "'");
    }
  };

  MetricReport rep;
  rep.model = ds.model_name();
  rep.num_classes = ds.num_classes();
  rep.dims = ds.dims();
  rep.num_records = ds.size();
  rep.distance = spec;

  const auto centers = stage("centers", [&] { return compute_class_centers(ds, par); });
  rep.fsa_per_class = stage("fsa_raw", [&] { return fsa_raw_per_class(ds, centers, spec, par); });
  rep.fsa = stage("fsa", [&] { return fsa_aggregate(rep.fsa_per_class); });
  rep.fsd_per_pair = stage("fsd_raw", [&] { return fsd_raw_per_pair(centers, spec, par); });
  rep.fsd = stage("fsd", [&] { return fsd_aggregate(rep.fsd_per_pair); });
  rep.roby_per_pair = stage("roby_raw", [&] {
    const auto pairs = class_pairs(ds.num_classes());
    std::vector<double> raw(pairs.size());
    for (std::size_t n = 0; n < pairs.size(); ++n) {
      raw[n] = rep.fsa_per_class[pairs[n].i] + rep.fsa_per_class[pairs[n].j] - rep.fsd_per_pair[n];
    }
    return raw;
  });
  rep.roby = stage("roby", [&] { return roby_aggregate(rep.roby_per_pair); });

  if (ds.num_classes() < 3) rep.warning = std::string(kDegenerateWarning);
  return rep;
}

}  // namespace roby
