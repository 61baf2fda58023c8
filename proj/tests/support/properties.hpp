#pragma once

// Dataset transforms and report comparisons shared by the property tests and
// the acceptance suite.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "naive_reference.hpp"
#include "roby/metrics.hpp"

namespace roby::testing {

/// Largest absolute difference over every numeric report field.
inline double max_field_diff(const MetricReport& a, const MetricReport& b) {
  double worst = std::max({std::fabs(a.fsa - b.fsa), std::fabs(a.fsd - b.fsd), std::fabs(a.roby - b.roby)});
  auto lists = [&](const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) {
      worst = INFINITY;
      return;
    }
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::fabs(x[i] - y[i]));
  };
  lists(a.fsa_per_class, b.fsa_per_class);
  lists(a.fsd_per_pair, b.fsd_per_pair);
  lists(a.roby_per_pair, b.roby_per_pair);
  return worst;
}

inline double max_field_diff(const MetricReport& a, const NaiveReport& b) {
  MetricReport c = a;
  c.fsa = b.fsa;
  c.fsd = b.fsd;
  c.roby = b.roby;
  c.fsa_per_class = b.fsa_per_class;
  c.fsd_per_pair = b.fsd_per_pair;
  c.roby_per_pair = b.roby_per_pair;
  return max_field_diff(a, c);
}

inline double max_aggregate_diff(const MetricReport& a, const MetricReport& b) {
  return std::max({std::fabs(a.fsa - b.fsa), std::fabs(a.fsd - b.fsd), std::fabs(a.roby - b.roby)});
}

inline EmbeddingDataset shuffled(const EmbeddingDataset& ds, std::uint64_t seed) {
  auto rs = ds.records();
  std::mt19937_64 rng(seed);
  std::shuffle(rs.begin(), rs.end(), rng);
  return EmbeddingDataset(ds.model_name(), ds.dims(), ds.num_classes(), std::move(rs));
}

inline EmbeddingDataset translated(const EmbeddingDataset& ds, const std::vector<double>& t) {
  auto rs = ds.records();
  for (auto& r : rs)
    for (std::size_t d = 0; d < r.vector.size(); ++d) r.vector[d] += t[d];
  return EmbeddingDataset(ds.model_name(), ds.dims(), ds.num_classes(), std::move(rs));
}

inline EmbeddingDataset scaled(const EmbeddingDataset& ds, double s) {
  auto rs = ds.records();
  for (auto& r : rs)
    for (auto& x : r.vector) x *= s;
  return EmbeddingDataset(ds.model_name(), ds.dims(), ds.num_classes(), std::move(rs));
}

/// Applies label -> perm[label].
inline EmbeddingDataset relabeled(const EmbeddingDataset& ds, const std::vector<ClassLabel>& perm) {
  auto rs = ds.records();
  for (auto& r : rs) r.label = perm[r.label];
  return EmbeddingDataset(ds.model_name(), ds.dims(), ds.num_classes(), std::move(rs));
}

inline std::vector<ClassLabel> random_permutation(std::size_t k, std::uint64_t seed) {
  std::vector<ClassLabel> p(k);
  std::iota(p.begin(), p.end(), ClassLabel{0});
  std::mt19937_64 rng(seed);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace roby::testing
