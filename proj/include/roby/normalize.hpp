#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "roby/error.hpp"

namespace roby {

/// Tag recorded in every report for the standardization rule below.
inline constexpr std::string_view kNormalizationTag = "minmax-per-list";

/// Affine map of the list onto [0, 1] by its own min and max.
/// A list with zero range maps to all zeros.
inline std::vector<double> minmax_normalize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "cannot normalize an empty list");
  for (const double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, "cannot normalize a non-finite value");
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  std::vector<double> out(values.size(), 0.0);
  if (range > 0.0) {
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / range;
  }
  return out;
}

/// Arithmetic mean, summed front to back.
inline double mean(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "mean of an empty list");
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace roby
