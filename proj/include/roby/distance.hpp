#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>

#include "roby/error.hpp"

namespace roby {

/// Order of the Minkowski distance: a finite p >= 1, or the l-infinity limit.
class DistanceSpec {
 public:
  static DistanceSpec finite(double p) {
    if (!std::isfinite(p) || p < 1.0) {
      throw Error(ErrorCode::InvalidDistance,
                  "Minkowski order must satisfy p >= 1 (got " + format_order(p) + ")");
    }
    return DistanceSpec(p);
  }

  static DistanceSpec infinity() noexcept {
    return DistanceSpec(std::numeric_limits<double>::infinity());
  }

  /// Accepts "inf", "p=inf" or "p=<real>"; a bare real is also taken as p.
  static DistanceSpec parse(std::string_view text) {
    std::string_view body = text;
    if (body.starts_with("p=")) body.remove_prefix(2);
    if (body == "inf" || body == "infinity" || body == "Inf") return infinity();
    double p = 0.0;
    const auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), p);
    if (body.empty() || ec != std::errc{} || end != body.data() + body.size()) {
      throw Error(ErrorCode::InvalidDistance,
                  "cannot parse distance '" + std::string(text) +
                      "' (expected p=<real> with p >= 1, or inf)");
    }
    return finite(p);
  }

  bool is_infinity() const noexcept { return std::isinf(p_); }
  /// Only meaningful when !is_infinity().
  double p() const noexcept { return p_; }

  /// "inf" or "p=<shortest round-trip real>"; accepted back by parse().
  std::string to_string() const {
    return is_infinity() ? std::string("inf") : "p=" + format_order(p_);
  }

  friend bool operator==(const DistanceSpec&, const DistanceSpec&) = default;

 private:
  explicit DistanceSpec(double p) noexcept : p_(p) {}

  static std::string format_order(double p) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, p);
    return std::string(buf, res.ptr);
  }

  double p_;
};

namespace detail {

// Assumes equal lengths and finite coordinates.
inline double minkowski_unchecked(std::span<const double> a, std::span<const double> b,
                                  const DistanceSpec& spec) noexcept {
  const std::size_t m = a.size();
  if (spec.is_infinity()) {
    double best = 0.0;
    for (std::size_t i = 0; i < m; ++i) best = std::max(best, std::abs(a[i] - b[i]));
    return best;
  }
  const double p = spec.p();
  if (p == 1.0) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += std::abs(a[i] - b[i]);
    return sum;
  }
  if (p == 2.0) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = a[i] - b[i];
      sum += d * d;
    }
    return std::sqrt(sum);
  }
  // Scale by the largest component so |d|^p cannot overflow for large p.
  double scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, std::abs(a[i] - b[i]));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) sum += std::pow(std::abs(a[i] - b[i]) / scale, p);
  return scale * std::pow(sum, 1.0 / p);
}

inline bool all_finite(std::span<const double> v) noexcept {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace detail

/// Minkowski distance between two equal-length vectors.
inline double minkowski_distance(std::span<const double> a, std::span<const double> b,
                                 const DistanceSpec& spec) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "vectors of length " + std::to_string(a.size()) +
                                                  " and " + std::to_string(b.size()));
  }
  if (!detail::all_finite(a) || !detail::all_finite(b)) {
    throw Error(ErrorCode::NonFiniteInput, "distance operand has a non-finite coordinate");
  }
  return detail::minkowski_unchecked(a, b, spec);
}

}  // namespace roby
