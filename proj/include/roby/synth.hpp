#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "roby/dataset.hpp"
#include "roby/error.hpp"

namespace roby {

/// Isotropic Gaussian blobs around fixed class centers.
struct SynthSpec {
  std::size_t num_classes = 3;
  std::size_t samples_per_class = 10;
  std::size_t dims = 2;
  double separation = 1.0;  // l2 distance between centers (K <= M)
  double spread = 1.0;      // per-coordinate standard deviation
  std::uint64_t seed = 0;
};

/// Standard normal deviates from std::mt19937_64 via Box-Muller.
///
/// mt19937_64's output sequence is fixed by the standard, and the uniform and
/// Box-Muller transforms below are spelled out rather than delegated to
/// std::normal_distribution (whose algorithm is implementation-defined), so a
/// seed maps to the same deviates on any conforming toolchain with an IEEE
/// libm.
class PortableNormal {
 public:
  explicit PortableNormal(std::uint64_t seed) : engine_(seed) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  // Top 53 bits, centred in their cell: strictly inside (0, 1).
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Center of class k: coordinate (k mod M) set to separation/sqrt(2) times
/// (1 + k div M). With K <= M this is a regular simplex whose edges all have
/// l2 length `separation`.
inline std::vector<double> synth_center(const SynthSpec& spec, std::size_t k) {
  std::vector<double> c(spec.dims, 0.0);
  c[k % spec.dims] = spec.separation / std::numbers::sqrt2 * static_cast<double>(1 + k / spec.dims);
  return c;
}

inline EmbeddingDataset generate_blobs(const SynthSpec& spec) {
  if (spec.num_classes < 2) throw Error(ErrorCode::InvalidSpec, "num_classes must be >= 2");
  if (spec.samples_per_class < 1) throw Error(ErrorCode::InvalidSpec, "samples_per_class must be >= 1");
  if (spec.dims < 1) throw Error(ErrorCode::InvalidSpec, "dims must be >= 1");
  if (!std::isfinite(spec.separation) || spec.separation < 0.0) {
    throw Error(ErrorCode::InvalidSpec, "separation must be finite and >= 0");
  }
  if (!std::isfinite(spec.spread) || spec.spread <= 0.0) {
    throw Error(ErrorCode::InvalidSpec, "spread must be finite and > 0");
  }

  PortableNormal normal(spec.seed);
  std::vector<EmbeddingRecord> records;
  records.reserve(spec.num_classes * spec.samples_per_class);
  for (std::size_t k = 0; k < spec.num_classes; ++k) {
    const auto center = synth_center(spec, k);
    for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
      EmbeddingRecord r;
      r.index = k * spec.samples_per_class + s;
      r.label = static_cast<ClassLabel>(k);
      r.vector.resize(spec.dims);
      for (std::size_t d = 0; d < spec.dims; ++d) r.vector[d] = center[d] + spec.spread * normal();
      records.push_back(std::move(r));
    }
  }
  return EmbeddingDataset("synth-seed" + std::to_string(spec.seed), spec.dims, spec.num_classes,
                          std::move(records));
}

}  // namespace roby
