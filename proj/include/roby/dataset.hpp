#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "roby/error.hpp"

namespace roby {

using ClassLabel = std::uint32_t;
using RecordIndex = std::uint64_t;

/// One embedded sample. `label` is the class the classifier predicted;
/// `truth` is the ground-truth class when the source carried one.
struct EmbeddingRecord {
  RecordIndex index = 0;
  ClassLabel label = 0;
  std::vector<double> vector;
  std::optional<ClassLabel> truth;

  friend bool operator==(const EmbeddingRecord&, const EmbeddingRecord&) = default;
};

/// Labelled embeddings of one model, validated and stored in canonical
/// (label, index) order with coordinates packed row-major. Records of class k
/// occupy the contiguous range class_range(k).
class EmbeddingDataset {
 public:
  EmbeddingDataset(std::string model_name, std::size_t dims, std::size_t num_classes,
                   std::vector<EmbeddingRecord> records)
      : model_name_(std::move(model_name)), dims_(dims), num_classes_(num_classes) {
    if (dims_ == 0) throw Error(ErrorCode::InvalidDataset, "embedding dimension must be positive");
    if (num_classes_ < 2) {
      throw Error(ErrorCode::InvalidDataset,
                  "need at least 2 classes (got " + std::to_string(num_classes_) + ")");
    }
    bool any_truth = false;
    bool all_truth = true;
    for (const auto& r : records) {
      if (r.vector.size() != dims_) {
        throw Error(ErrorCode::DimensionMismatch,
                    "record " + std::to_string(r.index) + " has " + std::to_string(r.vector.size()) +
                        " coordinates, expected " + std::to_string(dims_));
      }
      if (r.label >= num_classes_) {
        throw Error(ErrorCode::LabelOutOfRange, "record " + std::to_string(r.index) + " has label " +
                                                    std::to_string(r.label) + " outside [0, " +
                                                    std::to_string(num_classes_) + ")");
      }
      for (const double x : r.vector) {
        if (!std::isfinite(x)) {
          throw Error(ErrorCode::NonFiniteInput,
                      "record " + std::to_string(r.index) + " has a non-finite coordinate");
        }
      }
      any_truth = any_truth || r.truth.has_value();
      all_truth = all_truth && r.truth.has_value();
    }
    if (any_truth && !all_truth) {
      throw Error(ErrorCode::InvalidDataset, "ground-truth labels must be given for all records or none");
    }

    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::pair(records[a].label, records[a].index) < std::pair(records[b].label, records[b].index);
    });

    std::vector<RecordIndex> seen(records.size());
    std::transform(records.begin(), records.end(), seen.begin(), [](const auto& r) { return r.index; });
    std::sort(seen.begin(), seen.end());
    if (const auto dup = std::adjacent_find(seen.begin(), seen.end()); dup != seen.end()) {
      throw Error(ErrorCode::DuplicateIndex, "record index " + std::to_string(*dup) + " appears twice");
    }

    indices_.reserve(records.size());
    labels_.reserve(records.size());
    coords_.reserve(records.size() * dims_);
    if (any_truth) truths_.reserve(records.size());
    for (const std::size_t i : order) {
      auto& r = records[i];
      indices_.push_back(r.index);
      labels_.push_back(r.label);
      coords_.insert(coords_.end(), r.vector.begin(), r.vector.end());
      if (any_truth) truths_.push_back(*r.truth);
    }

    class_begin_.assign(num_classes_ + 1, 0);
    for (const ClassLabel l : labels_) ++class_begin_[l + 1];
    for (std::size_t k = 0; k < num_classes_; ++k) {
      if (class_begin_[k + 1] == 0) {
        throw Error(ErrorCode::EmptyClass, "class " + std::to_string(k) + " of " +
                                               std::to_string(num_classes_) + " has no records");
      }
      class_begin_[k + 1] += class_begin_[k];
    }
  }

  const std::string& model_name() const noexcept { return model_name_; }
  std::size_t dims() const noexcept { return dims_; }
  std::size_t num_classes() const noexcept { return num_classes_; }
  std::size_t size() const noexcept { return labels_.size(); }
  bool has_truth() const noexcept { return !truths_.empty(); }

  RecordIndex index(std::size_t i) const { return indices_[i]; }
  ClassLabel label(std::size_t i) const { return labels_[i]; }
  std::optional<ClassLabel> truth(std::size_t i) const {
    return has_truth() ? std::optional<ClassLabel>(truths_[i]) : std::nullopt;
  }
  std::span<const double> vector(std::size_t i) const {
    return std::span<const double>(coords_).subspan(i * dims_, dims_);
  }

  /// Positions [first, second) of class k in canonical order.
  std::pair<std::size_t, std::size_t> class_range(std::size_t k) const {
    return {class_begin_[k], class_begin_[k + 1]};
  }
  std::size_t class_size(std::size_t k) const { return class_begin_[k + 1] - class_begin_[k]; }

  /// Row-major coordinates of all records in canonical order.
  std::span<const double> coordinates() const noexcept { return coords_; }

  EmbeddingRecord record(std::size_t i) const {
    auto v = vector(i);
    return EmbeddingRecord{indices_[i], labels_[i], std::vector<double>(v.begin(), v.end()), truth(i)};
  }

  std::vector<EmbeddingRecord> records() const {
    std::vector<EmbeddingRecord> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(record(i));
    return out;
  }

  friend bool operator==(const EmbeddingDataset&, const EmbeddingDataset&) = default;

 private:
  std::string model_name_;
  std::size_t dims_;
  std::size_t num_classes_;
  std::vector<RecordIndex> indices_;
  std::vector<ClassLabel> labels_;
  std::vector<ClassLabel> truths_;
  std::vector<double> coords_;
  std::vector<std::size_t> class_begin_;
};

/// Keeps only records whose predicted label matches the ground truth.
inline EmbeddingDataset drop_misclassified(const EmbeddingDataset& ds) {
  if (!ds.has_truth()) {
    throw Error(ErrorCode::MissingColumn, "dropping misclassified records needs ground-truth labels");
  }
  std::vector<EmbeddingRecord> kept;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.truth(i) == ds.label(i)) kept.push_back(ds.record(i));
  }
  return EmbeddingDataset(ds.model_name(), ds.dims(), ds.num_classes(), std::move(kept));
}

}  // namespace roby
