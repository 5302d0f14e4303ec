#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "xplain/baseline.hpp"

namespace xplain {

/// An ordered set of retained feature indices (0-based, unique, < K).
class FeatureSubset {
 public:
  FeatureSubset() = default;
  /// Validates uniqueness and range; keeps the given order.
  FeatureSubset(std::vector<std::size_t> indices, std::size_t dimension);

  static FeatureSubset full(std::size_t dimension);
  static FeatureSubset empty(std::size_t dimension) { return FeatureSubset({}, dimension); }

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return indices_.size(); }
  bool contains(std::size_t i) const;

  /// Indices not in this subset, in ascending order.
  FeatureSubset complement() const;

 private:
  std::vector<std::size_t> indices_;
  std::size_t dimension_ = 0;
};

/// Per-feature importance weights, one per input dimension.
struct Attribution {
  std::vector<double> weights;

  Attribution() = default;
  explicit Attribution(std::vector<double> w) : weights(std::move(w)) {}
  std::size_t size() const { return weights.size(); }
  double operator[](std::size_t i) const { return weights[i]; }
  std::span<const double> span() const { return weights; }
};

/// Keeps x on the retained subset, reverts everything else to the baseline.
/// The complement form is obtained by passing the complement subset.
std::vector<double> mask_retain(std::span<const double> x, const FeatureSubset& retained,
                                const BaselineSpec& baseline);

/// Feature order from largest to smallest weight; ties broken by ascending
/// feature index so rankings are reproducible.
std::vector<std::size_t> rank_features(const Attribution& e);

/// The top ceil(s*K) entries of rank_features(e), s in [0,1].
FeatureSubset top_proportion_subset(const Attribution& e, double s);

/// ceil(s*K) as used everywhere a proportion maps to a feature count.
std::size_t retained_count(double s, std::size_t k);

}  // namespace xplain
