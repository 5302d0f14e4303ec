#include "xplain/subset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xplain/errors.hpp"
#include "xplain/linalg.hpp"

namespace xplain {

FeatureSubset::FeatureSubset(std::vector<std::size_t> indices, std::size_t dimension)
    : indices_(std::move(indices)), dimension_(dimension) {
  std::vector<bool> seen(dimension_, false);
  for (std::size_t i : indices_) {
    if (i >= dimension_) throw InvalidInput("feature index out of range");
    if (seen[i]) throw InvalidInput("duplicate feature index in subset");
    seen[i] = true;
  }
}

FeatureSubset FeatureSubset::full(std::size_t dimension) {
  std::vector<std::size_t> all(dimension);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return FeatureSubset(std::move(all), dimension);
}

bool FeatureSubset::contains(std::size_t i) const {
  return std::find(indices_.begin(), indices_.end(), i) != indices_.end();
}

FeatureSubset FeatureSubset::complement() const {
  std::vector<bool> in(dimension_, false);
  for (std::size_t i : indices_) in[i] = true;
  std::vector<std::size_t> rest;
  rest.reserve(dimension_ - indices_.size());
  for (std::size_t i = 0; i < dimension_; ++i) {
    if (!in[i]) rest.push_back(i);
  }
  return FeatureSubset(std::move(rest), dimension_);
}

std::vector<double> mask_retain(std::span<const double> x, const FeatureSubset& retained,
                                const BaselineSpec& baseline) {
  if (retained.dimension() != x.size() || baseline.dimension() != x.size()) {
    throw InvalidInput("mask_retain: dimension mismatch");
  }
  linalg::check_finite(x, "mask_retain input");
  std::vector<double> out(baseline.values().begin(), baseline.values().end());
  for (std::size_t i : retained.indices()) out[i] = x[i];
  return out;
}

std::vector<std::size_t> rank_features(const Attribution& e) {
  linalg::check_finite(e.weights, "attribution");
  std::vector<std::size_t> order(e.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return e.weights[a] > e.weights[b];
  });
  return order;
}

std::size_t retained_count(double s, std::size_t k) {
  if (!(s >= 0.0 && s <= 1.0)) throw InvalidInput("retention proportion outside [0,1]");
  return static_cast<std::size_t>(std::ceil(s * static_cast<double>(k)));
}

FeatureSubset top_proportion_subset(const Attribution& e, double s) {
  const std::size_t count = retained_count(s, e.size());
  auto order = rank_features(e);
  order.resize(count);
  return FeatureSubset(std::move(order), e.size());
}

}  // namespace xplain
