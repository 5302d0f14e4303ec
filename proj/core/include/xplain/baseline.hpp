#pragma once

#include <span>
#include <vector>

namespace xplain {

class Dataset;

/// The "feature absent" reference value substituted during masking. The
/// choice is itself an explainer hyperparameter, so it is always explicit.
class BaselineSpec {
 public:
  enum class Kind { Zero, Constant, DatasetMean, Custom };

  static BaselineSpec zero(std::size_t dimension);
  /// Every feature reverts to the same scalar.
  static BaselineSpec constant(double value, std::size_t dimension);
  static BaselineSpec dataset_mean(const Dataset& data);
  /// Arbitrary per-feature reference values.
  static BaselineSpec custom(std::vector<double> values);

  Kind kind() const { return kind_; }
  std::span<const double> values() const { return values_; }
  std::size_t dimension() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  BaselineSpec(Kind kind, std::vector<double> values);
  Kind kind_ = Kind::Zero;
  std::vector<double> values_;
};

}  // namespace xplain
