#include "xplain/baseline.hpp"

#include "xplain/dataset.hpp"
#include "xplain/errors.hpp"
#include "xplain/linalg.hpp"

namespace xplain {

BaselineSpec::BaselineSpec(Kind kind, std::vector<double> values)
    : kind_(kind), values_(std::move(values)) {
  linalg::check_finite(values_, "baseline");
}

BaselineSpec BaselineSpec::zero(std::size_t dimension) {
  return BaselineSpec(Kind::Zero, std::vector<double>(dimension, 0.0));
}

BaselineSpec BaselineSpec::constant(double value, std::size_t dimension) {
  return BaselineSpec(Kind::Constant, std::vector<double>(dimension, value));
}

BaselineSpec BaselineSpec::dataset_mean(const Dataset& data) {
  if (data.size() == 0) throw InvalidInput("dataset-mean baseline on empty dataset");
  return BaselineSpec(Kind::DatasetMean, data.column_mean());
}

BaselineSpec BaselineSpec::custom(std::vector<double> values) {
  return BaselineSpec(Kind::Custom, std::move(values));
}

}  // namespace xplain
