#include "xplain/dataset.hpp"

#include <algorithm>

#include "xplain/errors.hpp"
#include "xplain/linalg.hpp"

namespace xplain {

Dataset::Dataset(std::size_t dimension, std::vector<double> rows_flat,
                 std::vector<ColumnInfo> columns)
    : dimension_(dimension), data_(std::move(rows_flat)), columns_(std::move(columns)) {
  if (dimension_ == 0) throw InvalidInput("dataset dimension must be positive");
  if (data_.size() % dimension_ != 0) {
    throw InvalidInput("dataset row data is not a multiple of the dimension");
  }
  rows_ = data_.size() / dimension_;
  linalg::check_finite(data_, "dataset rows");
  if (columns_.empty()) {
    columns_.resize(dimension_);
    for (std::size_t i = 0; i < dimension_; ++i) {
      columns_[i].name = "x" + std::to_string(i);
    }
  }
  if (columns_.size() != dimension_) {
    throw InvalidInput("column metadata size does not match dimension");
  }
}

std::span<const double> Dataset::row(std::size_t i) const {
  if (i >= rows_) throw InvalidInput("dataset row index out of range");
  return {data_.data() + i * dimension_, dimension_};
}

void Dataset::set_labels(std::vector<double> labels) {
  if (labels.size() != rows_) throw InvalidInput("label count does not match row count");
  linalg::check_finite(labels, "labels");
  labels_ = std::move(labels);
}

void Dataset::set_groups(std::vector<double> groups) {
  if (groups.size() != rows_) throw InvalidInput("group count does not match row count");
  linalg::check_finite(groups, "groups");
  groups_ = std::move(groups);
}

std::vector<double> Dataset::group_values() const {
  std::vector<double> values;
  for (double g : groups_) {
    if (std::find(values.begin(), values.end(), g) == values.end()) values.push_back(g);
  }
  return values;
}

std::vector<std::size_t> Dataset::rows_in_group(double group) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (groups_[i] == group) out.push_back(i);
  }
  return out;
}

void Dataset::set_protected(std::size_t feature, bool value) {
  if (feature >= dimension_) throw InvalidInput("protected feature index out of range");
  columns_[feature].is_protected = value;
}

std::vector<double> Dataset::column_values(std::size_t feature) const {
  if (feature >= dimension_) throw InvalidInput("feature index out of range");
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = data_[i * dimension_ + feature];
  return out;
}

std::vector<double> Dataset::column_mean() const {
  std::vector<double> mean(dimension_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < dimension_; ++j) mean[j] += data_[i * dimension_ + j];
  }
  if (rows_ > 0) {
    for (double& v : mean) v /= static_cast<double>(rows_);
  }
  return mean;
}

void Dataset::append_row(std::span<const double> x) {
  if (x.size() != dimension_) throw InvalidInput("appended row has wrong dimension");
  linalg::check_finite(x, "appended row");
  if (!labels_.empty() || !groups_.empty()) {
    throw InvalidInput("cannot append rows once labels or groups are set");
  }
  data_.insert(data_.end(), x.begin(), x.end());
  ++rows_;
}

}  // namespace xplain
