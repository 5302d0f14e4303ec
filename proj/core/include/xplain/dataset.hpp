#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace xplain {

struct ColumnInfo {
  std::string name;
  bool is_protected = false;
};

/// An N x K table of numeric rows with optional labels and an optional
/// group column (finite set of group values).
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t dimension, std::vector<double> rows_flat,
          std::vector<ColumnInfo> columns = {});

  std::size_t size() const { return rows_; }
  std::size_t dimension() const { return dimension_; }
  std::span<const double> row(std::size_t i) const;

  bool has_labels() const { return !labels_.empty(); }
  std::span<const double> labels() const { return labels_; }
  void set_labels(std::vector<double> labels);

  bool has_groups() const { return !groups_.empty(); }
  std::span<const double> groups() const { return groups_; }
  void set_groups(std::vector<double> groups);
  /// Distinct group values in order of first appearance.
  std::vector<double> group_values() const;
  std::vector<std::size_t> rows_in_group(double group) const;

  const std::vector<ColumnInfo>& columns() const { return columns_; }
  void set_protected(std::size_t feature, bool value = true);
  /// Empirical values of one feature across all rows.
  std::vector<double> column_values(std::size_t feature) const;
  std::vector<double> column_mean() const;

  void append_row(std::span<const double> x);

 private:
  std::size_t rows_ = 0;
  std::size_t dimension_ = 0;
  std::vector<double> data_;
  std::vector<double> labels_;
  std::vector<double> groups_;
  std::vector<ColumnInfo> columns_;
};

}  // namespace xplain
