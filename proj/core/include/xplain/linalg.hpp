#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace xplain::linalg {

// Dense row-major matrix, just large enough for the toy models and
// least-squares fits in this library (dimensions stay in the tens).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  const std::vector<double>& data() const { return data_; }

  std::vector<double> multiply(std::span<const double> x) const;
  /// A^T x for a row-major A.
  std::vector<double> multiply_transposed(std::span<const double> x) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// lp norm; `p` must be >= 1, infinity is spelled as p = std::numeric_limits<double>::infinity().
double norm_lp(std::span<const double> a, double p);
std::vector<double> sub(std::span<const double> a, std::span<const double> b);
std::vector<double> add(std::span<const double> a, std::span<const double> b);
std::vector<double> scale(std::span<const double> a, double s);

double mean(std::span<const double> a);
/// Sample variance (N-1 denominator); 0 for length < 2.
double variance(std::span<const double> a);
/// Sample covariance (N-1 denominator).
double covariance(std::span<const double> a, std::span<const double> b);

/// Pearson correlation. Returns 0 and sets *degenerate when either input has
/// zero variance.
double pearson(std::span<const double> a, std::span<const double> b,
               bool* degenerate = nullptr);

/// Throws InvalidInput if any entry is NaN or Inf.
void check_finite(std::span<const double> a, const char* what);
bool all_finite(std::span<const double> a);

/// Solves the symmetric positive semi-definite system A x = b by Gaussian
/// elimination with partial pivoting. Throws DegenerateInput on a (numerically)
/// singular matrix.
std::vector<double> solve(Matrix a, std::vector<double> b);

}  // namespace xplain::linalg
