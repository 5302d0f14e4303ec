#include "xplain/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xplain/errors.hpp"

namespace xplain::linalg {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw InvalidInput("matrix data size does not match rows*cols");
  }
}

std::vector<double> Matrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw InvalidInput("matrix-vector dimension mismatch");
  std::vector<double> out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = dot(row(r), x);
  return out;
}

std::vector<double> Matrix::multiply_transposed(std::span<const double> x) const {
  if (x.size() != rows_) throw InvalidInput("matrix^T-vector dimension mismatch");
  std::vector<double> out(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out[c] += data_[r * cols_ + c] * x[r];
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_lp(std::span<const double> a, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
  }
  if (p < 1.0) throw InvalidInput("lp norm requires p >= 1");
  if (p == 1.0) {
    double s = 0.0;
    for (double v : a) s += std::abs(v);
    return s;
  }
  if (p == 2.0) return norm2(a);
  double s = 0.0;
  for (double v : a) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

std::vector<double> sub(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("sub: dimension mismatch");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

std::vector<double> add(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("add: dimension mismatch");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

std::vector<double> scale(std::span<const double> a, double s) {
  std::vector<double> out(a.begin(), a.end());
  for (double& v : out) v *= s;
  return out;
}

double mean(std::span<const double> a) {
  if (a.empty()) return 0.0;
  double s = 0.0;
  for (double v : a) s += v;
  return s / static_cast<double>(a.size());
}

double variance(std::span<const double> a) {
  if (a.size() < 2) return 0.0;
  const double m = mean(a);
  double s = 0.0;
  for (double v : a) s += (v - m) * (v - m);
  return s / static_cast<double>(a.size() - 1);
}

double covariance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("covariance: dimension mismatch");
  if (a.size() < 2) return 0.0;
  const double ma = mean(a);
  const double mb = mean(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / static_cast<double>(a.size() - 1);
}

double pearson(std::span<const double> a, std::span<const double> b, bool* degenerate) {
  const double va = variance(a);
  const double vb = variance(b);
  if (degenerate != nullptr) *degenerate = false;
  if (va == 0.0 || vb == 0.0) {
    if (degenerate != nullptr) *degenerate = true;
    return 0.0;
  }
  return covariance(a, b) / std::sqrt(va * vb);
}

void check_finite(std::span<const double> a, const char* what) {
  for (double v : a) {
    if (!std::isfinite(v)) {
      throw InvalidInput(std::string(what) + ": non-finite entry");
    }
  }
}

bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

std::vector<double> solve(Matrix a, std::vector<double> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw InvalidInput("solve: dimension mismatch");

  double scale_ref = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) scale_ref = std::max(scale_ref, std::abs(a(i, j)));
  }
  const double tol = std::max(scale_ref, 1.0) * 1e-12;

  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (std::abs(a(pivot, col)) <= tol) {
      throw DegenerateInput("solve: singular matrix");
    }
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }

  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

}  // namespace xplain::linalg
