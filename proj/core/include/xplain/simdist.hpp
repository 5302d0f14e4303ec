#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace xplain::simdist {

enum class DistanceKind {
  Lp,
  Mse,
  Ssim,
  Pearson,
  Spearman,
  Kendall,
  TopKIntersection,
  CosineSimilarity,
  CosineDissimilarity,
};

/// A distance/similarity measure between two explanations, pluggable as the
/// comparison function of every sensitivity metric. Correlation-style kinds
/// report similarity (higher = closer); lp/mse report distance.
struct DistanceSpec {
  DistanceKind kind = DistanceKind::Lp;
  double p = 2.0;              // for Lp
  double c1 = 1e-4;            // SSIM stabilizers
  double c2 = 1e-4;
  std::size_t k = 1;           // for TopKIntersection
  /// Rescale both vectors so absolute weights sum to one before comparing.
  /// Defaults on for the magnitude-sensitive kinds (ssim, mse, pearson).
  bool normalize = false;

  static DistanceSpec lp(double p = 2.0);
  static DistanceSpec mse(bool normalize = true);
  static DistanceSpec ssim(double c1 = 1e-4, double c2 = 1e-4, bool normalize = true);
  static DistanceSpec pearson(bool normalize = true);
  static DistanceSpec spearman();
  static DistanceSpec kendall();
  static DistanceSpec topk(std::size_t k);
  static DistanceSpec cosine_similarity();
  static DistanceSpec cosine_dissimilarity();

  static DistanceSpec from_name(const std::string& name);
  std::string name() const;
};

struct DistanceDiagnostics {
  bool degenerate = false;     // zero-variance input hit a defined-0 path
  std::string message;
};

/// Distance/similarity between two equal-length attribution vectors.
/// Zero-variance inputs of correlation kinds yield 0 with the diagnostics
/// flag set; a zero vector under the cosine kinds throws DegenerateInput.
double explanation_distance(const DistanceSpec& spec, std::span<const double> a,
                            std::span<const double> b,
                            DistanceDiagnostics* diag = nullptr);

/// |x . E| / ||E||; scale-invariant in E. Throws DegenerateInput for ||E|| = 0.
double alignment(std::span<const double> x, std::span<const double> e);

/// Average ranks (1-based, ties share their mean rank).
std::vector<double> average_ranks(std::span<const double> v);

double spearman_rank_correlation(std::span<const double> a, std::span<const double> b,
                                 DistanceDiagnostics* diag = nullptr);
double kendall_rank_correlation(std::span<const double> a, std::span<const double> b,
                                DistanceDiagnostics* diag = nullptr);

}  // namespace xplain::simdist
