#include "xplain/simdist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xplain/errors.hpp"
#include "xplain/linalg.hpp"
#include "xplain/subset.hpp"

namespace xplain::simdist {

namespace {

void require_same_size(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("explanation lengths differ");
  if (a.empty()) throw InvalidInput("empty explanation");
  linalg::check_finite(a, "explanation a");
  linalg::check_finite(b, "explanation b");
}

std::vector<double> normalize_abs_sum(std::span<const double> v) {
  double total = 0.0;
  for (double x : v) total += std::abs(x);
  std::vector<double> out(v.begin(), v.end());
  if (total == 0.0) return out;  // all-zero vector is left as-is
  for (double& x : out) x /= total;
  return out;
}

void set_degenerate(DistanceDiagnostics* diag, const char* message) {
  if (diag != nullptr) {
    diag->degenerate = true;
    diag->message = message;
  }
}

double ssim_index(std::span<const double> a, std::span<const double> b, double c1, double c2) {
  const double mu_a = linalg::mean(a);
  const double mu_b = linalg::mean(b);
  const double var_a = linalg::variance(a);
  const double var_b = linalg::variance(b);
  const double cov = linalg::covariance(a, b);
  const double num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
  const double den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
  return num / den;
}

double mse(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = linalg::norm2(a);
  const double nb = linalg::norm2(b);
  if (na == 0.0 || nb == 0.0) {
    throw DegenerateInput("cosine similarity of a zero vector is undefined");
  }
  return linalg::dot(a, b) / (na * nb);
}

}  // namespace

DistanceSpec DistanceSpec::lp(double p) { return {.kind = DistanceKind::Lp, .p = p}; }
DistanceSpec DistanceSpec::mse(bool normalize) {
  return {.kind = DistanceKind::Mse, .normalize = normalize};
}
DistanceSpec DistanceSpec::ssim(double c1, double c2, bool normalize) {
  if (c1 <= 0.0 || c2 <= 0.0) throw InvalidInput("ssim constants must be positive");
  return {.kind = DistanceKind::Ssim, .c1 = c1, .c2 = c2, .normalize = normalize};
}
DistanceSpec DistanceSpec::pearson(bool normalize) {
  return {.kind = DistanceKind::Pearson, .normalize = normalize};
}
DistanceSpec DistanceSpec::spearman() { return {.kind = DistanceKind::Spearman}; }
DistanceSpec DistanceSpec::kendall() { return {.kind = DistanceKind::Kendall}; }
DistanceSpec DistanceSpec::topk(std::size_t k) {
  if (k == 0) throw InvalidInput("top-k intersection requires k >= 1");
  return {.kind = DistanceKind::TopKIntersection, .k = k};
}
DistanceSpec DistanceSpec::cosine_similarity() {
  return {.kind = DistanceKind::CosineSimilarity};
}
DistanceSpec DistanceSpec::cosine_dissimilarity() {
  return {.kind = DistanceKind::CosineDissimilarity};
}

DistanceSpec DistanceSpec::from_name(const std::string& name) {
  if (name == "l1") return lp(1.0);
  if (name == "l2" || name == "lp") return lp(2.0);
  if (name == "linf") return lp(std::numeric_limits<double>::infinity());
  if (name == "mse") return mse();
  if (name == "ssim") return ssim();
  if (name == "pearson") return pearson();
  if (name == "spearman") return spearman();
  if (name == "kendall") return kendall();
  if (name == "topk") return topk(1);
  if (name == "cosine-similarity") return cosine_similarity();
  if (name == "cosine-dissimilarity") return cosine_dissimilarity();
  throw InvalidInput("unknown distance kind: " + name);
}

std::string DistanceSpec::name() const {
  switch (kind) {
    case DistanceKind::Lp:
      if (p == 1.0) return "l1";
      if (p == 2.0) return "l2";
      if (std::isinf(p)) return "linf";
      return "lp";
    case DistanceKind::Mse: return "mse";
    case DistanceKind::Ssim: return "ssim";
    case DistanceKind::Pearson: return "pearson";
    case DistanceKind::Spearman: return "spearman";
    case DistanceKind::Kendall: return "kendall";
    case DistanceKind::TopKIntersection: return "topk";
    case DistanceKind::CosineSimilarity: return "cosine-similarity";
    case DistanceKind::CosineDissimilarity: return "cosine-dissimilarity";
  }
  return "?";
}

std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    // tied block [i, j] shares the mean of ranks i+1 .. j+1
    const double r = 0.5 * static_cast<double>(i + 1 + j + 1);
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman_rank_correlation(std::span<const double> a, std::span<const double> b,
                                 DistanceDiagnostics* diag) {
  require_same_size(a, b);
  const std::size_t n = a.size();
  if (n < 2) throw InvalidInput("rank correlation needs at least two components");
  const bool const_a = linalg::variance(a) == 0.0;
  const bool const_b = linalg::variance(b) == 0.0;
  if (const_a != const_b) {
    set_degenerate(diag, "zero-variance input to spearman");
    return 0.0;
  }
  if (const_a && const_b) {
    // Both rankings are trivially identical.
    set_degenerate(diag, "both inputs constant in spearman");
    return 1.0;
  }
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  double sum_d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = ra[i] - rb[i];
    sum_d2 += d * d;
  }
  const double kn = static_cast<double>(n);
  return 1.0 - 6.0 * sum_d2 / (kn * (kn * kn - 1.0));
}

double kendall_rank_correlation(std::span<const double> a, std::span<const double> b,
                                DistanceDiagnostics* diag) {
  require_same_size(a, b);
  const std::size_t n = a.size();
  if (n < 2) throw InvalidInput("rank correlation needs at least two components");
  // Pairs tied in either vector are excluded from both counts.
  long long concordant = 0;
  long long discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      if (da == 0.0 || db == 0.0) continue;
      if ((da > 0.0) == (db > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  if (concordant + discordant == 0) {
    set_degenerate(diag, "no strictly ordered pairs in kendall");
    return 0.0;
  }
  return static_cast<double>(concordant - discordant) /
         static_cast<double>(concordant + discordant);
}

double explanation_distance(const DistanceSpec& spec, std::span<const double> a,
                            std::span<const double> b, DistanceDiagnostics* diag) {
  require_same_size(a, b);
  switch (spec.kind) {
    case DistanceKind::Lp:
      return linalg::norm_lp(linalg::sub(a, b), spec.p);
    case DistanceKind::Mse: {
      if (!spec.normalize) return mse(a, b);
      const auto na = normalize_abs_sum(a);
      const auto nb = normalize_abs_sum(b);
      return mse(na, nb);
    }
    case DistanceKind::Ssim: {
      if (spec.c1 <= 0.0 || spec.c2 <= 0.0) {
        throw InvalidInput("ssim constants must be positive");
      }
      if (!spec.normalize) return ssim_index(a, b, spec.c1, spec.c2);
      const auto na = normalize_abs_sum(a);
      const auto nb = normalize_abs_sum(b);
      return ssim_index(na, nb, spec.c1, spec.c2);
    }
    case DistanceKind::Pearson: {
      bool degenerate = false;
      double r;
      if (spec.normalize) {
        const auto na = normalize_abs_sum(a);
        const auto nb = normalize_abs_sum(b);
        r = linalg::pearson(na, nb, &degenerate);
      } else {
        r = linalg::pearson(a, b, &degenerate);
      }
      if (degenerate) set_degenerate(diag, "zero-variance input to pearson");
      return r;
    }
    case DistanceKind::Spearman:
      return spearman_rank_correlation(a, b, diag);
    case DistanceKind::Kendall:
      return kendall_rank_correlation(a, b, diag);
    case DistanceKind::TopKIntersection: {
      if (spec.k == 0 || spec.k > a.size()) {
        throw InvalidInput("top-k intersection k outside 1..K");
      }
      auto order_a = rank_features(Attribution(std::vector<double>(a.begin(), a.end())));
      auto order_b = rank_features(Attribution(std::vector<double>(b.begin(), b.end())));
      order_a.resize(spec.k);
      order_b.resize(spec.k);
      std::size_t common = 0;
      for (std::size_t i : order_a) {
        if (std::find(order_b.begin(), order_b.end(), i) != order_b.end()) ++common;
      }
      return static_cast<double>(common);
    }
    case DistanceKind::CosineSimilarity:
      return cosine(a, b);
    case DistanceKind::CosineDissimilarity:
      return 1.0 - cosine(a, b);
  }
  throw InvalidInput("unknown distance kind");
}

double alignment(std::span<const double> x, std::span<const double> e) {
  require_same_size(x, e);
  const double ne = linalg::norm2(e);
  if (ne == 0.0) throw DegenerateInput("alignment of a zero explanation is undefined");
  return std::abs(linalg::dot(x, e)) / ne;
}

}  // namespace xplain::simdist
