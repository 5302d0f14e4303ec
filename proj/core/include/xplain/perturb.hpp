#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "xplain/model.hpp"

namespace xplain::perturb {

/// Sphere of radius `radius` under the p-norm, centered at the anchor input.
/// Supported p: 1, 2, infinity.
struct LpBall {
  double p = 2.0;
  double radius = 0.0;
};

/// Axis-aligned per-feature intervals; must contain the anchor input.
struct Hyperbox {
  std::vector<double> lo;
  std::vector<double> hi;

  static Hyperbox around(std::span<const double> x, double half_width);
  bool contains(std::span<const double> x) const;
};

/// Single-coordinate replacement by one of a finite set of target values.
struct GroupFlip {
  std::size_t feature = 0;
  std::vector<double> targets;
};

/// Diagonal shifts x + d*1 with |d| <= magnitude.
struct ConstantShift {
  double magnitude = 0.0;
};

using Region = std::variant<LpBall, Hyperbox, GroupFlip, ConstantShift>;

struct PerturbationSpec {
  Region region;
  std::size_t budget = 1000;
  std::uint64_t seed = 0;

  /// Validates radii, budget, interval containment of the anchor.
  void validate(std::span<const double> anchor) const;
};

bool region_contains(const Region& region, std::span<const double> anchor,
                     std::span<const double> candidate);

/// `spec.budget` points inside the region, uniform for balls and boxes,
/// uniform over targets for group flips. Deterministic per seed.
std::vector<std::vector<double>> sample_region(std::span<const double> x,
                                               const PerturbationSpec& spec);

/// x with coordinate `feature` replaced by `value`; everything else untouched.
std::vector<double> flip_group(std::span<const double> x, std::size_t feature, double value);

/// A scalar objective over inputs, with an optional analytic gradient.
struct Objective {
  std::function<double(std::span<const double>)> value;
  std::function<std::vector<double>(std::span<const double>)> gradient;  // may be empty
};

enum class SearchStrategy { Random, RandomRefine, GradientAscent };

SearchStrategy strategy_from_name(const std::string& name);

/// Outcome of a heuristic maximization. `value` is a best-found lower bound
/// on the true maximum, never a certificate of optimality.
struct SearchResult {
  std::vector<double> argmax;
  double value = 0.0;
  std::size_t evaluations = 0;
  /// (evaluation index, objective) at each strict improvement; non-decreasing.
  std::vector<std::pair<std::size_t, double>> trace;
};

/// Best-found maximizer of `objective` over the region around `x`.
/// `budget` caps objective evaluations (0 means the 10,000 default).
/// Objectives returning NaN abort with NumericError.
SearchResult worst_case_search(const Objective& objective, std::span<const double> x,
                               const PerturbationSpec& spec,
                               SearchStrategy strategy = SearchStrategy::RandomRefine,
                               std::size_t budget = 0);

/// || E(f,x') - x_target ||^2 + lambda * || f(x') - f(x) ||^2. An adversary
/// minimizes this; negate it to use with worst_case_search.
double eval_targeted_loss(const Model& model, const Explainer& explainer,
                          std::span<const double> x, std::span<const double> x_prime,
                          std::span<const double> x_target, double lambda);

inline constexpr std::size_t kDefaultSearchBudget = 10'000;
inline constexpr std::size_t kDefaultSampleBudget = 1'000;

}  // namespace xplain::perturb
