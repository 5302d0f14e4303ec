#include "xplain/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "xplain/errors.hpp"
#include "xplain/linalg.hpp"

namespace xplain::robustness {

namespace {

using perturb::PerturbationSpec;
using perturb::SearchResult;
using perturb::SearchStrategy;
using simdist::DistanceSpec;

SensitivityResult from_search(SearchResult r, std::uint64_t seed) {
  SensitivityResult out;
  out.value = r.value;
  out.witness = std::move(r.argmax);
  out.estimator = Estimator::Search;
  out.seed = seed;
  out.samples = r.evaluations;
  return out;
}

Attribution explain_checked(const Explainer& explainer, const Model& model,
                            std::span<const double> x) {
  Attribution e = explainer(model, x);
  if (e.size() != model.dimension()) {
    throw InvalidInput("explainer returned wrong attribution length");
  }
  return e;
}

// Elementwise v / guard(denominator), denominators under eps in magnitude
// replaced by sign-preserving eps.
std::vector<double> guarded_ratio(std::span<const double> num, std::span<const double> den,
                                  double eps) {
  std::vector<double> out(num.size());
  for (std::size_t i = 0; i < num.size(); ++i) {
    double d = den[i];
    if (std::abs(d) < eps) d = d < 0.0 ? -eps : eps;
    out[i] = num[i] / d;
  }
  return out;
}

}  // namespace

SensitivityResult max_sensitivity(const Explainer& explainer, const Model& model,
                                  std::span<const double> x, const PerturbationSpec& spec,
                                  const DistanceSpec& dist, SearchStrategy strategy,
                                  std::size_t budget) {
  check_input(model, x);
  const Attribution base = explain_checked(explainer, model, x);
  perturb::Objective objective;
  objective.value = [&](std::span<const double> candidate) {
    const Attribution e = explain_checked(explainer, model, candidate);
    return simdist::explanation_distance(dist, e.weights, base.weights);
  };
  return from_search(perturb::worst_case_search(objective, x, spec, strategy, budget),
                     spec.seed);
}

SensitivityResult local_stability(const Explainer& explainer, const Model& model,
                                  std::span<const double> x, const PerturbationSpec& spec,
                                  std::optional<double> lambda, SearchStrategy strategy,
                                  std::size_t budget) {
  check_input(model, x);
  const Attribution base = explain_checked(explainer, model, x);
  constexpr double kSkip = -std::numeric_limits<double>::infinity();
  perturb::Objective objective;
  objective.value = [&](std::span<const double> candidate) {
    const double dx = linalg::norm2(linalg::sub(candidate, x));
    if (dx == 0.0) return kSkip;  // ratio undefined at x' = x
    const Attribution e = explain_checked(explainer, model, candidate);
    return linalg::norm2(linalg::sub(e.weights, base.weights)) / dx;
  };
  SearchResult found = perturb::worst_case_search(objective, x, spec, strategy, budget);
  if (found.value == kSkip) {
    throw DegenerateInput("local_stability: every perturbation coincides with x");
  }
  SensitivityResult out = from_search(std::move(found), spec.seed);
  if (lambda.has_value()) out.lipschitz = out.value <= *lambda;
  return out;
}

bool lipschitz_global(const Explainer& explainer, const Model& model, const Dataset& data,
                      const PerturbationSpec& spec, double lambda, std::size_t anchors,
                      std::uint64_t seed, std::size_t budget) {
  if (data.size() == 0) throw InvalidInput("lipschitz_global needs a dataset");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  std::uniform_real_distribution<double> mix(0.0, 1.0);
  for (std::size_t a = 0; a < anchors; ++a) {
    // Random point on a chord of the dataset hull.
    const auto r1 = data.row(pick(rng));
    const auto r2 = data.row(pick(rng));
    const double t = mix(rng);
    std::vector<double> anchor(r1.size());
    for (std::size_t i = 0; i < anchor.size(); ++i) {
      anchor[i] = (1.0 - t) * r1[i] + t * r2[i];
    }
    PerturbationSpec local = spec;
    local.seed = seed + a + 1;
    const auto res = local_stability(explainer, model, anchor, local, lambda,
                                     SearchStrategy::RandomRefine, budget);
    if (!res.lipschitz.value_or(false)) return false;
  }
  return true;
}

double relative_change_ratio(std::span<const double> e, std::span<const double> e_prime,
                             std::span<const double> d, std::span<const double> d_prime,
                             double p, double eps) {
  if (eps <= 0.0) throw InvalidInput("relative stability eps must be positive");
  const auto num = guarded_ratio(linalg::sub(e, e_prime), e, eps);
  const auto den = guarded_ratio(linalg::sub(d, d_prime), d, eps);
  const double den_norm = std::max(linalg::norm_lp(den, p), eps);
  return linalg::norm_lp(num, p) / den_norm;
}

namespace {

SensitivityResult relative_stability_impl(
    const Explainer& explainer, const Model& model, std::span<const double> x,
    const PerturbationSpec& spec, double p, double eps, SearchStrategy strategy,
    std::size_t budget, const std::function<std::vector<double>(std::span<const double>)>& rep,
    bool warn_zero_explanation) {
  check_input(model, x);
  const Attribution base = explain_checked(explainer, model, x);
  const std::vector<double> base_rep = rep(x);

  perturb::Objective objective;
  objective.value = [&](std::span<const double> candidate) {
    const Attribution e = explain_checked(explainer, model, candidate);
    return relative_change_ratio(base.weights, e.weights, base_rep, rep(candidate), p, eps);
  };
  SensitivityResult out =
      from_search(perturb::worst_case_search(objective, x, spec, strategy, budget), spec.seed);
  if (warn_zero_explanation &&
      std::all_of(base.weights.begin(), base.weights.end(), [](double v) { return v == 0.0; })) {
    out.warnings.push_back("explanation is identically zero; ratios use the eps guard");
  }
  return out;
}

}  // namespace

SensitivityResult relative_stability(const Explainer& explainer, const Model& model,
                                     std::span<const double> x, const PerturbationSpec& spec,
                                     double p, double eps, SearchStrategy strategy,
                                     std::size_t budget) {
  return relative_stability_impl(
      explainer, model, x, spec, p, eps, strategy, budget,
      [](std::span<const double> z) { return std::vector<double>(z.begin(), z.end()); },
      /*warn_zero_explanation=*/true);
}

SensitivityResult representation_stability(const Explainer& explainer, const Model& model,
                                           std::span<const double> x,
                                           const PerturbationSpec& spec, double p, double eps,
                                           SearchStrategy strategy, std::size_t budget) {
  const auto caps = model.capabilities();
  std::function<std::vector<double>(std::span<const double>)> rep;
  SensitivityResult out;
  if (caps.representation) {
    rep = [&model](std::span<const double> z) { return model.representation(z); };
  } else if (caps.logits) {
    rep = [&model](std::span<const double> z) { return model.logits(z); };
  } else {
    throw UnsupportedCapability(
        "representation_stability needs an intermediate representation or logits");
  }
  out = relative_stability_impl(explainer, model, x, spec, p, eps, strategy, budget, rep,
                                /*warn_zero_explanation=*/true);
  if (!caps.representation) {
    out.warnings.push_back("no intermediate representation; fell back to logits");
  }
  return out;
}

SensitivityResult average_sensitivity(const Explainer& explainer, const Model& model,
                                      std::span<const double> x, const PerturbationSpec& spec,
                                      const DistanceSpec& dist) {
  check_input(model, x);
  const Attribution base = explain_checked(explainer, model, x);
  const auto samples = perturb::sample_region(x, spec);

  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& candidate : samples) {
    const Attribution e = explain_checked(explainer, model, candidate);
    const double d = simdist::explanation_distance(dist, e.weights, base.weights);
    sum += d;
    sum_sq += d * d;
  }
  const double n = static_cast<double>(samples.size());
  SensitivityResult out;
  out.value = sum / n;
  out.estimator = Estimator::MonteCarlo;
  out.seed = spec.seed;
  out.samples = samples.size();
  if (samples.size() > 1) {
    const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    out.standard_error = std::sqrt(var / n);
  }
  return out;
}

double center_of_mass(std::span<const double> e) {
  double total = 0.0;
  for (double v : e) total += std::abs(v);
  if (total == 0.0) return 0.0;
  double com = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    com += static_cast<double>(i + 1) * std::abs(e[i]) / total;
  }
  return com;
}

SensitivityResult adversarial_dissimilarity(const Explainer& explainer, const Model& model,
                                            std::span<const double> x,
                                            const PerturbationSpec& spec,
                                            const AdversarialSpec& adv,
                                            SearchStrategy strategy, std::size_t budget) {
  check_input(model, x);
  const Attribution base = explain_checked(explainer, model, x);

  std::vector<std::size_t> subset;
  switch (adv.objective) {
    case AdversarialObjective::TopK: {
      if (adv.k == 0 || adv.k > base.size()) throw InvalidInput("top-k outside 1..K");
      subset = rank_features(base);
      subset.resize(adv.k);
      break;
    }
    case AdversarialObjective::Targeted: {
      if (adv.targets.empty()) throw InvalidInput("targeted objective needs a feature set");
      for (std::size_t i : adv.targets) {
        if (i >= base.size()) throw InvalidInput("targeted feature index out of range");
      }
      subset = adv.targets;
      break;
    }
    case AdversarialObjective::CenterOfMass:
      break;
  }
  const double base_com = center_of_mass(base.weights);

  perturb::Objective objective;
  objective.value = [&](std::span<const double> candidate) {
    const Attribution e = explain_checked(explainer, model, candidate);
    switch (adv.objective) {
      case AdversarialObjective::TopK: {
        double s = 0.0;
        for (std::size_t i : subset) s += e[i];
        return -s;
      }
      case AdversarialObjective::Targeted: {
        double s = 0.0;
        for (std::size_t i : subset) s += e[i];
        return s;
      }
      case AdversarialObjective::CenterOfMass:
        return std::abs(center_of_mass(e.weights) - base_com);
    }
    return 0.0;
  };
  return from_search(perturb::worst_case_search(objective, x, spec, strategy, budget),
                     spec.seed);
}

double input_invariance(const Explainer& explainer, const Model& model,
                        std::span<const double> x, double c, double p) {
  check_input(model, x);
  if (p != 1.0 && p != 2.0) throw InvalidInput("input invariance uses p in {1, 2}");
  const Attribution base = explain_checked(explainer, model, x);
  double worst = 0.0;
  for (double sign : {1.0, -1.0}) {
    std::vector<double> shifted(x.begin(), x.end());
    for (double& v : shifted) v += sign * c;
    const Attribution e = explain_checked(explainer, model, shifted);
    worst = std::max(worst, linalg::norm_lp(linalg::sub(e.weights, base.weights), p));
  }
  return worst;
}

double hyperbox_precision(const Model& model, std::span<const double> x,
                          const perturb::Hyperbox& box, const Dataset& data, double lambda,
                          bool absolute_difference) {
  check_input(model, x);
  if (box.lo.size() != x.size()) throw InvalidInput("hyperbox dimension mismatch");
  const double fx = model.value(x);
  std::size_t inside = 0;
  std::size_t close = 0;
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto row = data.row(r);
    if (!box.contains(row)) continue;
    ++inside;
    const double diff = model.value(row) - fx;
    if ((absolute_difference ? std::abs(diff) : diff) < lambda) ++close;
  }
  if (inside == 0) {
    throw DegenerateInput("hyperbox precision undefined: no dataset rows inside the box");
  }
  return static_cast<double>(close) / static_cast<double>(inside);
}

double counterfactual_fairness_gap(const Explainer& explainer, const Model& model,
                                   std::span<const double> x, std::size_t protected_feature,
                                   std::span<const double> target_values,
                                   const DistanceSpec& dist) {
  check_input(model, x);
  if (target_values.empty()) throw InvalidInput("no protected target values given");
  const Attribution base = explain_checked(explainer, model, x);
  const double fx = model.value(x);
  double worst = 0.0;
  for (double v : target_values) {
    const auto flipped = perturb::flip_group(x, protected_feature, v);
    const Attribution e = explain_checked(explainer, model, flipped);
    const double expl_change = simdist::explanation_distance(dist, base.weights, e.weights);
    const double out_change = std::abs(fx - model.value(flipped));
    worst = std::max(worst, std::abs(expl_change - out_change));
  }
  return worst;
}

double model_randomization_sensitivity(const Explainer& explainer, const Model& model,
                                       const Model& perturbed, std::span<const double> x,
                                       const DistanceSpec& dist) {
  if (model.dimension() != perturbed.dimension()) {
    throw InvalidInput("models have different dimensions");
  }
  check_input(model, x);
  const Attribution a = explain_checked(explainer, model, x);
  const Attribution b = explain_checked(explainer, perturbed, x);
  return simdist::explanation_distance(dist, a.weights, b.weights);
}

double adversarial_model_sensitivity(const LogitExplainer& explainer, const Model& model,
                                     const Model& perturbed, const Dataset& validation,
                                     std::size_t logit_i, std::size_t logit_j, double lo,
                                     double hi) {
  if (validation.size() == 0) throw InvalidInput("empty validation set");
  if (logit_i == logit_j) throw InvalidInput("fooling loss needs distinct logits");
  if (lo > hi) throw InvalidInput("invalid fooling window");
  std::size_t in_window = 0;
  for (std::size_t r = 0; r < validation.size(); ++r) {
    const auto x = validation.row(r);
    const Attribution fooled = explainer(perturbed, x, logit_i);
    const Attribution other = explainer(model, x, logit_j);
    const Attribution before = explainer(model, x, logit_i);
    const Attribution after = explainer(perturbed, x, logit_i);
    const double loss =
        simdist::spearman_rank_correlation(fooled.weights, other.weights) -
        simdist::spearman_rank_correlation(before.weights, after.weights);
    if (loss >= lo && loss <= hi) ++in_window;
  }
  return static_cast<double>(in_window) / static_cast<double>(validation.size());
}

double explainer_config_sensitivity(const Explainer& config_a, const Explainer& config_b,
                                    const Model& model, std::span<const double> x,
                                    const DistanceSpec& dist) {
  check_input(model, x);
  const Attribution a = explain_checked(config_a, model, x);
  const Attribution b = explain_checked(config_b, model, x);
  return simdist::explanation_distance(dist, a.weights, b.weights);
}

double explainer_grid_sensitivity(std::span<const Explainer> configs, const Model& model,
                                  std::span<const double> x, const DistanceSpec& dist) {
  if (configs.size() < 2) throw InvalidInput("config grid needs at least two entries");
  std::vector<Attribution> all;
  all.reserve(configs.size());
  for (const auto& c : configs) all.push_back(explain_checked(c, model, x));
  double worst = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      worst = std::max(worst,
                       simdist::explanation_distance(dist, all[i].weights, all[j].weights));
    }
  }
  return worst;
}

SensitivityResult targeted_loss_search(const Explainer& explainer, const Model& model,
                                       std::span<const double> x,
                                       std::span<const double> x_target, double lambda,
                                       const PerturbationSpec& spec, std::size_t budget) {
  check_input(model, x);
  perturb::Objective objective;
  objective.value = [&](std::span<const double> candidate) {
    return -perturb::eval_targeted_loss(model, explainer, x, candidate, x_target, lambda);
  };
  SensitivityResult out =
      from_search(perturb::worst_case_search(objective, x, spec,
                                             perturb::SearchStrategy::RandomRefine, budget),
                  spec.seed);
  out.value = -out.value;  // minimized loss
  return out;
}

}  // namespace xplain::robustness
