#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xplain/dataset.hpp"
#include "xplain/model.hpp"
#include "xplain/perturb.hpp"
#include "xplain/report.hpp"
#include "xplain/simdist.hpp"

namespace xplain::robustness {

/// Outcome of one sensitivity metric. Max-type metrics report best-found
/// values from heuristic search (lower bounds on the true maximum) together
/// with the witnessing perturbed input.
struct SensitivityResult {
  double value = 0.0;
  std::optional<std::vector<double>> witness;
  Estimator estimator = Estimator::Search;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;      // Monte-Carlo n or search evaluations
  double standard_error = 0.0;    // Monte-Carlo estimators only
  std::optional<bool> lipschitz;  // local_stability with a threshold
  std::vector<std::string> warnings;
};

/// Best-found max over the region of dist(E(f,x'), E(f,x)).
SensitivityResult max_sensitivity(
    const Explainer& explainer, const Model& model, std::span<const double> x,
    const perturb::PerturbationSpec& spec, const simdist::DistanceSpec& dist,
    perturb::SearchStrategy strategy = perturb::SearchStrategy::RandomRefine,
    std::size_t budget = 0);

/// Best-found max of ||E(f,x') - E(f,x)|| / ||x' - x|| (l2 both sides).
/// With `lambda` set, also reports whether the bound holds (Lipschitz-style
/// local stability). Throws DegenerateInput when every perturbation
/// coincides with x.
SensitivityResult local_stability(
    const Explainer& explainer, const Model& model, std::span<const double> x,
    const perturb::PerturbationSpec& spec, std::optional<double> lambda = std::nullopt,
    perturb::SearchStrategy strategy = perturb::SearchStrategy::RandomRefine,
    std::size_t budget = 0);

/// Samples anchor points from the convex hull of dataset rows and checks
/// local_stability <= lambda at each; true when the bound holds everywhere.
bool lipschitz_global(const Explainer& explainer, const Model& model, const Dataset& data,
                      const perturb::PerturbationSpec& spec, double lambda,
                      std::size_t anchors, std::uint64_t seed, std::size_t budget = 0);

/// Pointwise kernel of relative stability: ||(e - e') / e||_p over
/// max(||(x - x') / x||_p, eps), elementwise denominators floored at
/// sign-preserving eps.
double relative_change_ratio(std::span<const double> e, std::span<const double> e_prime,
                             std::span<const double> d, std::span<const double> d_prime,
                             double p, double eps);

/// Best-found max of the percentage change in the explanation over the
/// percentage change in the input.
SensitivityResult relative_stability(
    const Explainer& explainer, const Model& model, std::span<const double> x,
    const perturb::PerturbationSpec& spec, double p = 2.0, double eps = 1e-8,
    perturb::SearchStrategy strategy = perturb::SearchStrategy::RandomRefine,
    std::size_t budget = 0);

/// As relative_stability with the denominator on the relative change of the
/// model's intermediate representation; falls back to logits for black-box
/// models that expose them.
SensitivityResult representation_stability(
    const Explainer& explainer, const Model& model, std::span<const double> x,
    const perturb::PerturbationSpec& spec, double p = 2.0, double eps = 1e-8,
    perturb::SearchStrategy strategy = perturb::SearchStrategy::RandomRefine,
    std::size_t budget = 0);

/// Unbiased Monte-Carlo mean of dist(E(f,x), E(f,x')) over the region,
/// with its standard error.
SensitivityResult average_sensitivity(const Explainer& explainer, const Model& model,
                                      std::span<const double> x,
                                      const perturb::PerturbationSpec& spec,
                                      const simdist::DistanceSpec& dist);

enum class AdversarialObjective { TopK, Targeted, CenterOfMass };

struct AdversarialSpec {
  AdversarialObjective objective = AdversarialObjective::TopK;
  std::size_t k = 1;                  // TopK
  std::vector<std::size_t> targets;   // Targeted: the designated unimportant set
};

/// Worst-case attribution manipulation within the region: suppress the
/// anchor's top-k mass, inflate a targeted set, or displace the explanation's
/// center of mass (coordinate index taken as position).
SensitivityResult adversarial_dissimilarity(
    const Explainer& explainer, const Model& model, std::span<const double> x,
    const perturb::PerturbationSpec& spec, const AdversarialSpec& adv,
    perturb::SearchStrategy strategy = perturb::SearchStrategy::RandomRefine,
    std::size_t budget = 0);

/// Fractional-contribution center of mass using 1-based coordinate positions.
double center_of_mass(std::span<const double> e);

/// Max over the shifts x +- c*1 of l_p(E(f,x'), E(f,x)); p in {1, 2}.
double input_invariance(const Explainer& explainer, const Model& model,
                        std::span<const double> x, double c, double p = 2.0);

/// Fraction of in-box dataset rows whose prediction stays within lambda of
/// f(x); absolute difference by default, the printed signed form on request.
double hyperbox_precision(const Model& model, std::span<const double> x,
                          const perturb::Hyperbox& box, const Dataset& data, double lambda,
                          bool absolute_difference = true);

/// Max over target values of | dist(E(f,x), E(f,x')) - |f(x) - f(x')| | for
/// the protected-coordinate flip x'.
double counterfactual_fairness_gap(const Explainer& explainer, const Model& model,
                                   std::span<const double> x, std::size_t protected_feature,
                                   std::span<const double> target_values,
                                   const simdist::DistanceSpec& dist);

/// dist(E(f,x), E(f',x)) for a perturbed model f' (randomized parameters or
/// permuted-label retraining); ideally large.
double model_randomization_sensitivity(const Explainer& explainer, const Model& model,
                                       const Model& perturbed, std::span<const double> x,
                                       const simdist::DistanceSpec& dist);

/// Fraction of validation rows whose fooling loss
///   SRC(E(f',.,i), E(f,.,j)) - SRC(E(f,.,i), E(f',.,i))
/// falls inside [lo, hi]; lower is better for the deployed explanation.
double adversarial_model_sensitivity(const LogitExplainer& explainer, const Model& model,
                                     const Model& perturbed, const Dataset& validation,
                                     std::size_t logit_i, std::size_t logit_j, double lo,
                                     double hi);

/// dist between explanations produced under two hyperparameter configurations.
double explainer_config_sensitivity(const Explainer& config_a, const Explainer& config_b,
                                    const Model& model, std::span<const double> x,
                                    const simdist::DistanceSpec& dist);

/// Max pairwise config sensitivity over a configuration grid.
double explainer_grid_sensitivity(std::span<const Explainer> configs, const Model& model,
                                  std::span<const double> x,
                                  const simdist::DistanceSpec& dist);

/// Best-found minimum of the targeted manipulation loss
/// ||E(f,x') - target||^2 + lambda ||f(x') - f(x)||^2 over the region.
SensitivityResult targeted_loss_search(const Explainer& explainer, const Model& model,
                                       std::span<const double> x,
                                       std::span<const double> x_target, double lambda,
                                       const perturb::PerturbationSpec& spec,
                                       std::size_t budget = 0);

}  // namespace xplain::robustness
