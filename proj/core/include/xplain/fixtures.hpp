#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "xplain/baseline.hpp"
#include "xplain/dataset.hpp"
#include "xplain/explanation.hpp"
#include "xplain/linalg.hpp"
#include "xplain/model.hpp"

namespace xplain::fixtures {

/// f(x) = w.x + b, optionally acting as a classifier via a sign threshold
/// (predict class 1 when f(x) >= threshold).
class LinearModel : public Model {
 public:
  LinearModel(std::vector<double> weights, double bias,
              std::optional<double> threshold = std::nullopt);

  std::size_t dimension() const override { return weights_.size(); }
  Capabilities capabilities() const override;
  double value(std::span<const double> x) const override;
  std::vector<double> gradient(std::span<const double> x) const override;
  std::vector<double> logits(std::span<const double> x) const override;
  std::vector<double> logit_gradient(std::span<const double> x, std::size_t i) const override;
  bool has_decision() const override { return threshold_.has_value(); }
  std::size_t num_classes() const override { return threshold_.has_value() ? 2 : 0; }
  int decide(std::span<const double> x) const override;

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  std::optional<double> threshold() const { return threshold_; }

 private:
  std::vector<double> weights_;
  double bias_;
  std::optional<double> threshold_;
};

enum class Activation { Relu, Softplus, Linear };

Activation activation_from_name(const std::string& name);
std::string activation_name(Activation a);

struct MlpLayer {
  linalg::Matrix weights;     // out x in
  std::vector<double> bias;   // out
  Activation activation = Activation::Relu;
};

/// Small fully-connected net with analytic forward and backward passes.
/// Exposes the last hidden layer as the intermediate representation and the
/// final layer outputs as logits; the scalar prediction is the logit at
/// `output_index`.
class TinyMlp : public Model {
 public:
  explicit TinyMlp(std::vector<MlpLayer> layers, std::size_t output_index = 0);

  std::size_t dimension() const override;
  Capabilities capabilities() const override;
  double value(std::span<const double> x) const override;
  std::vector<double> gradient(std::span<const double> x) const override;
  std::vector<double> representation(std::span<const double> x) const override;
  std::vector<double> logits(std::span<const double> x) const override;
  std::vector<double> logit_gradient(std::span<const double> x, std::size_t i) const override;

  const std::vector<MlpLayer>& layers() const { return layers_; }
  std::size_t output_index() const { return output_index_; }
  std::size_t num_outputs() const;
  bool bias_free() const;

  /// Forward pass keeping every layer's post-activation (index 0 = input).
  std::vector<std::vector<double>> forward_trace(std::span<const double> x) const;

  /// Weights drawn N(0, 1/sqrt(fan_in)); biases zero unless `with_bias`.
  static TinyMlp random(const std::vector<std::size_t>& layer_sizes, Activation activation,
                        std::uint64_t seed, bool with_bias = false);

 private:
  std::vector<MlpLayer> layers_;
  std::size_t output_index_;
};

/// A two-level decision set acting as a model; the prediction is the label of
/// the first matching rule, else the default label.
class DecisionSetModel : public Model {
 public:
  DecisionSetModel(DecisionSet set, std::size_t dimension);

  std::size_t dimension() const override { return dimension_; }
  Capabilities capabilities() const override;
  double value(std::span<const double> x) const override;
  bool has_decision() const override { return true; }
  std::size_t num_classes() const override { return num_classes_; }
  int decide(std::span<const double> x) const override;

  const DecisionSet& rules() const { return set_; }

 private:
  DecisionSet set_;
  std::size_t dimension_;
  std::size_t num_classes_;
};

/// Linear concept bottleneck: concepts h(x) = H x, prediction = head(h(x)).
/// The composition reproduces `value` exactly.
class ConceptModel : public Model {
 public:
  explicit ConceptModel(ConceptExplanation concept_model);

  std::size_t dimension() const override { return concepts_.concept_map.cols(); }
  Capabilities capabilities() const override;
  double value(std::span<const double> x) const override;
  std::vector<double> gradient(std::span<const double> x) const override;
  std::vector<double> representation(std::span<const double> x) const override;

  const ConceptExplanation& concept_explanation() const { return concepts_; }

 private:
  ConceptExplanation concepts_;
};

/// The canonical 3-feature fixture: w = (2, 1, 0), b = 0.
LinearModel lin3();

// ---- Reference explainers ----------------------------------------------

Attribution explain_gradient(const Model& model, std::span<const double> x);

/// E_k = df/dx_k * (x_k - x0_k).
Attribution explain_input_x_gradient(const Model& model, std::span<const double> x,
                                     const BaselineSpec& baseline);

/// Midpoint-rule path integral of the gradient from baseline to x.
Attribution explain_integrated_gradients(const Model& model, std::span<const double> x,
                                         const BaselineSpec& baseline,
                                         std::size_t steps = 64);

/// Mean gradient over n Gaussian-perturbed copies of x.
Attribution explain_smoothgrad(const Model& model, std::span<const double> x, double sigma,
                               std::size_t n, std::uint64_t seed);

/// Exact Shapley values by enumerating all 2^K coalitions; absent features
/// are reverted to the baseline. Throws ResourceLimit for K > 16.
Attribution explain_shapley_exact(const Model& model, std::span<const double> x,
                                  const BaselineSpec& baseline);

inline constexpr std::size_t kShapleyMaxFeatures = 16;

// ---- Layer-wise relevance propagation ------------------------------------

struct LrpOptions {
  /// Stabilizer added (sign-preserving) to each propagation denominator.
  /// Zero keeps conservation exact on bias-free ReLU nets.
  double epsilon = 0.0;
  std::size_t logit = 0;
};

struct LrpResult {
  /// Relevances per layer, index 0 = input layer, last = output layer.
  std::vector<std::vector<double>> layer_relevances;
  double output_value = 0.0;

  Attribution attribution() const;
  /// |sum of layer relevances - output| per layer.
  std::vector<double> conservation_residuals() const;
};

/// Basic relevance propagation for ReLU/linear nets; softplus activations are
/// rejected (UnsupportedCapability).
LrpResult explain_lrp(const TinyMlp& model, std::span<const double> x, LrpOptions opts = {});

// ---- Local linear surrogate (kernel-weighted least squares) --------------

struct LimeOptions {
  std::size_t samples = 256;
  double sampler_sigma = 0.5;
  /// Exponential kernel on squared l2 distance: exp(-d^2 / width^2).
  double kernel_width = 1.0;
  double lambda_sparsity = 0.0;
  double lambda_fairness = 0.0;
  std::optional<std::size_t> protected_feature;
  std::vector<double> protected_targets;
  std::uint64_t seed = 0;
};

struct LimeSample {
  std::vector<std::vector<double>> points;
  std::vector<double> weights;
};

/// The exact perturbation sample and kernel weights fit_local_linear uses for
/// a given option set (deterministic per seed).
LimeSample lime_sample(const Model& model, std::span<const double> x, const LimeOptions& opts);

/// Kernel-weighted linear fit of f around x. The returned surrogate is
/// anchored at x with intercept f(x); with no penalties its coefficients
/// minimize the kernel-weighted local infidelity over the drawn sample.
LinearSurrogate fit_local_linear(const Model& model, std::span<const double> x,
                                 const LimeOptions& opts);

/// Coefficients minimizing sum_i w_i (c . z_i - t_i)^2 + lambda1 |c|_1 over
/// the given rows; lambda1 = 0 solves the normal equations exactly.
std::vector<double> weighted_lasso(const std::vector<std::vector<double>>& rows,
                                   const std::vector<double>& targets,
                                   const std::vector<double>& weights, double lambda1);

// ---- Model perturbations ---------------------------------------------------

enum class RandomizeMode { All, Layer, Progressive };

/// Independent copy with selected weights re-drawn from the initializer
/// (original untouched). `layer` selects the layer for Layer mode and the
/// first randomized layer for Progressive mode (that layer through the last).
std::unique_ptr<Model> randomize_parameters(const Model& model, RandomizeMode mode,
                                            std::size_t layer, std::uint64_t seed);

enum class RetrainTemplate { Linear, Logistic };

LinearModel fit_linear_least_squares(const Dataset& data, std::span<const double> labels);
LinearModel fit_logistic(const Dataset& data, std::span<const double> labels,
                         std::size_t iterations = 500, double learning_rate = 0.5);

/// Refit the template on the dataset with labels permuted by `seed`.
std::unique_ptr<Model> retrain_permuted_labels(RetrainTemplate tmpl, const Dataset& data,
                                               std::uint64_t seed);

// ---- Exact best-subset linear surrogate -----------------------------------

struct BestSubsetFit {
  FeatureSubset subset;
  LinearSurrogate surrogate;
  double mse = 0.0;
};

/// Enumerates every feature subset of the given size and keeps the least
/// squares fit (to the model's outputs on the dataset) with the smallest
/// mean squared error. Exponential in K; K <= 16 enforced.
BestSubsetFit fit_best_subset_linear(const Model& model, const Dataset& data,
                                     std::size_t subset_size);

}  // namespace xplain::fixtures
