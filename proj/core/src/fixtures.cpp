#include "xplain/fixtures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "xplain/errors.hpp"

namespace xplain::fixtures {

namespace {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::Relu: return z > 0.0 ? z : 0.0;
    case Activation::Softplus:
      // log(1 + e^z), stable for large |z|
      return z > 30.0 ? z : std::log1p(std::exp(z));
    case Activation::Linear: return z;
  }
  return z;
}

double activate_derivative(Activation a, double z) {
  switch (a) {
    case Activation::Relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::Softplus: return 1.0 / (1.0 + std::exp(-z));
    case Activation::Linear: return 1.0;
  }
  return 1.0;
}

}  // namespace

// ---- LinearModel -----------------------------------------------------------

LinearModel::LinearModel(std::vector<double> weights, double bias,
                         std::optional<double> threshold)
    : weights_(std::move(weights)), bias_(bias), threshold_(threshold) {
  if (weights_.empty()) throw InvalidInput("linear model needs at least one weight");
  linalg::check_finite(weights_, "linear weights");
  if (!std::isfinite(bias_)) throw InvalidInput("linear bias must be finite");
}

Capabilities LinearModel::capabilities() const {
  return {.gradient = true, .representation = false, .logits = true, .parameters = true,
          .concurrent_safe = true};
}

double LinearModel::value(std::span<const double> x) const {
  check_input(*this, x);
  return linalg::dot(weights_, x) + bias_;
}

std::vector<double> LinearModel::gradient(std::span<const double> x) const {
  check_input(*this, x);
  return weights_;
}

std::vector<double> LinearModel::logits(std::span<const double> x) const {
  return {value(x)};
}

std::vector<double> LinearModel::logit_gradient(std::span<const double> x,
                                                std::size_t i) const {
  if (i != 0) throw InvalidInput("linear model has a single logit");
  return gradient(x);
}

int LinearModel::decide(std::span<const double> x) const {
  if (!threshold_.has_value()) {
    throw UnsupportedCapability("linear model has no classification threshold");
  }
  return value(x) >= *threshold_ ? 1 : 0;
}

LinearModel lin3() { return LinearModel({2.0, 1.0, 0.0}, 0.0); }

// ---- TinyMlp ---------------------------------------------------------------

Activation activation_from_name(const std::string& name) {
  if (name == "relu") return Activation::Relu;
  if (name == "softplus") return Activation::Softplus;
  if (name == "linear" || name == "none") return Activation::Linear;
  throw InvalidInput("unknown activation: " + name);
}

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::Relu: return "relu";
    case Activation::Softplus: return "softplus";
    case Activation::Linear: return "linear";
  }
  return "?";
}

TinyMlp::TinyMlp(std::vector<MlpLayer> layers, std::size_t output_index)
    : layers_(std::move(layers)), output_index_(output_index) {
  if (layers_.empty()) throw InvalidInput("mlp needs at least one layer");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (layer.bias.size() != layer.weights.rows()) {
      throw InvalidInput("mlp layer bias size does not match output size");
    }
    if (l > 0 && layer.weights.cols() != layers_[l - 1].weights.rows()) {
      throw InvalidInput("mlp layer sizes do not chain");
    }
  }
  if (output_index_ >= layers_.back().weights.rows()) {
    throw InvalidInput("mlp output index out of range");
  }
}

std::size_t TinyMlp::dimension() const { return layers_.front().weights.cols(); }

std::size_t TinyMlp::num_outputs() const { return layers_.back().weights.rows(); }

bool TinyMlp::bias_free() const {
  for (const auto& layer : layers_) {
    for (double b : layer.bias) {
      if (b != 0.0) return false;
    }
  }
  return true;
}

Capabilities TinyMlp::capabilities() const {
  return {.gradient = true, .representation = layers_.size() >= 2, .logits = true,
          .parameters = true, .concurrent_safe = true};
}

std::vector<std::vector<double>> TinyMlp::forward_trace(std::span<const double> x) const {
  check_input(*this, x);
  std::vector<std::vector<double>> acts;
  acts.reserve(layers_.size() + 1);
  acts.emplace_back(x.begin(), x.end());
  for (const auto& layer : layers_) {
    auto z = layer.weights.multiply(acts.back());
    for (std::size_t i = 0; i < z.size(); ++i) {
      z[i] = activate(layer.activation, z[i] + layer.bias[i]);
    }
    acts.push_back(std::move(z));
  }
  return acts;
}

double TinyMlp::value(std::span<const double> x) const {
  return forward_trace(x).back()[output_index_];
}

std::vector<double> TinyMlp::logits(std::span<const double> x) const {
  return forward_trace(x).back();
}

std::vector<double> TinyMlp::representation(std::span<const double> x) const {
  if (layers_.size() < 2) {
    throw UnsupportedCapability("single-layer mlp has no hidden representation");
  }
  auto trace = forward_trace(x);
  return trace[trace.size() - 2];
}

std::vector<double> TinyMlp::logit_gradient(std::span<const double> x, std::size_t i) const {
  check_input(*this, x);
  if (i >= num_outputs()) throw InvalidInput("logit index out of range");

  // Forward pass keeping pre-activations.
  std::vector<std::vector<double>> pre;
  std::vector<double> a(x.begin(), x.end());
  std::vector<std::vector<double>> acts{a};
  for (const auto& layer : layers_) {
    auto z = layer.weights.multiply(acts.back());
    for (std::size_t j = 0; j < z.size(); ++j) z[j] += layer.bias[j];
    pre.push_back(z);
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = activate(layer.activation, z[j]);
    acts.push_back(std::move(z));
  }

  // Backward pass from output i.
  std::vector<double> delta(num_outputs(), 0.0);
  delta[i] = activate_derivative(layers_.back().activation, pre.back()[i]);
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const auto& layer = layers_[l];
    auto prev = layer.weights.multiply_transposed(delta);
    if (l > 0) {
      for (std::size_t j = 0; j < prev.size(); ++j) {
        prev[j] *= activate_derivative(layers_[l - 1].activation, pre[l - 1][j]);
      }
    }
    delta = std::move(prev);
  }
  return delta;
}

std::vector<double> TinyMlp::gradient(std::span<const double> x) const {
  return logit_gradient(x, output_index_);
}

TinyMlp TinyMlp::random(const std::vector<std::size_t>& layer_sizes, Activation activation,
                        std::uint64_t seed, bool with_bias) {
  if (layer_sizes.size() < 2) throw InvalidInput("need at least input and output sizes");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<MlpLayer> layers;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const std::size_t in = layer_sizes[l];
    const std::size_t out = layer_sizes[l + 1];
    MlpLayer layer;
    layer.weights = linalg::Matrix(out, in);
    const double scale = 1.0 / std::sqrt(static_cast<double>(in));
    for (std::size_t r = 0; r < out; ++r) {
      for (std::size_t c = 0; c < in; ++c) layer.weights(r, c) = scale * g(rng);
    }
    layer.bias.assign(out, 0.0);
    if (with_bias) {
      for (double& b : layer.bias) b = 0.1 * g(rng);
    }
    const bool last = l + 2 == layer_sizes.size();
    layer.activation = last ? Activation::Linear : activation;
    layers.push_back(std::move(layer));
  }
  return TinyMlp(std::move(layers));
}

// ---- DecisionSetModel --------------------------------------------------------

DecisionSetModel::DecisionSetModel(DecisionSet set, std::size_t dimension)
    : set_(std::move(set)), dimension_(dimension) {
  if (dimension_ == 0) throw InvalidInput("decision set model needs a positive dimension");
  set_.validate(dimension_);
  int max_label = set_.default_label;
  for (const auto& rule : set_.rules) max_label = std::max(max_label, rule.label);
  num_classes_ = static_cast<std::size_t>(max_label) + 1;
}

Capabilities DecisionSetModel::capabilities() const {
  return {.gradient = false, .representation = false, .logits = false, .parameters = false,
          .concurrent_safe = true};
}

double DecisionSetModel::value(std::span<const double> x) const {
  return static_cast<double>(decide(x));
}

int DecisionSetModel::decide(std::span<const double> x) const {
  check_input(*this, x);
  return set_.classify(x);
}

// ---- ConceptModel ------------------------------------------------------------

ConceptModel::ConceptModel(ConceptExplanation concept_model)
    : concepts_(std::move(concept_model)) {
  if (concepts_.concept_map.rows() == 0 || concepts_.concept_map.cols() == 0) {
    throw InvalidInput("concept map must be non-empty");
  }
  if (concepts_.head_weights.size() != concepts_.concept_map.rows()) {
    throw InvalidInput("concept head size does not match concept count");
  }
}

Capabilities ConceptModel::capabilities() const {
  return {.gradient = true, .representation = true, .logits = false, .parameters = false,
          .concurrent_safe = true};
}

double ConceptModel::value(std::span<const double> x) const {
  check_input(*this, x);
  return concepts_.value(x);
}

std::vector<double> ConceptModel::gradient(std::span<const double> x) const {
  check_input(*this, x);
  return concepts_.concept_map.multiply_transposed(concepts_.head_weights);
}

std::vector<double> ConceptModel::representation(std::span<const double> x) const {
  check_input(*this, x);
  return concepts_.concepts(x);
}

// ---- Explainers ---------------------------------------------------------------

namespace {

void require_gradient(const Model& model) {
  if (!model.capabilities().gradient) {
    throw UnsupportedCapability("explainer requires the gradient capability");
  }
}

void require_baseline(const Model& model, const BaselineSpec& baseline) {
  if (baseline.dimension() != model.dimension()) {
    throw InvalidInput("baseline dimension does not match model dimension");
  }
}

}  // namespace

Attribution explain_gradient(const Model& model, std::span<const double> x) {
  require_gradient(model);
  check_input(model, x);
  return Attribution(model.gradient(x));
}

Attribution explain_input_x_gradient(const Model& model, std::span<const double> x,
                                     const BaselineSpec& baseline) {
  require_gradient(model);
  require_baseline(model, baseline);
  check_input(model, x);
  auto g = model.gradient(x);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= x[i] - baseline[i];
  return Attribution(std::move(g));
}

Attribution explain_integrated_gradients(const Model& model, std::span<const double> x,
                                         const BaselineSpec& baseline, std::size_t steps) {
  require_gradient(model);
  require_baseline(model, baseline);
  check_input(model, x);
  if (steps == 0) throw InvalidInput("integrated gradients needs steps >= 1");

  const std::size_t k = x.size();
  std::vector<double> total(k, 0.0);
  std::vector<double> point(k, 0.0);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = (static_cast<double>(s) + 0.5) / static_cast<double>(steps);
    for (std::size_t i = 0; i < k; ++i) point[i] = baseline[i] + t * (x[i] - baseline[i]);
    const auto g = model.gradient(point);
    for (std::size_t i = 0; i < k; ++i) total[i] += g[i];
  }
  for (std::size_t i = 0; i < k; ++i) {
    total[i] = total[i] / static_cast<double>(steps) * (x[i] - baseline[i]);
  }
  return Attribution(std::move(total));
}

Attribution explain_smoothgrad(const Model& model, std::span<const double> x, double sigma,
                               std::size_t n, std::uint64_t seed) {
  require_gradient(model);
  check_input(model, x);
  if (n == 0) throw InvalidInput("smoothgrad needs n >= 1");
  if (sigma < 0.0) throw InvalidInput("smoothgrad sigma must be >= 0");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  const std::size_t k = x.size();
  std::vector<double> total(k, 0.0);
  std::vector<double> point(k);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < k; ++i) point[i] = x[i] + sigma * g(rng);
    const auto grad = model.gradient(point);
    for (std::size_t i = 0; i < k; ++i) total[i] += grad[i];
  }
  for (double& v : total) v /= static_cast<double>(n);
  return Attribution(std::move(total));
}

Attribution explain_shapley_exact(const Model& model, std::span<const double> x,
                                  const BaselineSpec& baseline) {
  require_baseline(model, baseline);
  check_input(model, x);
  const std::size_t k = x.size();
  if (k > kShapleyMaxFeatures) {
    throw ResourceLimit("exact Shapley enumeration capped at K <= 16");
  }

  // Evaluate f on every coalition once, indexed by retained-feature bitmask.
  const std::size_t masks = std::size_t{1} << k;
  std::vector<double> f(masks, 0.0);
  std::vector<double> point(k);
  for (std::size_t mask = 0; mask < masks; ++mask) {
    for (std::size_t i = 0; i < k; ++i) {
      point[i] = (mask >> i) & 1u ? x[i] : baseline[i];
    }
    f[mask] = model.value(point);
  }

  // weight(|S|) = |S|! (K - |S| - 1)! / K!
  std::vector<double> weight(k, 0.0);
  for (std::size_t s = 0; s < k; ++s) {
    double w = 1.0 / static_cast<double>(k);
    for (std::size_t i = 1; i <= s; ++i) {
      w *= static_cast<double>(i) / static_cast<double>(k - i);
    }
    weight[s] = w;
  }

  std::vector<double> phi(k, 0.0);
  for (std::size_t mask = 0; mask < masks; ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    for (std::size_t i = 0; i < k; ++i) {
      if ((mask >> i) & 1u) continue;
      phi[i] += weight[size] * (f[mask | (std::size_t{1} << i)] - f[mask]);
    }
  }
  return Attribution(std::move(phi));
}

// ---- Model perturbations -------------------------------------------------------

namespace {

TinyMlp randomize_mlp(const TinyMlp& model, RandomizeMode mode, std::size_t layer,
                      std::uint64_t seed) {
  const std::size_t num_layers = model.layers().size();
  if (mode != RandomizeMode::All && layer >= num_layers) {
    throw InvalidInput("layer index out of range");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<MlpLayer> layers = model.layers();
  for (std::size_t l = 0; l < num_layers; ++l) {
    const bool selected = mode == RandomizeMode::All ||
                          (mode == RandomizeMode::Layer && l == layer) ||
                          (mode == RandomizeMode::Progressive && l >= layer);
    if (!selected) continue;
    auto& w = layers[l].weights;
    const double scale = 1.0 / std::sqrt(static_cast<double>(w.cols()));
    for (std::size_t r = 0; r < w.rows(); ++r) {
      for (std::size_t c = 0; c < w.cols(); ++c) w(r, c) = scale * g(rng);
    }
    std::fill(layers[l].bias.begin(), layers[l].bias.end(), 0.0);
  }
  return TinyMlp(std::move(layers), model.output_index());
}

LinearModel randomize_linear(const LinearModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> w(model.weights().size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(w.size()));
  for (double& v : w) v = scale * g(rng);
  return LinearModel(std::move(w), 0.0, model.threshold());
}

}  // namespace

std::unique_ptr<Model> randomize_parameters(const Model& model, RandomizeMode mode,
                                            std::size_t layer, std::uint64_t seed) {
  if (!model.capabilities().parameters) {
    throw UnsupportedCapability("model does not expose parameters");
  }
  if (const auto* mlp = dynamic_cast<const TinyMlp*>(&model)) {
    return std::make_unique<TinyMlp>(randomize_mlp(*mlp, mode, layer, seed));
  }
  if (const auto* linear = dynamic_cast<const LinearModel*>(&model)) {
    if (mode != RandomizeMode::All && layer != 0) {
      throw InvalidInput("layer index out of range");
    }
    return std::make_unique<LinearModel>(randomize_linear(*linear, seed));
  }
  throw UnsupportedCapability("parameter randomization supports linear and mlp fixtures");
}

LinearModel fit_linear_least_squares(const Dataset& data, std::span<const double> labels) {
  if (labels.size() != data.size()) throw InvalidInput("label count mismatch");
  if (data.size() == 0) throw InvalidInput("cannot fit on an empty dataset");
  const std::size_t k = data.dimension();
  // Design [x, 1]; normal equations.
  linalg::Matrix a(k + 1, k + 1);
  std::vector<double> b(k + 1, 0.0);
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto row = data.row(r);
    for (std::size_t i = 0; i <= k; ++i) {
      const double xi = i < k ? row[i] : 1.0;
      b[i] += xi * labels[r];
      for (std::size_t j = 0; j <= k; ++j) {
        const double xj = j < k ? row[j] : 1.0;
        a(i, j) += xi * xj;
      }
    }
  }
  auto sol = linalg::solve(std::move(a), std::move(b));
  const double bias = sol.back();
  sol.pop_back();
  return LinearModel(std::move(sol), bias);
}

LinearModel fit_logistic(const Dataset& data, std::span<const double> labels,
                         std::size_t iterations, double learning_rate) {
  if (labels.size() != data.size()) throw InvalidInput("label count mismatch");
  if (data.size() == 0) throw InvalidInput("cannot fit on an empty dataset");
  const std::size_t k = data.dimension();
  std::vector<double> w(k, 0.0);
  double bias = 0.0;
  const double n = static_cast<double>(data.size());
  for (std::size_t it = 0; it < iterations; ++it) {
    std::vector<double> gw(k, 0.0);
    double gb = 0.0;
    for (std::size_t r = 0; r < data.size(); ++r) {
      const auto row = data.row(r);
      const double z = linalg::dot(w, row) + bias;
      const double p = 1.0 / (1.0 + std::exp(-z));
      const double err = p - (labels[r] != 0.0 ? 1.0 : 0.0);
      for (std::size_t i = 0; i < k; ++i) gw[i] += err * row[i];
      gb += err;
    }
    for (std::size_t i = 0; i < k; ++i) w[i] -= learning_rate * gw[i] / n;
    bias -= learning_rate * gb / n;
  }
  // value() is the logit; classification threshold at 0 (p >= 0.5).
  return LinearModel(std::move(w), bias, 0.0);
}

std::unique_ptr<Model> retrain_permuted_labels(RetrainTemplate tmpl, const Dataset& data,
                                               std::uint64_t seed) {
  if (!data.has_labels()) throw InvalidInput("retraining needs a labeled dataset");
  std::vector<double> labels(data.labels().begin(), data.labels().end());
  std::mt19937_64 rng(seed);
  std::shuffle(labels.begin(), labels.end(), rng);
  switch (tmpl) {
    case RetrainTemplate::Linear:
      return std::make_unique<LinearModel>(fit_linear_least_squares(data, labels));
    case RetrainTemplate::Logistic:
      return std::make_unique<LinearModel>(fit_logistic(data, labels));
  }
  throw UnsupportedCapability("non-retrainable template");
}

// ---- Best-subset surrogate ------------------------------------------------------

BestSubsetFit fit_best_subset_linear(const Model& model, const Dataset& data,
                                     std::size_t subset_size) {
  const std::size_t k = model.dimension();
  if (k != data.dimension()) throw InvalidInput("dataset dimension mismatch");
  if (k > 16) throw ResourceLimit("best-subset enumeration capped at K <= 16");
  if (subset_size > k) throw InvalidInput("subset size exceeds dimension");
  if (data.size() == 0) throw InvalidInput("cannot fit on an empty dataset");

  std::vector<double> targets(data.size());
  for (std::size_t r = 0; r < data.size(); ++r) targets[r] = model.value(data.row(r));

  auto fit_mse = [&](const std::vector<std::size_t>& feats, LinearSurrogate* out) {
    const std::size_t m = feats.size();
    linalg::Matrix a(m + 1, m + 1);
    std::vector<double> b(m + 1, 0.0);
    for (std::size_t r = 0; r < data.size(); ++r) {
      const auto row = data.row(r);
      for (std::size_t i = 0; i <= m; ++i) {
        const double xi = i < m ? row[feats[i]] : 1.0;
        b[i] += xi * targets[r];
        for (std::size_t j = 0; j <= m; ++j) {
          const double xj = j < m ? row[feats[j]] : 1.0;
          a(i, j) += xi * xj;
        }
      }
    }
    auto sol = linalg::solve(std::move(a), std::move(b));
    LinearSurrogate s;
    s.intercept = sol.back();
    s.coefficients.assign(k, 0.0);
    for (std::size_t i = 0; i < m; ++i) s.coefficients[feats[i]] = sol[i];
    double mse = 0.0;
    for (std::size_t r = 0; r < data.size(); ++r) {
      const double d = s.value(data.row(r)) - targets[r];
      mse += d * d;
    }
    *out = std::move(s);
    return mse / static_cast<double>(data.size());
  };

  bool found = false;
  BestSubsetFit best;
  const std::size_t masks = std::size_t{1} << k;
  for (std::size_t mask = 0; mask < masks; ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != subset_size) continue;
    std::vector<std::size_t> feats;
    for (std::size_t i = 0; i < k; ++i) {
      if ((mask >> i) & 1u) feats.push_back(i);
    }
    LinearSurrogate s;
    double mse;
    try {
      mse = fit_mse(feats, &s);
    } catch (const DegenerateInput&) {
      continue;  // collinear subset
    }
    if (!found || mse < best.mse) {
      found = true;
      best = BestSubsetFit{FeatureSubset(feats, k), std::move(s), mse};
    }
  }
  if (!found) throw DegenerateInput("every candidate subset was singular");
  return best;
}

}  // namespace xplain::fixtures
