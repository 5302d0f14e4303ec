#include <cmath>

#include "xplain/errors.hpp"
#include "xplain/fixtures.hpp"

namespace xplain::fixtures {

Attribution LrpResult::attribution() const {
  return Attribution(layer_relevances.front());
}

std::vector<double> LrpResult::conservation_residuals() const {
  std::vector<double> out;
  out.reserve(layer_relevances.size());
  for (const auto& layer : layer_relevances) {
    double sum = 0.0;
    for (double r : layer) sum += r;
    out.push_back(std::abs(sum - output_value));
  }
  return out;
}

LrpResult explain_lrp(const TinyMlp& model, std::span<const double> x, LrpOptions opts) {
  for (const auto& layer : model.layers()) {
    if (layer.activation == Activation::Softplus) {
      throw UnsupportedCapability("relevance propagation supports relu/linear nets only");
    }
  }
  if (opts.logit >= model.num_outputs()) throw InvalidInput("logit index out of range");

  const auto acts = model.forward_trace(x);  // index 0 = input
  const std::size_t num_layers = model.layers().size();

  LrpResult result;
  result.output_value = acts.back()[opts.logit];
  result.layer_relevances.assign(num_layers + 1, {});

  // Relevance starts as the chosen output's value and flows backwards,
  // each neuron splitting its relevance over inputs proportionally to
  // their contribution a_i * w_ik to the pre-activation.
  std::vector<double> relevance(acts.back().size(), 0.0);
  relevance[opts.logit] = result.output_value;
  result.layer_relevances[num_layers] = relevance;

  for (std::size_t l = num_layers; l-- > 0;) {
    const auto& layer = model.layers()[l];
    const auto& inputs = acts[l];
    std::vector<double> prev(inputs.size(), 0.0);
    for (std::size_t kk = 0; kk < layer.weights.rows(); ++kk) {
      if (relevance[kk] == 0.0) continue;
      double z = layer.bias[kk];
      for (std::size_t i = 0; i < inputs.size(); ++i) z += inputs[i] * layer.weights(kk, i);
      double denom = z;
      if (opts.epsilon > 0.0) {
        denom += z >= 0.0 ? opts.epsilon : -opts.epsilon;
      }
      if (denom == 0.0) continue;  // nothing to distribute (0/0 convention)
      const double share = relevance[kk] / denom;
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        prev[i] += share * inputs[i] * layer.weights(kk, i);
      }
    }
    relevance = std::move(prev);
    result.layer_relevances[l] = relevance;
  }
  return result;
}

}  // namespace xplain::fixtures
