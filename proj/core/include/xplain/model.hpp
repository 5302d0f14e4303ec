#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "xplain/subset.hpp"

namespace xplain {

struct Capabilities {
  bool gradient = false;
  bool representation = false;
  bool logits = false;
  bool parameters = false;
  bool concurrent_safe = true;
};

/// An evaluable predictor. `value` is the scalar prediction every metric
/// consumes; optional surfaces (gradient, intermediate representation,
/// per-class logits, class decision) are gated by declared capabilities and
/// throw UnsupportedCapability when absent.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::size_t dimension() const = 0;
  virtual Capabilities capabilities() const = 0;
  virtual double value(std::span<const double> x) const = 0;

  virtual std::vector<double> gradient(std::span<const double> x) const;
  virtual std::vector<double> representation(std::span<const double> x) const;
  virtual std::vector<double> logits(std::span<const double> x) const;
  /// Gradient of logit `i` with respect to the input.
  virtual std::vector<double> logit_gradient(std::span<const double> x, std::size_t i) const;

  virtual bool has_decision() const { return false; }
  virtual std::size_t num_classes() const { return 0; }
  virtual int decide(std::span<const double> x) const;
};

/// Validates dimension and finiteness of an input before evaluation.
void check_input(const Model& model, std::span<const double> x);

/// A local feature-attribution explainer: model + input -> K weights.
using Explainer = std::function<Attribution(const Model&, std::span<const double>)>;

/// Per-logit attribution explainer, for models exposing several outputs.
using LogitExplainer =
    std::function<Attribution(const Model&, std::span<const double>, std::size_t)>;

}  // namespace xplain
