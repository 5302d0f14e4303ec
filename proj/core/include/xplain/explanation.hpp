#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "xplain/linalg.hpp"
#include "xplain/subset.hpp"

namespace xplain {

/// value(z) = intercept + coefficients . (z - anchor). Local surrogates anchor
/// at the explained input; global surrogates use a zero anchor.
struct LinearSurrogate {
  double intercept = 0.0;
  std::vector<double> coefficients;
  std::vector<double> anchor;

  double value(std::span<const double> z) const;
  std::size_t dimension() const { return coefficients.size(); }
};

enum class PredicateOp { Lt, Le, Eq, Ge, Gt };

struct Predicate {
  std::size_t feature = 0;
  PredicateOp op = PredicateOp::Le;
  double value = 0.0;

  bool holds(std::span<const double> x) const;
  bool operator==(const Predicate&) const = default;
};

/// Conjunction of predicates; never empty in a valid rule.
struct Condition {
  std::vector<Predicate> predicates;

  bool holds(std::span<const double> x) const;
  std::size_t width() const { return predicates.size(); }
  std::vector<std::size_t> features() const;
};

/// Two-level if-then rule: if `outer` holds and `inner` holds, predict `label`.
struct DecisionRule {
  Condition outer;
  Condition inner;
  int label = 0;
};

/// Unordered rule collection acting as a global surrogate classifier.
/// Prediction is the label of the first matching rule, else `default_label`.
struct DecisionSet {
  std::vector<DecisionRule> rules;
  int default_label = 0;

  int classify(std::span<const double> x) const;
  /// Throws InvalidInput when a rule has an empty condition.
  void validate(std::size_t dimension) const;
};

/// Indices of representative dataset rows.
struct ExampleSet {
  std::vector<std::size_t> indices;
};

/// Linear concept map h(x) = H x plus a linear head over concept scores.
struct ConceptExplanation {
  linalg::Matrix concept_map;  // C x K
  std::vector<double> head_weights;
  double head_bias = 0.0;

  std::vector<double> concepts(std::span<const double> x) const;
  double value(std::span<const double> x) const;
  std::size_t num_concepts() const { return concept_map.rows(); }
};

using Explanation =
    std::variant<Attribution, LinearSurrogate, DecisionSet, ExampleSet, ConceptExplanation>;

std::string op_to_string(PredicateOp op);
PredicateOp op_from_string(const std::string& s);

}  // namespace xplain
