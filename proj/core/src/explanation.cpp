#include "xplain/explanation.hpp"

#include <algorithm>

#include "xplain/errors.hpp"

namespace xplain {

double LinearSurrogate::value(std::span<const double> z) const {
  if (z.size() != coefficients.size()) {
    throw InvalidInput("surrogate input dimension mismatch");
  }
  double out = intercept;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double a = anchor.empty() ? 0.0 : anchor[i];
    out += coefficients[i] * (z[i] - a);
  }
  return out;
}

bool Predicate::holds(std::span<const double> x) const {
  if (feature >= x.size()) throw InvalidInput("predicate feature index out of range");
  const double v = x[feature];
  switch (op) {
    case PredicateOp::Lt: return v < value;
    case PredicateOp::Le: return v <= value;
    case PredicateOp::Eq: return v == value;
    case PredicateOp::Ge: return v >= value;
    case PredicateOp::Gt: return v > value;
  }
  return false;
}

bool Condition::holds(std::span<const double> x) const {
  return std::all_of(predicates.begin(), predicates.end(),
                     [&](const Predicate& p) { return p.holds(x); });
}

std::vector<std::size_t> Condition::features() const {
  std::vector<std::size_t> out;
  for (const Predicate& p : predicates) {
    if (std::find(out.begin(), out.end(), p.feature) == out.end()) out.push_back(p.feature);
  }
  return out;
}

int DecisionSet::classify(std::span<const double> x) const {
  for (const DecisionRule& rule : rules) {
    if (rule.outer.holds(x) && rule.inner.holds(x)) return rule.label;
  }
  return default_label;
}

void DecisionSet::validate(std::size_t dimension) const {
  for (const DecisionRule& rule : rules) {
    if (rule.outer.predicates.empty() || rule.inner.predicates.empty()) {
      throw InvalidInput("decision rule with empty condition");
    }
    for (const Condition* cond : {&rule.outer, &rule.inner}) {
      for (const Predicate& p : cond->predicates) {
        if (p.feature >= dimension) {
          throw InvalidInput("decision rule predicate feature out of range");
        }
      }
    }
  }
}

std::vector<double> ConceptExplanation::concepts(std::span<const double> x) const {
  return concept_map.multiply(x);
}

double ConceptExplanation::value(std::span<const double> x) const {
  const auto c = concepts(x);
  if (head_weights.size() != c.size()) {
    throw InvalidInput("concept head dimension mismatch");
  }
  double out = head_bias;
  for (std::size_t i = 0; i < c.size(); ++i) out += head_weights[i] * c[i];
  return out;
}

std::string op_to_string(PredicateOp op) {
  switch (op) {
    case PredicateOp::Lt: return "<";
    case PredicateOp::Le: return "<=";
    case PredicateOp::Eq: return "=";
    case PredicateOp::Ge: return ">=";
    case PredicateOp::Gt: return ">";
  }
  return "?";
}

PredicateOp op_from_string(const std::string& s) {
  if (s == "<") return PredicateOp::Lt;
  if (s == "<=") return PredicateOp::Le;
  if (s == "=" || s == "==") return PredicateOp::Eq;
  if (s == ">=") return PredicateOp::Ge;
  if (s == ">") return PredicateOp::Gt;
  throw InvalidInput("unknown predicate operator: " + s);
}

}  // namespace xplain
