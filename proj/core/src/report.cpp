#include "xplain/report.hpp"

#include "xplain/errors.hpp"

namespace xplain {

std::string estimator_to_string(Estimator e) {
  switch (e) {
    case Estimator::Exact: return "exact";
    case Estimator::MonteCarlo: return "monte-carlo";
    case Estimator::Search: return "search";
  }
  return "?";
}

double Curve::auc() const {
  if (grid.size() != values.size()) throw InvalidInput("curve grid/value size mismatch");
  double area = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    area += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
  }
  return area;
}

Json Curve::to_json() const {
  return Json{{"grid", grid}, {"values", values}, {"auc", auc()}};
}

MetricReport& MetricReport::with_scalar(double v) {
  value = v;
  return *this;
}

MetricReport& MetricReport::with_curve(const Curve& c) {
  value = c.to_json();
  return *this;
}

MetricReport& MetricReport::with_value(Json v) {
  value = std::move(v);
  return *this;
}

MetricReport& MetricReport::stochastic(Estimator kind, std::uint64_t seed_used,
                                       std::uint64_t n) {
  estimator = kind;
  seed = seed_used;
  samples = n;
  return *this;
}

MetricReport& MetricReport::warn(std::string message) {
  warnings.push_back(std::move(message));
  return *this;
}

void MetricReport::validate() const {
  if (estimator != Estimator::Exact && (!seed.has_value() || !samples.has_value())) {
    throw InvalidInput("stochastic metric report '" + name +
                       "' must record seed and sample count");
  }
}

Json MetricReport::to_json() const {
  validate();
  Json j;
  j["name"] = name;
  j["params"] = params;
  j["value"] = value;
  j["estimator"] = estimator_to_string(estimator);
  if (seed.has_value()) j["seed"] = *seed;
  if (samples.has_value()) j["samples"] = *samples;
  if (!warnings.empty()) j["warnings"] = warnings;
  return j;
}

}  // namespace xplain
