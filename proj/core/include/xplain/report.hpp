#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace xplain {

using Json = nlohmann::ordered_json;

enum class Estimator { Exact, MonteCarlo, Search };

std::string estimator_to_string(Estimator e);

/// Points (s, value) of a fidelity-style curve plus its trapezoidal AUC.
struct Curve {
  std::vector<double> grid;
  std::vector<double> values;

  double auc() const;
  Json to_json() const;
};

/// One computed metric: name, parameters, value(s), and enough provenance
/// (seed, sample count, estimator) to rerun it.
struct MetricReport {
  std::string name;
  Json params = Json::object();
  Json value;  // scalar, curve object, or structured table
  Estimator estimator = Estimator::Exact;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::vector<std::string> warnings;

  MetricReport& with_scalar(double v);
  MetricReport& with_curve(const Curve& c);
  MetricReport& with_value(Json v);
  MetricReport& stochastic(Estimator kind, std::uint64_t seed_used, std::uint64_t n);
  MetricReport& warn(std::string message);

  /// Throws InvalidInput if a stochastic report is missing seed or samples.
  void validate() const;
  Json to_json() const;
};

}  // namespace xplain
