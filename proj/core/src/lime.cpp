#include <cmath>
#include <random>

#include "xplain/errors.hpp"
#include "xplain/fixtures.hpp"

namespace xplain::fixtures {

namespace {

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

}  // namespace

LimeSample lime_sample(const Model& model, std::span<const double> x,
                       const LimeOptions& opts) {
  check_input(model, x);
  if (opts.samples < model.dimension() + 1) {
    throw InvalidInput("lime needs at least K+1 samples");
  }
  if (opts.kernel_width <= 0.0) throw InvalidInput("kernel width must be positive");
  if (opts.sampler_sigma < 0.0) throw InvalidInput("sampler sigma must be >= 0");

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  LimeSample out;
  out.points.reserve(opts.samples);
  out.weights.reserve(opts.samples);
  const double w2 = opts.kernel_width * opts.kernel_width;
  for (std::size_t s = 0; s < opts.samples; ++s) {
    std::vector<double> point(x.begin(), x.end());
    double d2 = 0.0;
    for (double& v : point) {
      const double step = opts.sampler_sigma * g(rng);
      v += step;
      d2 += step * step;
    }
    out.points.push_back(std::move(point));
    out.weights.push_back(std::exp(-d2 / w2));
  }
  return out;
}

std::vector<double> weighted_lasso(const std::vector<std::vector<double>>& rows,
                                   const std::vector<double>& targets,
                                   const std::vector<double>& weights, double lambda1) {
  if (rows.empty()) throw InvalidInput("weighted fit needs rows");
  if (rows.size() != targets.size() || rows.size() != weights.size()) {
    throw InvalidInput("weighted fit size mismatch");
  }
  const std::size_t k = rows.front().size();

  if (lambda1 == 0.0) {
    linalg::Matrix a(k, k);
    std::vector<double> b(k, 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto& z = rows[r];
      const double w = weights[r];
      for (std::size_t i = 0; i < k; ++i) {
        b[i] += w * z[i] * targets[r];
        for (std::size_t j = 0; j < k; ++j) a(i, j) += w * z[i] * z[j];
      }
    }
    return linalg::solve(std::move(a), std::move(b));
  }

  // Coordinate descent on sum_r w_r (c.z_r - t_r)^2 + lambda1 |c|_1.
  std::vector<double> coef(k, 0.0);
  std::vector<double> residual(targets);  // t_r - c.z_r
  std::vector<double> col_norm(k, 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < k; ++i) col_norm[i] += weights[r] * rows[r][i] * rows[r][i];
  }
  for (std::size_t pass = 0; pass < 500; ++pass) {
    double delta = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (col_norm[i] == 0.0) continue;
      double rho = 0.0;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        rho += weights[r] * rows[r][i] * (residual[r] + coef[i] * rows[r][i]);
      }
      const double updated = soft_threshold(rho, lambda1 / 2.0) / col_norm[i];
      const double change = updated - coef[i];
      if (change != 0.0) {
        for (std::size_t r = 0; r < rows.size(); ++r) residual[r] -= change * rows[r][i];
        coef[i] = updated;
        delta = std::max(delta, std::abs(change));
      }
    }
    if (delta < 1e-12) break;
  }
  return coef;
}

LinearSurrogate fit_local_linear(const Model& model, std::span<const double> x,
                                 const LimeOptions& opts) {
  const LimeSample sample = lime_sample(model, x, opts);
  const std::size_t k = model.dimension();
  const double fx = model.value(x);

  // Regress f(x') - f(x) on x' - x so the coefficients minimize the
  // kernel-weighted local infidelity; the intercept is pinned to f(x).
  double weight_total = 0.0;
  for (double w : sample.weights) weight_total += w;
  if (weight_total <= 0.0) throw DegenerateInput("all kernel weights vanished");

  std::vector<std::vector<double>> rows;
  std::vector<double> targets;
  std::vector<double> weights;
  rows.reserve(sample.points.size());
  for (std::size_t s = 0; s < sample.points.size(); ++s) {
    std::vector<double> z(k);
    for (std::size_t i = 0; i < k; ++i) z[i] = sample.points[s][i] - x[i];
    rows.push_back(std::move(z));
    targets.push_back(model.value(sample.points[s]) - fx);
    weights.push_back(sample.weights[s] / weight_total);
  }

  if (opts.lambda_fairness > 0.0) {
    if (!opts.protected_feature.has_value() || opts.protected_targets.empty()) {
      throw InvalidInput("fairness penalty needs a protected feature and target values");
    }
    const std::size_t j = *opts.protected_feature;
    if (j >= k) throw InvalidInput("protected feature index out of range");
    // Pseudo-rows tying the protected coefficient to the model's actual
    // response under each protected flip.
    for (double v : opts.protected_targets) {
      std::vector<double> flipped(x.begin(), x.end());
      flipped[j] = v;
      std::vector<double> z(k, 0.0);
      z[j] = v - x[j];
      rows.push_back(std::move(z));
      targets.push_back(model.value(flipped) - fx);
      weights.push_back(opts.lambda_fairness);
    }
  }

  LinearSurrogate out;
  out.intercept = fx;
  out.anchor.assign(x.begin(), x.end());
  out.coefficients = weighted_lasso(rows, targets, weights, opts.lambda_sparsity);
  return out;
}

}  // namespace xplain::fixtures
