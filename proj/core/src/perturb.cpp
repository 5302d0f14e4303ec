#include "xplain/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xplain/errors.hpp"
#include "xplain/linalg.hpp"

namespace xplain::perturb {

namespace {

constexpr double kMembershipSlack = 1e-9;

bool supported_p(double p) {
  return p == 1.0 || p == 2.0 || std::isinf(p);
}

double uniform01(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

std::vector<double> sample_one(std::span<const double> x, const Region& region,
                               std::mt19937_64& rng) {
  const std::size_t k = x.size();
  if (const auto* ball = std::get_if<LpBall>(&region)) {
    std::vector<double> out(x.begin(), x.end());
    if (ball->radius == 0.0) return out;
    const double scale =
        ball->radius * std::pow(uniform01(rng), 1.0 / static_cast<double>(k));
    if (std::isinf(ball->p)) {
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (std::size_t i = 0; i < k; ++i) out[i] += ball->radius * u(rng);
      return out;
    }
    if (ball->p == 2.0) {
      std::normal_distribution<double> g(0.0, 1.0);
      std::vector<double> dir(k);
      double norm = 0.0;
      do {
        for (double& d : dir) d = g(rng);
        norm = linalg::norm2(dir);
      } while (norm == 0.0);
      for (std::size_t i = 0; i < k; ++i) out[i] += dir[i] / norm * scale;
      return out;
    }
    // p == 1: Dirichlet(1,...,1) point on the simplex, random orthant.
    std::exponential_distribution<double> e(1.0);
    std::vector<double> dir(k);
    double total = 0.0;
    for (double& d : dir) {
      d = e(rng);
      total += d;
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < k; ++i) {
      const double sign = u(rng) < 0.5 ? -1.0 : 1.0;
      out[i] += sign * dir[i] / total * scale;
    }
    return out;
  }
  if (const auto* box = std::get_if<Hyperbox>(&region)) {
    std::vector<double> out(k);
    for (std::size_t i = 0; i < k; ++i) {
      out[i] = std::uniform_real_distribution<double>(box->lo[i], box->hi[i])(rng);
    }
    return out;
  }
  if (const auto* flip = std::get_if<GroupFlip>(&region)) {
    std::uniform_int_distribution<std::size_t> pick(0, flip->targets.size() - 1);
    return flip_group(x, flip->feature, flip->targets[pick(rng)]);
  }
  const auto& shift = std::get<ConstantShift>(region);
  std::vector<double> out(x.begin(), x.end());
  const double d =
      std::uniform_real_distribution<double>(-shift.magnitude, shift.magnitude)(rng);
  for (double& v : out) v += d;
  return out;
}

// Feasible interval of coordinate `j` with the other coordinates of `current`
// held fixed. Empty optional for regions without per-coordinate freedom.
std::optional<std::pair<double, double>> coord_interval(const Region& region,
                                                        std::span<const double> x,
                                                        std::span<const double> current,
                                                        std::size_t j) {
  if (const auto* ball = std::get_if<LpBall>(&region)) {
    if (std::isinf(ball->p)) return std::pair{x[j] - ball->radius, x[j] + ball->radius};
    double used = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i == j) continue;
      const double d = std::abs(current[i] - x[i]);
      used += ball->p == 2.0 ? d * d : d;
    }
    const double cap = ball->p == 2.0 ? ball->radius * ball->radius : ball->radius;
    const double slack = std::max(cap - used, 0.0);
    const double room = ball->p == 2.0 ? std::sqrt(slack) : slack;
    return std::pair{x[j] - room, x[j] + room};
  }
  if (const auto* box = std::get_if<Hyperbox>(&region)) {
    return std::pair{box->lo[j], box->hi[j]};
  }
  return std::nullopt;
}

}  // namespace

Hyperbox Hyperbox::around(std::span<const double> x, double half_width) {
  if (half_width < 0.0) throw InvalidInput("hyperbox half-width must be >= 0");
  Hyperbox box;
  box.lo.reserve(x.size());
  box.hi.reserve(x.size());
  for (double v : x) {
    box.lo.push_back(v - half_width);
    box.hi.push_back(v + half_width);
  }
  return box;
}

bool Hyperbox::contains(std::span<const double> x) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

void PerturbationSpec::validate(std::span<const double> anchor) const {
  if (budget == 0) throw InvalidInput("perturbation budget must be >= 1");
  if (const auto* ball = std::get_if<LpBall>(&region)) {
    if (ball->radius < 0.0) throw InvalidInput("ball radius must be >= 0");
    if (!supported_p(ball->p)) throw InvalidInput("unsupported p-norm (use 1, 2 or inf)");
  } else if (const auto* box = std::get_if<Hyperbox>(&region)) {
    if (box->lo.size() != anchor.size() || box->hi.size() != anchor.size()) {
      throw InvalidInput("hyperbox dimension mismatch");
    }
    if (!box->contains(anchor)) throw InvalidInput("hyperbox must contain the anchor input");
  } else if (const auto* flip = std::get_if<GroupFlip>(&region)) {
    if (flip->feature >= anchor.size()) throw InvalidInput("flip feature out of range");
    if (flip->targets.empty()) throw InvalidInput("group flip needs target values");
  } else if (const auto* shift = std::get_if<ConstantShift>(&region)) {
    if (shift->magnitude < 0.0) throw InvalidInput("shift magnitude must be >= 0");
  }
}

bool region_contains(const Region& region, std::span<const double> anchor,
                     std::span<const double> candidate) {
  if (candidate.size() != anchor.size()) return false;
  if (const auto* ball = std::get_if<LpBall>(&region)) {
    const double d = linalg::norm_lp(linalg::sub(candidate, anchor), ball->p);
    return d <= ball->radius + kMembershipSlack * (1.0 + ball->radius);
  }
  if (const auto* box = std::get_if<Hyperbox>(&region)) {
    for (std::size_t i = 0; i < candidate.size(); ++i) {
      const double slack = kMembershipSlack * (1.0 + std::abs(box->hi[i] - box->lo[i]));
      if (candidate[i] < box->lo[i] - slack || candidate[i] > box->hi[i] + slack) {
        return false;
      }
    }
    return true;
  }
  if (const auto* flip = std::get_if<GroupFlip>(&region)) {
    for (std::size_t i = 0; i < candidate.size(); ++i) {
      if (i == flip->feature) continue;
      if (candidate[i] != anchor[i]) return false;
    }
    return std::find(flip->targets.begin(), flip->targets.end(),
                     candidate[flip->feature]) != flip->targets.end();
  }
  const auto& shift = std::get<ConstantShift>(region);
  const double d0 = candidate[0] - anchor[0];
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (std::abs((candidate[i] - anchor[i]) - d0) > kMembershipSlack * (1.0 + std::abs(d0))) {
      return false;
    }
  }
  return std::abs(d0) <= shift.magnitude + kMembershipSlack * (1.0 + shift.magnitude);
}

std::vector<std::vector<double>> sample_region(std::span<const double> x,
                                               const PerturbationSpec& spec) {
  linalg::check_finite(x, "sample_region anchor");
  spec.validate(x);
  std::mt19937_64 rng(spec.seed);
  std::vector<std::vector<double>> out;
  out.reserve(spec.budget);
  for (std::size_t i = 0; i < spec.budget; ++i) out.push_back(sample_one(x, spec.region, rng));
  return out;
}

std::vector<double> flip_group(std::span<const double> x, std::size_t feature, double value) {
  if (feature >= x.size()) throw InvalidInput("flip feature index out of range");
  if (!std::isfinite(value)) throw InvalidInput("flip target must be finite");
  std::vector<double> out(x.begin(), x.end());
  out[feature] = value;
  return out;
}

SearchStrategy strategy_from_name(const std::string& name) {
  if (name == "random") return SearchStrategy::Random;
  if (name == "random-refine" || name == "refine") return SearchStrategy::RandomRefine;
  if (name == "gradient" || name == "gradient-ascent") return SearchStrategy::GradientAscent;
  throw InvalidInput("unknown search strategy: " + name);
}

namespace {

class SearchState {
 public:
  SearchState(const Objective& objective, std::span<const double> anchor,
              const Region& region, std::size_t budget)
      : objective_(objective), anchor_(anchor), region_(region), budget_(budget) {}

  // Evaluates a candidate, tracking the running best. Returns false once the
  // budget is exhausted.
  bool consider(std::span<const double> candidate) {
    if (evaluations_ >= budget_) return false;
    if (!region_contains(region_, anchor_, candidate)) return true;  // skip, keep going
    const double v = objective_.value(candidate);
    ++evaluations_;
    if (std::isnan(v)) throw NumericError("search objective returned NaN");
    if (!has_best_ || v > best_value_) {
      has_best_ = true;
      best_value_ = v;
      best_.assign(candidate.begin(), candidate.end());
      trace_.emplace_back(evaluations_, v);
    }
    return evaluations_ < budget_;
  }

  bool exhausted() const { return evaluations_ >= budget_; }
  bool has_best() const { return has_best_; }
  const std::vector<double>& best() const { return best_; }
  double best_value() const { return best_value_; }

  SearchResult finish() && {
    if (!has_best_) throw DegenerateInput("search evaluated no feasible point");
    return SearchResult{std::move(best_), best_value_, evaluations_, std::move(trace_)};
  }

 private:
  const Objective& objective_;
  std::span<const double> anchor_;
  const Region& region_;
  std::size_t budget_;
  std::size_t evaluations_ = 0;
  bool has_best_ = false;
  double best_value_ = -std::numeric_limits<double>::infinity();
  std::vector<double> best_;
  std::vector<std::pair<std::size_t, double>> trace_;
};

void refine_coordinates(SearchState& state, std::span<const double> x, const Region& region,
                        std::size_t passes) {
  if (std::holds_alternative<GroupFlip>(region)) return;  // already enumerated
  const std::size_t k = x.size();

  if (const auto* shift = std::get_if<ConstantShift>(&region)) {
    // One free parameter: the diagonal offset.
    double step = shift->magnitude;
    for (std::size_t pass = 0; pass < passes && step > 0.0; ++pass, step *= 0.5) {
      const double d0 = state.best()[0] - x[0];
      for (double cand : {d0 - step, d0 + step, -shift->magnitude, shift->magnitude, 0.0}) {
        const double d = std::clamp(cand, -shift->magnitude, shift->magnitude);
        std::vector<double> candidate(x.begin(), x.end());
        for (double& v : candidate) v += d;
        if (!state.consider(candidate)) return;
      }
    }
    return;
  }

  double step_scale = 1.0;
  for (std::size_t pass = 0; pass < passes; ++pass, step_scale *= 0.5) {
    bool improved = false;
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<double> candidate = state.best();
      const auto interval = coord_interval(region, x, candidate, j);
      if (!interval.has_value()) continue;
      const auto [lo, hi] = *interval;
      const double width = hi - lo;
      const double before = state.best_value();
      // Interval endpoints, the anchor coordinate, and two local steps.
      for (double cand : {lo, hi, x[j], candidate[j] - step_scale * 0.5 * width,
                          candidate[j] + step_scale * 0.5 * width}) {
        candidate[j] = std::clamp(cand, lo, hi);
        if (!state.consider(candidate)) return;
        candidate = state.best();
      }
      if (state.best_value() > before) improved = true;
    }
    if (!improved && step_scale < 1e-12) break;
  }
}

std::vector<double> fd_gradient(const Objective& objective, std::span<const double> at,
                                SearchState& state) {
  // Central differences; each probe costs budget via `consider`.
  std::vector<double> grad(at.size(), 0.0);
  std::vector<double> probe(at.begin(), at.end());
  for (std::size_t i = 0; i < at.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(at[i]));
    probe[i] = at[i] + h;
    const double up = objective.value(probe);
    probe[i] = at[i] - h;
    const double down = objective.value(probe);
    probe[i] = at[i];
    if (std::isnan(up) || std::isnan(down)) {
      throw NumericError("search objective returned NaN");
    }
    grad[i] = (up - down) / (2.0 * h);
  }
  (void)state;
  return grad;
}

void project_into(const Region& region, std::span<const double> x, std::vector<double>& p) {
  if (const auto* ball = std::get_if<LpBall>(&region)) {
    if (std::isinf(ball->p)) {
      for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::clamp(p[i], x[i] - ball->radius, x[i] + ball->radius);
      }
      return;
    }
    auto delta = linalg::sub(p, x);
    const double d = linalg::norm_lp(delta, ball->p);
    if (d > ball->radius && d > 0.0) {
      const double f = ball->radius / d;
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = x[i] + delta[i] * f;
    }
    return;
  }
  if (const auto* box = std::get_if<Hyperbox>(&region)) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::clamp(p[i], box->lo[i], box->hi[i]);
    return;
  }
  if (const auto* shift = std::get_if<ConstantShift>(&region)) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) d += p[i] - x[i];
    d = std::clamp(d / static_cast<double>(p.size()), -shift->magnitude, shift->magnitude);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = x[i] + d;
    return;
  }
  const auto& flip = std::get<GroupFlip>(region);
  std::vector<double> snapped(x.begin(), x.end());
  double best = flip.targets.front();
  for (double t : flip.targets) {
    if (std::abs(t - p[flip.feature]) < std::abs(best - p[flip.feature])) best = t;
  }
  snapped[flip.feature] = best;
  p = std::move(snapped);
}

void gradient_ascent(SearchState& state, const Objective& objective, std::span<const double> x,
                     const Region& region) {
  double eta = 0.1;
  std::vector<double> current = state.best();
  while (!state.exhausted()) {
    const auto grad = objective.gradient ? objective.gradient(current)
                                         : fd_gradient(objective, current, state);
    const double gn = linalg::norm2(grad);
    if (gn == 0.0) break;
    std::vector<double> next = current;
    for (std::size_t i = 0; i < next.size(); ++i) next[i] += eta * grad[i] / gn;
    project_into(region, x, next);
    const double before = state.best_value();
    if (!state.consider(next)) break;
    if (state.best_value() > before) {
      current = state.best();
      eta *= 1.5;
    } else {
      eta *= 0.5;
      if (eta < 1e-12) break;
    }
  }
}

}  // namespace

SearchResult worst_case_search(const Objective& objective, std::span<const double> x,
                               const PerturbationSpec& spec, SearchStrategy strategy,
                               std::size_t budget) {
  if (!objective.value) throw InvalidInput("search objective is empty");
  linalg::check_finite(x, "search anchor");
  spec.validate(x);
  if (budget == 0) budget = kDefaultSearchBudget;

  SearchState state(objective, x, spec.region, budget);

  if (const auto* flip = std::get_if<GroupFlip>(&spec.region)) {
    // Finite region: enumerate it.
    for (double t : flip->targets) {
      if (!state.consider(flip_group(x, flip->feature, t))) break;
    }
    return std::move(state).finish();
  }

  if (region_contains(spec.region, x, x)) state.consider(x);

  const std::size_t random_budget =
      strategy == SearchStrategy::Random ? budget : std::max<std::size_t>(budget / 2, 1);
  PerturbationSpec sampling = spec;
  sampling.budget = random_budget;
  for (const auto& candidate : sample_region(x, sampling)) {
    if (!state.consider(candidate)) break;
  }

  switch (strategy) {
    case SearchStrategy::Random:
      break;
    case SearchStrategy::RandomRefine:
      refine_coordinates(state, x, spec.region, 40);
      break;
    case SearchStrategy::GradientAscent:
      gradient_ascent(state, objective, x, spec.region);
      refine_coordinates(state, x, spec.region, 10);
      break;
  }
  return std::move(state).finish();
}

double eval_targeted_loss(const Model& model, const Explainer& explainer,
                          std::span<const double> x, std::span<const double> x_prime,
                          std::span<const double> x_target, double lambda) {
  check_input(model, x);
  check_input(model, x_prime);
  if (x_target.size() != x.size()) throw InvalidInput("target explanation dimension mismatch");
  const Attribution e = explainer(model, x_prime);
  if (e.size() != x_target.size()) throw InvalidInput("explanation dimension mismatch");
  const double expl_term = linalg::norm2(linalg::sub(e.weights, x_target));
  const double out_diff = model.value(x_prime) - model.value(x);
  return expl_term * expl_term + lambda * out_diff * out_diff;
}

}  // namespace xplain::perturb
