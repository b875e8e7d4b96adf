#include "elicit/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "elicit/simplex_search.hpp"

namespace elicit {

namespace {

using Params = std::array<double, 2>;  // (location, log scale)

constexpr int kIterationCap = 2000;
constexpr int kMaxRestarts = 8;
constexpr double kImprovementTolerance = 1e-14;

LocationScaleDistribution make_dist(const FamilyKind& family, const Params& p) {
  return LocationScaleDistribution(family, p[0], std::exp(p[1]));
}

bool admissible(const Params& p) { return std::isfinite(p[0]) && std::isfinite(p[1]) && std::fabs(p[1]) < 700.0; }

// Line through the outermost judgements in (standard quantile, value) space.
LocationScaleDistribution surrogate_start(const FamilyKind& family, const JudgementSet& set) {
  const auto& first = set[0];
  const auto& last = set[set.size() - 1];
  const double z_first = standard_quantile(family, first.probability);
  const double z_last = standard_quantile(family, last.probability);
  double scale = (last.value - first.value) / (z_last - z_first);
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;
  return LocationScaleDistribution(family, first.value - scale * z_first, scale);
}

LocationScaleDistribution starting_point(const FamilyKind& family, const JudgementSet& set) {
  if (!complementary_pairs(set).empty()) return fit_exact_symmetric(family, set).dist;
  return surrogate_start(family, set);
}

// Simplex descent restarted from its own best point until a restart stops paying off.
template <class Objective>
SimplexResult<2> descend(Objective&& objective, const Params& start, double location_step, double log_scale_step) {
  SimplexOptions options;
  options.max_iterations = kIterationCap;
  auto best = simplex_minimize<2>(objective, start, {location_step, log_scale_step}, options);
  int total_iterations = best.iterations;
  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    const double step = location_step * std::exp(best.point[1] - start[1]);
    auto next = simplex_minimize<2>(objective, best.point, {step, log_scale_step}, options);
    total_iterations += next.iterations;
    const double improvement = best.value - next.value;
    if (next.value < best.value) best = next;
    if (!(improvement > kImprovementTolerance * std::max(1e-300, std::fabs(best.value)))) break;
  }
  best.iterations = total_iterations;
  return best;
}

}  // namespace

const char* to_string(FitMethod method) {
  return method == FitMethod::ExactSymmetric ? "exact_symmetric" : "least_squares";
}

FitResult evaluate_fit(const LocationScaleDistribution& dist, const JudgementSet& set, FitMethod method) {
  FitResult fit{dist, {}, 0.0, 0.0, method};
  fit.residuals.reserve(set.size());
  for (const auto& j : set.judgements()) {
    const double r = dist.cdf(j.value) - j.probability;
    fit.residuals.push_back(r);
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::fabs(r));
    fit.sse += r * r;
  }
  return fit;
}

FitResult fit_exact_symmetric(const FamilyKind& family, const JudgementSet& set) {
  require_valid(set);
  const auto pairs = complementary_pairs(set);
  if (pairs.empty())
    throw Error(ErrorCode::InsufficientStructure, "exact symmetric fit needs a complementary (p, 1-p) pair");

  const auto median = median_index(set);
  const double location = median >= 0 ? set[static_cast<std::size_t>(median)].value
                                      : 0.5 * (set[pairs.front().lower].value + set[pairs.front().upper].value);

  auto chosen = pairs.front();
  for (const auto& pair : pairs)
    if (std::fabs(set[pair.lower].probability - 0.25) < std::fabs(set[chosen.lower].probability - 0.25)) chosen = pair;

  const double z = standard_quantile(family, set[chosen.upper].probability);
  const double scale = (set[chosen.upper].value - set[chosen.lower].value) / (2.0 * z);
  return evaluate_fit(LocationScaleDistribution(family, location, scale), set, FitMethod::ExactSymmetric);
}

FitResult fit_least_squares(const FamilyKind& family, const JudgementSet& set) {
  if (set.size() < 2) throw Error(ErrorCode::InsufficientData, "least-squares fit needs at least two judgements");
  require_valid(set);

  const auto start = starting_point(family, set);
  auto sse = [&](const Params& p) {
    if (!admissible(p)) return std::numeric_limits<double>::infinity();
    const auto dist = make_dist(family, p);
    double total = 0.0;
    for (const auto& j : set.judgements()) {
      const double r = dist.cdf(j.value) - j.probability;
      total += r * r;
    }
    return total;
  };
  const Params origin{start.location(), std::log(start.scale())};
  const auto best = descend(sse, origin, 0.1 * start.scale(), 0.1);

  auto fit = evaluate_fit(make_dist(family, best.point), set, FitMethod::LeastSquares);
  // An exact starting point can already be optimal; never return something worse than it.
  const auto at_start = evaluate_fit(start, set, FitMethod::LeastSquares);
  if (at_start.sse < fit.sse) fit = at_start;
  fit.converged = best.converged || best.value == 0.0;
  fit.iterations = best.iterations;
  return fit;
}

double rectangle_violation(const LocationScaleDistribution& dist, const JudgementSet& set, std::size_t i) {
  const double x = set[i].value;
  const double dx = set.box(i).delta_x;
  const double below = set.lower_probability(i) - dist.cdf(x + dx);
  const double above = dist.cdf(x - dx) - set.upper_probability(i);
  return std::max({0.0, below, above});
}

double max_violation(const LocationScaleDistribution& dist, const JudgementSet& set) {
  return std::max(0.0, worst_signed_margin(dist, set));
}

double worst_signed_margin(const LocationScaleDistribution& dist, const JudgementSet& set) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double x = set[i].value;
    const double dx = set.box(i).delta_x;
    worst = std::max({worst, set.lower_probability(i) - dist.cdf(x + dx), dist.cdf(x - dx) - set.upper_probability(i)});
  }
  return worst;
}

FeasibilityResult check_feasibility(const FamilyKind& family, const JudgementSet& set) {
  require_valid(set);

  auto objective = [&](const Params& p) {
    if (!admissible(p)) return std::numeric_limits<double>::infinity();
    return worst_signed_margin(make_dist(family, p), set);
  };

  const auto start = starting_point(family, set);
  const double log_s = std::log(start.scale());
  const std::array<Params, 3> origins{{{start.location(), log_s},
                                       {start.location() - 0.5 * start.scale(), log_s - std::log(2.0)},
                                       {start.location() + 0.5 * start.scale(), log_s + std::log(2.0)}}};

  SimplexResult<2> best;
  int iterations = 0;
  for (const auto& origin : origins) {
    const auto candidate = descend(objective, origin, 0.25 * start.scale(), 0.25);
    iterations += candidate.iterations;
    if (candidate.value < best.value) best = candidate;
  }

  FeasibilityResult result;
  result.iterations = iterations;
  const auto dist = make_dist(family, best.point);
  result.min_max_violation = max_violation(dist, set);
  result.feasible = result.min_max_violation <= kFeasibilityTolerance;
  result.witness = dist;
  return result;
}

std::vector<FamilyFits> fit_all(std::span<const FamilyKind> families, const JudgementSet& set) {
  if (families.empty()) throw std::invalid_argument("fit_all needs at least one family");
  require_valid(set);

  std::vector<FamilyFits> out;
  out.reserve(families.size());
  for (const auto& family : families) {
    FamilyFits fits{.family = family};
    try {
      fits.exact = fit_exact_symmetric(family, set);
    } catch (const Error& e) {
      fits.exact_error = std::string(to_string(e.code())) + ": " + e.what();
    }
    try {
      fits.least_squares = fit_least_squares(family, set);
    } catch (const Error& e) {
      fits.least_squares_error = std::string(to_string(e.code())) + ": " + e.what();
    }
    fits.feasibility = check_feasibility(family, set);
    out.push_back(std::move(fits));
  }
  return out;
}

}  // namespace elicit
