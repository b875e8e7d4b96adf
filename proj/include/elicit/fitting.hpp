#ifndef ELICIT_FITTING_HPP
#define ELICIT_FITTING_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elicit/distributions.hpp"
#include "elicit/judgements.hpp"

namespace elicit {

enum class FitMethod { ExactSymmetric, LeastSquares };

const char* to_string(FitMethod method);

struct FitResult {
  LocationScaleDistribution dist;
  /// cdf(x_i) - p_i, one per judgement.
  std::vector<double> residuals;
  double max_abs_residual = 0.0;
  double sse = 0.0;
  FitMethod method = FitMethod::LeastSquares;
  /// Optimizer bookkeeping; exact fits report converged with zero iterations.
  bool converged = true;
  int iterations = 0;

  bool operator==(const FitResult&) const = default;
};

/// Residuals of `dist` against every judgement in `set`, summarised.
FitResult evaluate_fit(const LocationScaleDistribution& dist, const JudgementSet& set, FitMethod method);

/// Location from the median (or symmetry center), scale from the complementary pair whose p is nearest 0.25.
/// Throws Error(InsufficientStructure) without a complementary pair, InvalidJudgementsError for invalid sets.
FitResult fit_exact_symmetric(const FamilyKind& family, const JudgementSet& set);

/// Minimizes the sum of squared probability residuals over (location, scale > 0).
/// Throws Error(InsufficientData) for fewer than two judgements.
FitResult fit_least_squares(const FamilyKind& family, const JudgementSet& set);

inline constexpr double kFeasibilityTolerance = 1e-9;

struct FeasibilityResult {
  bool feasible = false;
  /// Deepest point found: the parameters minimising the worst signed rectangle margin.
  std::optional<LocationScaleDistribution> witness;
  double min_max_violation = 0.0;
  int iterations = 0;

  bool operator==(const FeasibilityResult&) const = default;
};

/// max(0, (p_i - dp_i) - cdf(x_i + dx_i), cdf(x_i - dx_i) - (p_i + dp_i)) for rectangle i.
double rectangle_violation(const LocationScaleDistribution& dist, const JudgementSet& set, std::size_t i);
/// Largest rectangle_violation over the set.
double max_violation(const LocationScaleDistribution& dist, const JudgementSet& set);
/// Same terms without clamping at zero; negative means every rectangle is threaded with slack.
double worst_signed_margin(const LocationScaleDistribution& dist, const JudgementSet& set);

/// Min-max search for a member of `family` whose CDF threads every imprecision rectangle.
FeasibilityResult check_feasibility(const FamilyKind& family, const JudgementSet& set);

struct FamilyFits {
  FamilyKind family;
  std::optional<FitResult> exact;
  std::string exact_error;
  std::optional<FitResult> least_squares;
  std::string least_squares_error;
  FeasibilityResult feasibility;

  bool operator==(const FamilyFits&) const = default;
};

/// Runs all three fits per family in input order; per-family failures land in the *_error fields.
/// Throws InvalidJudgementsError for an invalid set and std::invalid_argument for an empty family list.
std::vector<FamilyFits> fit_all(std::span<const FamilyKind> families, const JudgementSet& set);

}  // namespace elicit

#endif  // ELICIT_FITTING_HPP
