#ifndef ELICIT_FEEDBACK_HPP
#define ELICIT_FEEDBACK_HPP

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "elicit/distributions.hpp"
#include "elicit/judgements.hpp"

namespace elicit {

inline const std::vector<double> kTertiles{1.0 / 3.0, 2.0 / 3.0};

/// quantile(dist, p) for each p, in input order.
std::vector<double> feedback_quantiles(const LocationScaleDistribution& dist, std::span<const double> probs = kTertiles);

struct PairRatio {
  std::size_t numerator = 0;    // index into fits; the later fit of the pair
  std::size_t denominator = 0;  // the earlier fit
  std::vector<double> ratios;   // one per threshold

  bool operator==(const PairRatio&) const = default;
};

struct TailReport {
  std::vector<double> thresholds;
  /// exceedance[f][t] = P(X > thresholds[t]) under fits[f].
  std::vector<std::vector<double>> exceedance;
  /// For every i < j: exceedance[j] / exceedance[i].
  std::vector<PairRatio> ratios;

  bool operator==(const TailReport&) const = default;
};

TailReport tail_report(std::span<const LocationScaleDistribution> fits, std::span<const double> thresholds);

struct Divergence {
  double kolmogorov = 0.0;
  /// Abscissa where the supremum was attained.
  double argmax = 0.0;
  /// threshold -> heavier / lighter exceedance probability (>= 1).
  std::vector<std::pair<double, double>> tail_ratios;

  bool operator==(const Divergence&) const = default;
};

inline constexpr int kDivergenceGridPoints = 4096;

/// Kolmogorov distance on a grid over `range` with golden-section refinement around the grid argmax.
/// Without a range the grid spans both distributions' central 99.8%. Without thresholds the tail ratios are
/// taken at max(q_a(p), q_b(p)) for p in {0.9, 0.99, 0.999}. Symmetric in (a, b).
Divergence family_divergence(const LocationScaleDistribution& a, const LocationScaleDistribution& b,
                             std::optional<std::pair<double, double>> range = std::nullopt,
                             std::span<const double> thresholds = {});

enum class LineStyle { Solid, Dotted, Dashed };

/// Normal solid, Student-t dotted, Cauchy dashed.
LineStyle line_style_for(const FamilyKind& family);

struct Curve {
  std::string label;
  LocationScaleDistribution dist;
  LineStyle style = LineStyle::Solid;
  std::vector<double> cdf;

  bool operator==(const Curve&) const = default;
};

struct Marker {
  double x = 0.0;
  double p = 0.0;

  bool operator==(const Marker&) const = default;
};

struct Rectangle {
  double x_min = 0.0;
  double x_max = 0.0;
  double p_min = 0.0;
  double p_max = 0.0;

  /// Corners counter-clockwise from (x_min, p_min).
  std::array<Marker, 4> corners() const;

  bool operator==(const Rectangle&) const = default;
};

struct FigureData {
  std::vector<double> x;
  std::vector<Curve> curves;
  std::vector<Marker> markers;
  std::vector<Rectangle> rectangles;

  bool operator==(const FigureData&) const = default;
};

/// [min x - 2 IQR, max x + 2 IQR], the IQR read off the judgements by linear interpolation in p.
std::pair<double, double> default_figure_range(const JudgementSet& set);

/// Uniform grid with one CDF sample vector per fit; rectangles only for nonzero boxes.
FigureData figure_data(std::span<const LocationScaleDistribution> fits, const JudgementSet& set,
                       std::pair<double, double> x_range, int n_points);

}  // namespace elicit

#endif  // ELICIT_FEEDBACK_HPP
