#include "elicit/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace elicit {

std::vector<double> feedback_quantiles(const LocationScaleDistribution& dist, std::span<const double> probs) {
  std::vector<double> out;
  out.reserve(probs.size());
  for (double p : probs) out.push_back(dist.quantile(p));
  return out;
}

TailReport tail_report(std::span<const LocationScaleDistribution> fits, std::span<const double> thresholds) {
  if (fits.empty()) throw std::invalid_argument("tail report needs at least one fit");
  for (double t : thresholds)
    if (!std::isfinite(t)) throw std::domain_error("tail thresholds must be finite");

  TailReport report;
  report.thresholds.assign(thresholds.begin(), thresholds.end());
  for (const auto& fit : fits) {
    std::vector<double> row;
    row.reserve(thresholds.size());
    for (double t : thresholds) row.push_back(fit.survival(t));
    report.exceedance.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < fits.size(); ++i) {
    for (std::size_t j = i + 1; j < fits.size(); ++j) {
      PairRatio pair{j, i, {}};
      for (std::size_t t = 0; t < thresholds.size(); ++t)
        pair.ratios.push_back(report.exceedance[j][t] / report.exceedance[i][t]);
      report.ratios.push_back(std::move(pair));
    }
  }
  return report;
}

Divergence family_divergence(const LocationScaleDistribution& a, const LocationScaleDistribution& b,
                             std::optional<std::pair<double, double>> range, std::span<const double> thresholds) {
  auto gap = [&](double x) { return std::fabs(a.cdf(x) - b.cdf(x)); };

  const auto [lo, hi] = range.value_or(std::pair{std::min(a.quantile(0.001), b.quantile(0.001)),
                                                 std::max(a.quantile(0.999), b.quantile(0.999))});
  if (!(hi > lo)) throw std::domain_error("divergence range must be non-degenerate");

  const double step = (hi - lo) / (kDivergenceGridPoints - 1);
  int best_k = 0;
  double best = -1.0;
  for (int k = 0; k < kDivergenceGridPoints; ++k) {
    const double v = gap(lo + step * k);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }

  Divergence out;
  out.kolmogorov = best;
  out.argmax = lo + step * best_k;

  // Golden-section refinement on the bracketing grid cells.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double left = lo + step * std::max(0, best_k - 1);
  double right = lo + step * std::min(kDivergenceGridPoints - 1, best_k + 1);
  double c = right - inv_phi * (right - left);
  double d = left + inv_phi * (right - left);
  double fc = gap(c);
  double fd = gap(d);
  for (int iter = 0; iter < 100 && right - left > 1e-12 * (1.0 + std::fabs(left)); ++iter) {
    if (fc >= fd) {
      right = d;
      d = c;
      fd = fc;
      c = right - inv_phi * (right - left);
      fc = gap(c);
    } else {
      left = c;
      c = d;
      fc = fd;
      d = left + inv_phi * (right - left);
      fd = gap(d);
    }
  }
  const double refined_x = fc >= fd ? c : d;
  const double refined = std::max(fc, fd);
  if (refined > out.kolmogorov) {
    out.kolmogorov = refined;
    out.argmax = refined_x;
  }

  std::vector<double> points(thresholds.begin(), thresholds.end());
  if (points.empty())
    for (double p : {0.9, 0.99, 0.999}) points.push_back(std::max(a.quantile(p), b.quantile(p)));
  for (double t : points) {
    const double sa = a.survival(t);
    const double sb = b.survival(t);
    out.tail_ratios.emplace_back(t, std::max(sa, sb) / std::min(sa, sb));
  }
  return out;
}

LineStyle line_style_for(const FamilyKind& family) {
  switch (family.tag()) {
    case FamilyKind::Tag::Normal:
      return LineStyle::Solid;
    case FamilyKind::Tag::StudentT:
      return LineStyle::Dotted;
    case FamilyKind::Tag::Cauchy:
      return LineStyle::Dashed;
  }
  return LineStyle::Solid;
}

std::array<Marker, 4> Rectangle::corners() const {
  return {{{x_min, p_min}, {x_max, p_min}, {x_max, p_max}, {x_min, p_max}}};
}

namespace {

// Linear interpolation of the judged quantile function; nullopt outside the judged range.
std::optional<double> interpolated_value(const JudgementSet& set, double p) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i].probability == p) return set[i].value;
    if (i + 1 < set.size() && set[i].probability < p && p < set[i + 1].probability) {
      const double t = (p - set[i].probability) / (set[i + 1].probability - set[i].probability);
      return set[i].value + t * (set[i + 1].value - set[i].value);
    }
  }
  return std::nullopt;
}

}  // namespace

std::pair<double, double> default_figure_range(const JudgementSet& set) {
  if (set.empty()) return {-1.0, 1.0};
  const double x_min = set[0].value;
  const double x_max = set[set.size() - 1].value;
  const auto q1 = interpolated_value(set, 0.25);
  const auto q3 = interpolated_value(set, 0.75);
  double iqr = q1 && q3 ? *q3 - *q1 : x_max - x_min;
  if (!(iqr > 0.0)) iqr = std::max(1.0, std::fabs(x_min));
  return {x_min - 2.0 * iqr, x_max + 2.0 * iqr};
}

FigureData figure_data(std::span<const LocationScaleDistribution> fits, const JudgementSet& set,
                       std::pair<double, double> x_range, int n_points) {
  if (n_points < 2) throw std::domain_error("figure needs at least two grid points");
  const auto [lo, hi] = x_range;
  if (!(std::isfinite(lo) && std::isfinite(hi) && hi > lo)) throw std::domain_error("figure range must be non-degenerate");

  FigureData fig;
  fig.x.reserve(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k)
    fig.x.push_back(k + 1 == n_points ? hi : lo + (hi - lo) * k / (n_points - 1));

  std::map<std::string, int> seen;
  for (const auto& dist : fits) {
    std::string label = dist.family().label();
    if (const int n = ++seen[label]; n > 1) label += "_" + std::to_string(n);
    Curve curve{label, dist, line_style_for(dist.family()), {}};
    curve.cdf.reserve(fig.x.size());
    for (double x : fig.x) curve.cdf.push_back(dist.cdf(x));
    fig.curves.push_back(std::move(curve));
  }

  for (std::size_t i = 0; i < set.size(); ++i) {
    fig.markers.push_back({set[i].value, set[i].probability});
    const auto& box = set.box(i);
    if (!box.is_zero())
      fig.rectangles.push_back({set[i].value - box.delta_x, set[i].value + box.delta_x,
                                std::max(0.0, set[i].probability - box.delta_p),
                                std::min(1.0, set[i].probability + box.delta_p)});
  }
  return fig;
}

}  // namespace elicit
