#ifndef ELICIT_TESTS_ORACLES_HPP
#define ELICIT_TESTS_ORACLES_HPP

// Independent reference computations for the test suites. Nothing here calls the
// implementation's CDF or quantile code unless a comment says otherwise.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "elicit/distributions.hpp"
#include "elicit/fitting.hpp"
#include "elicit/judgements.hpp"

namespace oracle {

/// Standard densities written from their textbook formulas.
inline double density(const elicit::FamilyKind& family, double z) {
  switch (family.tag()) {
    case elicit::FamilyKind::Tag::Normal:
      return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    case elicit::FamilyKind::Tag::Cauchy:
      return 1.0 / (std::numbers::pi * (1.0 + z * z));
    case elicit::FamilyKind::Tag::StudentT: {
      const double nu = family.degrees_of_freedom();
      const double c = std::tgamma(0.5 * (nu + 1.0)) / (std::sqrt(nu * std::numbers::pi) * std::tgamma(0.5 * nu));
      return c * std::pow(1.0 + z * z / nu, -0.5 * (nu + 1.0));
    }
  }
  return 0.0;
}

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
  return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return detail::adaptive(f, a, b, fa, fm, fb, detail::simpson(f, a, b, fa, fm, fb), tol, 50);
}

/// F(z) = 1/2 + integral of the density from 0 to z (symmetry of every family about 0).
inline double cdf(const elicit::FamilyKind& family, double z) {
  const auto f = [&](double t) { return density(family, t); };
  if (z == 0.0) return 0.5;
  const double part = integrate(f, 0.0, std::fabs(z));
  return z > 0.0 ? 0.5 + part : 0.5 - part;
}

/// Bisection on the quadrature CDF.
inline double quantile(const elicit::FamilyKind& family, double p) {
  double lo = -1e3;
  double hi = 1e3;
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(family, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Minimum over a uniform (location, scale) grid of the worst rectangle violation. Uses the
/// implementation's CDF; it is an independent check of the optimizer, not of the CDF.
struct GridOptimum {
  double value = std::numeric_limits<double>::infinity();
  double location = 0.0;
  double scale = 0.0;
};

inline GridOptimum grid_min_max(const elicit::FamilyKind& family, const elicit::JudgementSet& set, double loc_lo,
                                double loc_hi, double scale_lo, double scale_hi, int n = 400) {
  GridOptimum best;
  for (int i = 0; i < n; ++i) {
    const double m = loc_lo + (loc_hi - loc_lo) * i / (n - 1);
    for (int k = 0; k < n; ++k) {
      const double s = scale_lo + (scale_hi - scale_lo) * k / (n - 1);
      const double v = elicit::max_violation(elicit::LocationScaleDistribution(family, m, s), set);
      if (v < best.value) best = {v, m, s};
    }
  }
  return best;
}

/// Exact min-max violation through the linear structure of location-scale constraints:
/// cdf((x - m)/s) >= L  <=>  m + s q(L) <= x, so for a fixed slack t feasibility is a 2-D
/// linear program whose gap function is convex in s. Bisection on t, ternary search on s.
/// Uses the implementation's standard_quantile.
inline double exact_min_max(const elicit::FamilyKind& family, const elicit::JudgementSet& set) {
  auto gap_at = [&](double t, double s) {
    double m_lo = -std::numeric_limits<double>::infinity();
    double m_hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.size(); ++i) {
      const double x = set[i].value;
      const double dx = set.box(i).delta_x;
      const double lower_p = set[i].probability - set.box(i).delta_p - t;
      const double upper_p = set[i].probability + set.box(i).delta_p + t;
      if (lower_p > 0.0) m_hi = std::min(m_hi, x + dx - s * elicit::standard_quantile(family, std::min(lower_p, 1.0 - 1e-16)));
      if (upper_p < 1.0) m_lo = std::max(m_lo, x - dx - s * elicit::standard_quantile(family, std::max(upper_p, 1e-300)));
    }
    if (std::isinf(m_lo) || std::isinf(m_hi)) return -1.0;
    return m_lo - m_hi;
  };
  auto feasible = [&](double t) {
    double a = 1e-8;
    double b = 1e3;
    for (int i = 0; i < 300; ++i) {
      const double c = a + (b - a) / 3.0;
      const double d = b - (b - a) / 3.0;
      (gap_at(t, c) <= gap_at(t, d) ? b : a) = (gap_at(t, c) <= gap_at(t, d) ? d : c);
    }
    return gap_at(t, 0.5 * (a + b)) <= 1e-13;
  };
  if (feasible(0.0)) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace oracle

#endif  // ELICIT_TESTS_ORACLES_HPP
