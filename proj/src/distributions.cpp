#include "elicit/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace elicit {

namespace {

constexpr double kSmallestProbability = std::numeric_limits<double>::min();
const double kLargestProbability = std::nextafter(1.0, 0.0);

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::domain_error(std::string(what) + " must be finite");
}

void require_open_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("probability must lie in (0, 1)");
}

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

// I_x(a, b) with y = 1 - x supplied separately so callers can avoid cancellation.
double incomplete_beta(double a, double b, double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

// F(z) for z <= 0, never below the smallest normal double.
double lower_tail(const FamilyKind& family, double z) {
  double p = 0.5;
  switch (family.tag()) {
    case FamilyKind::Tag::Normal:
      p = 0.5 * std::erfc(-z / std::numbers::sqrt2);
      break;
    case FamilyKind::Tag::Cauchy: {
      const double a = -z;
      p = a > 1.0 ? std::atan(1.0 / a) / std::numbers::pi : 0.5 - std::atan(a) / std::numbers::pi;
      break;
    }
    case FamilyKind::Tag::StudentT: {
      const double nu = family.degrees_of_freedom();
      const double z2 = z * z;
      const double denom = nu + z2;
      p = 0.5 * incomplete_beta(0.5 * nu, 0.5, nu / denom, z2 / denom);
      break;
    }
  }
  return std::clamp(p, kSmallestProbability, 0.5);
}

double normal_quantile_guess(double p) {
  // Acklam's rational approximation, relative error below 1.2e-9.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double kLow = 0.02425;
  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double initial_guess(const FamilyKind& family, double p) {
  switch (family.tag()) {
    case FamilyKind::Tag::Normal:
      return normal_quantile_guess(p);
    case FamilyKind::Tag::Cauchy:
      return -1.0 / std::tan(std::numbers::pi * p);
    case FamilyKind::Tag::StudentT: {
      // Cornish-Fisher style correction of the normal quantile.
      const double g = normal_quantile_guess(p);
      const double nu = family.degrees_of_freedom();
      return g + (g * g * g + g) / (4.0 * nu);
    }
  }
  return 0.0;
}

// Solves lower_tail(z) = p for p in (0, 0.5] with bracketed Newton iteration.
double lower_quantile(const FamilyKind& family, double p) {
  if (p == 0.5) return 0.0;
  double z = std::min(initial_guess(family, p), 0.0);
  double hi = 0.0;
  double lo = std::min(z, -1.0);
  while (lower_tail(family, lo) > p && lo > -1e300) {
    hi = lo;
    lo *= 2.0;
  }
  if (!(z > lo && z < hi)) z = 0.5 * (lo + hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double f = lower_tail(family, z) - p;
    if (std::fabs(f) <= 1e-12 * p) break;
    if (f > 0.0)
      hi = z;
    else
      lo = z;
    const double dens = standard_density(family, z);
    double next = dens > 0.0 ? z - f / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - z) <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(z)) {
      z = next;
      break;
    }
    z = next;
  }
  return z;
}

}  // namespace

namespace detail {

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw std::domain_error("incomplete beta requires a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete beta requires x in [0, 1]");
  return incomplete_beta(a, b, x, 1.0 - x);
}

}  // namespace detail

FamilyKind FamilyKind::student_t(int nu) {
  if (nu < 1) throw std::domain_error("Student-t degrees of freedom must be >= 1");
  return FamilyKind(Tag::StudentT, nu);
}

FamilyKind FamilyKind::parse(std::string_view text) {
  if (text == "normal") return normal();
  if (text == "cauchy") return cauchy();
  if (text == "t") return student_t();
  if (text.size() > 1 && text.front() == 't') {
    int nu = 0;
    const auto* first = text.data() + 1;
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, nu);
    if (ec == std::errc() && ptr == last && nu >= 1) return student_t(nu);
  }
  throw std::invalid_argument("unknown family '" + std::string(text) + "' (expected normal, t<nu>, cauchy)");
}

std::string FamilyKind::label() const {
  switch (tag_) {
    case Tag::Normal:
      return "normal";
    case Tag::Cauchy:
      return "cauchy";
    case Tag::StudentT:
      return "t" + std::to_string(nu_);
  }
  return {};
}

std::vector<FamilyKind> parse_family_list(std::string_view text) {
  std::vector<FamilyKind> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    auto item = text.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.push_back(FamilyKind::parse(item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw std::invalid_argument("empty family list");
  return out;
}

double standard_cdf(const FamilyKind& family, double z) {
  require_finite(z, "z");
  if (z <= 0.0) return lower_tail(family, z);
  return std::min(1.0 - lower_tail(family, -z), kLargestProbability);
}

double standard_survival(const FamilyKind& family, double z) {
  require_finite(z, "z");
  if (z >= 0.0) return lower_tail(family, -z);
  return std::min(1.0 - lower_tail(family, z), kLargestProbability);
}

double standard_quantile(const FamilyKind& family, double p) {
  require_open_probability(p);
  if (p <= 0.5) return lower_quantile(family, p);
  return -lower_quantile(family, 1.0 - p);
}

double standard_density(const FamilyKind& family, double z) {
  require_finite(z, "z");
  switch (family.tag()) {
    case FamilyKind::Tag::Normal:
      return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    case FamilyKind::Tag::Cauchy:
      return 1.0 / (std::numbers::pi * (1.0 + z * z));
    case FamilyKind::Tag::StudentT: {
      const double nu = family.degrees_of_freedom();
      const double log_norm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi);
      return std::exp(log_norm - 0.5 * (nu + 1.0) * std::log1p(z * z / nu));
    }
  }
  return 0.0;
}

LocationScaleDistribution::LocationScaleDistribution(FamilyKind family, double location, double scale)
    : family_(family), location_(location), scale_(scale) {
  require_finite(location, "location");
  require_finite(scale, "scale");
  if (!(scale > 0.0)) throw std::domain_error("scale must be > 0");
}

double LocationScaleDistribution::standardize(double x) const {
  require_finite(x, "x");
  return (x - location_) / scale_;
}

// A finite x can still standardize to +-inf when the scale underflows; those map to the clamped extremes.
double LocationScaleDistribution::cdf(double x) const {
  const double z = standardize(x);
  if (std::isinf(z)) return z < 0.0 ? kSmallestProbability : kLargestProbability;
  return standard_cdf(family_, z);
}

double LocationScaleDistribution::survival(double x) const {
  const double z = standardize(x);
  if (std::isinf(z)) return z > 0.0 ? kSmallestProbability : kLargestProbability;
  return standard_survival(family_, z);
}

double LocationScaleDistribution::quantile(double p) const {
  return location_ + scale_ * standard_quantile(family_, p);
}

double LocationScaleDistribution::density(double x) const {
  const double z = standardize(x);
  if (std::isinf(z)) return 0.0;
  return standard_density(family_, z) / scale_;
}

}  // namespace elicit
