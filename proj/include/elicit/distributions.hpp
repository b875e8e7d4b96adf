#ifndef ELICIT_DISTRIBUTIONS_HPP
#define ELICIT_DISTRIBUTIONS_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace elicit {

/// Symmetric unimodal standard families. Student-t carries integer degrees of freedom.
class FamilyKind {
 public:
  enum class Tag { Normal, StudentT, Cauchy };

  static constexpr int kDefaultDegreesOfFreedom = 5;

  static FamilyKind normal() { return FamilyKind(Tag::Normal, 0); }
  static FamilyKind cauchy() { return FamilyKind(Tag::Cauchy, 0); }
  /// Throws std::domain_error unless nu >= 1.
  static FamilyKind student_t(int nu = kDefaultDegreesOfFreedom);

  /// Parses `normal`, `cauchy`, `t<nu>` (e.g. `t5`). A bare `t` means t5.
  static FamilyKind parse(std::string_view text);

  Tag tag() const { return tag_; }
  int degrees_of_freedom() const { return nu_; }

  /// `normal`, `t5`, `cauchy`; inverse of parse().
  std::string label() const;

  bool operator==(const FamilyKind&) const = default;

 private:
  FamilyKind(Tag tag, int nu) : tag_(tag), nu_(nu) {}

  Tag tag_;
  int nu_;
};

/// Parses a comma separated family list such as `normal,t5,cauchy`.
std::vector<FamilyKind> parse_family_list(std::string_view text);

double standard_cdf(const FamilyKind& family, double z);
/// Upper tail 1 - F(z), evaluated without cancellation.
double standard_survival(const FamilyKind& family, double z);
double standard_quantile(const FamilyKind& family, double p);
double standard_density(const FamilyKind& family, double z);

class LocationScaleDistribution {
 public:
  /// Throws std::domain_error unless scale > 0 and both parameters are finite.
  LocationScaleDistribution(FamilyKind family, double location, double scale);

  const FamilyKind& family() const { return family_; }
  double location() const { return location_; }
  double scale() const { return scale_; }

  double cdf(double x) const;
  double survival(double x) const;
  double quantile(double p) const;
  double density(double x) const;

  bool operator==(const LocationScaleDistribution&) const = default;

 private:
  double standardize(double x) const;

  FamilyKind family_;
  double location_;
  double scale_;
};

inline double cdf(const LocationScaleDistribution& dist, double x) { return dist.cdf(x); }
inline double quantile(const LocationScaleDistribution& dist, double p) { return dist.quantile(p); }
inline double density(const LocationScaleDistribution& dist, double x) { return dist.density(x); }

namespace detail {

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace detail

}  // namespace elicit

#endif  // ELICIT_DISTRIBUTIONS_HPP
