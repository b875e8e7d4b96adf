#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <random>

#include "elicit/judgements.hpp"

using namespace elicit;

namespace {

JudgementSet make(std::initializer_list<Judgement> js) { return JudgementSet(std::vector<Judgement>(js)); }

bool has_at(const ValidationReport& report, ViolationRule rule, std::size_t index) {
  for (const auto& v : report.violations)
    if (v.rule == rule && v.index == index) return true;
  return false;
}

}  // namespace

TEST_CASE("validate accepts the quartile set") {
  CHECK(validate(make({{0.25, -0.6745}, {0.5, 0.0}, {0.75, 0.6745}})).ok());
}

TEST_CASE("validate names the offending index and rule") {
  const auto decreasing = validate(make({{0.5, 0.0}, {0.25, 1.0}}));
  CHECK_FALSE(decreasing.ok());
  CHECK(has_at(decreasing, ViolationRule::NonMonotoneProbability, 1));

  const auto duplicate = validate(make({{0.25, 0.0}, {0.25, 1.0}}));
  CHECK(duplicate.has(ViolationRule::DuplicateProbability));
  CHECK(has_at(duplicate, ViolationRule::DuplicateProbability, 1));

  CHECK(validate(JudgementSet{}).has(ViolationRule::EmptySet));
  CHECK(has_at(validate(make({{0.0, 1.0}})), ViolationRule::ProbabilityOutOfRange, 0));
  CHECK(has_at(validate(make({{0.2, 1.0}, {1.0, 2.0}})), ViolationRule::ProbabilityOutOfRange, 1));
  CHECK(has_at(validate(make({{0.5, NAN}})), ViolationRule::NonFiniteValue, 0));
  CHECK(has_at(validate(make({{0.25, 1.0}, {0.5, 0.0}})), ViolationRule::NonMonotoneValue, 1));
  CHECK(has_at(validate(make({{0.25, 1.0}, {0.5, 1.0}})), ViolationRule::DuplicateValue, 1));

  JudgementSet negative_box({{0.5, 0.0}}, {{-0.1, 0.0}});
  CHECK(has_at(validate(negative_box), ViolationRule::InvalidBox, 0));
  for (const auto& v : validate(make({{0.5, 0.0}, {0.25, 1.0}})).violations) CHECK_FALSE(v.message.empty());
}

TEST_CASE("overlapping boxes are accepted") {
  const auto set = make({{0.25, 0.0}, {0.5, 0.01}}).with_uniform_box({0.05, 0.05});
  CHECK(validate(set).ok());
}

TEST_CASE("require_valid throws with the report attached") {
  try {
    require_valid(make({{0.5, 0.0}, {0.25, 1.0}}));
    FAIL("expected InvalidJudgementsError");
  } catch (const InvalidJudgementsError& e) {
    CHECK(e.code() == ErrorCode::InvalidJudgements);
    CHECK(e.report().has(ViolationRule::NonMonotoneProbability));
  }
}

TEST_CASE("canonical sets") {
  const auto three = canonical_set(CanonicalKind::Three);
  REQUIRE(three.size() == 3);
  CHECK(three[0] == Judgement{0.25, -0.6745});
  CHECK(three[1] == Judgement{0.5, 0.0});
  CHECK(three[2] == Judgement{0.75, 0.6745});
  CHECK_FALSE(three.has_boxes());

  const auto five = canonical_set(CanonicalKind::Five);
  REQUIRE(five.size() == 5);
  CHECK(five[0] == Judgement{0.1, -1.2816});
  CHECK(five[4] == Judgement{0.9, 1.2816});

  const auto boxed = canonical_set(CanonicalKind::Five, true);
  CHECK(boxed.judgements() == five.judgements());
  for (std::size_t i = 0; i < boxed.size(); ++i) CHECK(boxed.box(i) == ImprecisionBox{0.05, 0.05});

  for (auto kind : {CanonicalKind::Three, CanonicalKind::Five})
    for (bool b : {false, true}) CHECK(validate(canonical_set(kind, b)).ok());
}

TEST_CASE("probability bounds clamp into the open unit interval") {
  const auto set = make({{0.02, 0.0}, {0.99, 1.0}}).with_uniform_box({0.05, 0.0});
  CHECK(set.lower_probability(0) > 0.0);
  CHECK(set.upper_probability(1) < 1.0);
  CHECK(set.upper_probability(0) == doctest::Approx(0.07));
}

TEST_CASE("symmetry diagnostic examples") {
  const auto five = symmetry_diagnostic(canonical_set(CanonicalKind::Five));
  CHECK(five.symmetric);
  CHECK(five.center == 0.0);
  CHECK(five.max_asymmetry == 0.0);

  const auto skew = symmetry_diagnostic(make({{0.25, -1.0}, {0.5, 0.0}, {0.75, 2.0}}));
  CHECK_FALSE(skew.symmetric);
  CHECK(skew.max_asymmetry == doctest::Approx(1.0));

  const auto single = symmetry_diagnostic(make({{0.5, 7.0}}));
  CHECK(single.symmetric);
  CHECK(single.center == 7.0);
  CHECK(single.max_asymmetry == 0.0);

  const auto no_median = symmetry_diagnostic(make({{0.1, -3.0}, {0.25, -1.0}, {0.75, 3.0}, {0.9, 5.0}}));
  CHECK(no_median.center == doctest::Approx(1.0));
  CHECK(no_median.symmetric);

  // Caller tolerance in value units.
  CHECK(symmetry_diagnostic(make({{0.25, -1.0}, {0.5, 0.0}, {0.75, 2.0}}), 1.5).symmetric);
}

TEST_CASE("symmetry diagnostic is not assessable without median or pair") {
  try {
    symmetry_diagnostic(make({{0.25, 1.0}, {0.6, 2.0}}));
    FAIL("expected NotAssessable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAssessable);
  }
}

TEST_CASE("symmetry diagnostic is shift invariant") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> shift(-100.0, 100.0);
  const auto base = make({{0.1, -2.0}, {0.25, -1.1}, {0.5, 0.3}, {0.75, 1.0}, {0.9, 2.9}});
  const auto reference = symmetry_diagnostic(base);
  for (int k = 0; k < 20; ++k) {
    const double a = shift(rng);
    JudgementSet moved;
    for (const auto& j : base.judgements()) moved.add({j.probability, j.value + a});
    const auto d = symmetry_diagnostic(moved);
    CHECK(d.center == doctest::Approx(reference.center + a).epsilon(1e-12));
    CHECK(std::fabs(d.max_asymmetry - reference.max_asymmetry) <= 1e-9);
    CHECK(d.symmetric == reference.symmetric);
  }
}

TEST_CASE("complementary pairs run from the innermost outwards") {
  const auto pairs = complementary_pairs(canonical_set(CanonicalKind::Five));
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].lower == 1);
  CHECK(pairs[0].upper == 3);
  CHECK(pairs[1].lower == 0);
  CHECK(pairs[1].upper == 4);
  CHECK(median_index(canonical_set(CanonicalKind::Five)) == 2);
  CHECK(median_index(make({{0.25, 1.0}})) == -1);
}

TEST_CASE("valid sets admit a monotone interpolant") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> ps, xs;
    const int n = 1 + static_cast<int>(u(rng) * 6);
    for (int i = 0; i < n; ++i) {
      ps.push_back(0.01 + 0.98 * u(rng));
      xs.push_back(-10.0 + 20.0 * u(rng));
    }
    std::sort(ps.begin(), ps.end());
    std::sort(xs.begin(), xs.end());
    JudgementSet set;
    for (int i = 0; i < n; ++i) set.add({ps[i], xs[i]});
    REQUIRE(validate(set).ok());
    // The piecewise-linear interpolant through the points is nondecreasing between them.
    const auto interp = [&](double x) {
      if (set.size() == 1) return set[0].probability;
      for (std::size_t i = 1; i < set.size(); ++i)
        if (x <= set[i].value || i + 1 == set.size()) {
          const double t = (x - set[i - 1].value) / (set[i].value - set[i - 1].value);
          return set[i - 1].probability + t * (set[i].probability - set[i - 1].probability);
        }
      return 0.0;
    };
    for (std::size_t i = 0; i < set.size(); ++i) CHECK(interp(set[i].value) == doctest::Approx(set[i].probability));
    double prev = -1.0;
    for (double x = set[0].value; x <= set[set.size() - 1].value; x += 0.01) {
      CHECK(interp(x) >= prev);
      prev = interp(x);
    }
  }
}
