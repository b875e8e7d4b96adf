#ifndef ELICIT_JUDGEMENTS_HPP
#define ELICIT_JUDGEMENTS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "elicit/errors.hpp"

namespace elicit {

/// One statement P(X < value) = probability.
struct Judgement {
  double probability = 0.5;
  double value = 0.0;

  bool operator==(const Judgement&) const = default;
};

/// Uniform imprecision around a judgement: [value +- delta_x] x [probability +- delta_p].
struct ImprecisionBox {
  double delta_p = 0.0;
  double delta_x = 0.0;

  bool is_zero() const { return delta_p == 0.0 && delta_x == 0.0; }

  bool operator==(const ImprecisionBox&) const = default;
};

/// Ordered judgements, each with its own box (zero unless set).
class JudgementSet {
 public:
  JudgementSet() = default;
  explicit JudgementSet(std::vector<Judgement> judgements);
  /// Throws std::invalid_argument if the two lists differ in length.
  JudgementSet(std::vector<Judgement> judgements, std::vector<ImprecisionBox> boxes);

  void add(Judgement judgement, ImprecisionBox box = {});

  std::size_t size() const { return judgements_.size(); }
  bool empty() const { return judgements_.empty(); }

  const std::vector<Judgement>& judgements() const { return judgements_; }
  const std::vector<ImprecisionBox>& boxes() const { return boxes_; }
  const Judgement& operator[](std::size_t i) const { return judgements_[i]; }
  const ImprecisionBox& box(std::size_t i) const { return boxes_[i]; }

  bool has_boxes() const;

  /// Copy with the same box on every judgement.
  JudgementSet with_uniform_box(ImprecisionBox box) const;

  /// Box bounds on the CDF level, clamped to the open unit interval.
  double lower_probability(std::size_t i) const;
  double upper_probability(std::size_t i) const;

  bool operator==(const JudgementSet&) const = default;

 private:
  std::vector<Judgement> judgements_;
  std::vector<ImprecisionBox> boxes_;
};

enum class ViolationRule {
  EmptySet,
  ProbabilityOutOfRange,
  NonFiniteValue,
  NonMonotoneProbability,
  DuplicateProbability,
  NonMonotoneValue,
  DuplicateValue,
  InvalidBox,
};

const char* to_string(ViolationRule rule);

struct Violation {
  std::size_t index = 0;
  ViolationRule rule = ViolationRule::EmptySet;
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationRule rule) const;

  bool operator==(const ValidationReport&) const = default;
};

ValidationReport validate(const JudgementSet& set);

class InvalidJudgementsError : public Error {
 public:
  explicit InvalidJudgementsError(ValidationReport report);

  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Throws InvalidJudgementsError when validate() reports anything.
void require_valid(const JudgementSet& set);

enum class CanonicalKind { Three, Five };

/// The quartile set, optionally extended by the 10th/90th percentiles; boxes are 0.05/0.05 when requested.
JudgementSet canonical_set(CanonicalKind kind, bool with_boxes = false);

struct SymmetryDiagnostic {
  bool symmetric = false;
  double center = 0.0;
  double max_asymmetry = 0.0;
};

/// Tolerance for matching complementary probabilities p and 1 - p.
inline constexpr double kComplementTolerance = 1e-12;

/// Throws Error(NotAssessable) when there is neither a median nor a complementary pair.
SymmetryDiagnostic symmetry_diagnostic(const JudgementSet& set, double tolerance = 1e-9);

/// Index of the 0.5 judgement, or -1.
std::ptrdiff_t median_index(const JudgementSet& set);

struct ComplementaryPair {
  std::size_t lower = 0;  // probability p < 0.5
  std::size_t upper = 0;  // probability 1 - p
};

/// All (p, 1 - p) pairs, ordered from the innermost outwards.
std::vector<ComplementaryPair> complementary_pairs(const JudgementSet& set);

}  // namespace elicit

#endif  // ELICIT_JUDGEMENTS_HPP
