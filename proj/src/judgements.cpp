#include "elicit/judgements.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace elicit {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotAssessable:
      return "NotAssessable";
    case ErrorCode::InsufficientStructure:
      return "InsufficientStructure";
    case ErrorCode::InsufficientData:
      return "InsufficientData";
    case ErrorCode::InvalidJudgements:
      return "InvalidJudgements";
    case ErrorCode::InvalidTransition:
      return "InvalidTransition";
    case ErrorCode::UnsupportedVersion:
      return "UnsupportedVersion";
    case ErrorCode::ParseError:
      return "ParseError";
  }
  return "Unknown";
}

const char* to_string(ViolationRule rule) {
  switch (rule) {
    case ViolationRule::EmptySet:
      return "EmptySet";
    case ViolationRule::ProbabilityOutOfRange:
      return "ProbabilityOutOfRange";
    case ViolationRule::NonFiniteValue:
      return "NonFiniteValue";
    case ViolationRule::NonMonotoneProbability:
      return "NonMonotoneProbability";
    case ViolationRule::DuplicateProbability:
      return "DuplicateProbability";
    case ViolationRule::NonMonotoneValue:
      return "NonMonotoneValue";
    case ViolationRule::DuplicateValue:
      return "DuplicateValue";
    case ViolationRule::InvalidBox:
      return "InvalidBox";
  }
  return "Unknown";
}

JudgementSet::JudgementSet(std::vector<Judgement> judgements)
    : judgements_(std::move(judgements)), boxes_(judgements_.size()) {}

JudgementSet::JudgementSet(std::vector<Judgement> judgements, std::vector<ImprecisionBox> boxes)
    : judgements_(std::move(judgements)), boxes_(std::move(boxes)) {
  if (boxes_.size() != judgements_.size()) throw std::invalid_argument("one box per judgement required");
}

void JudgementSet::add(Judgement judgement, ImprecisionBox box) {
  judgements_.push_back(judgement);
  boxes_.push_back(box);
}

bool JudgementSet::has_boxes() const {
  return std::any_of(boxes_.begin(), boxes_.end(), [](const ImprecisionBox& b) { return !b.is_zero(); });
}

JudgementSet JudgementSet::with_uniform_box(ImprecisionBox box) const {
  return JudgementSet(judgements_, std::vector<ImprecisionBox>(judgements_.size(), box));
}

double JudgementSet::lower_probability(std::size_t i) const {
  return std::max(judgements_[i].probability - boxes_[i].delta_p, std::numeric_limits<double>::min());
}

double JudgementSet::upper_probability(std::size_t i) const {
  return std::min(judgements_[i].probability + boxes_[i].delta_p, std::nextafter(1.0, 0.0));
}

bool ValidationReport::has(ViolationRule rule) const {
  return std::any_of(violations.begin(), violations.end(), [rule](const Violation& v) { return v.rule == rule; });
}

ValidationReport validate(const JudgementSet& set) {
  ValidationReport report;
  auto flag = [&](std::size_t i, ViolationRule rule, std::string msg) {
    report.violations.push_back({i, rule, std::move(msg)});
  };
  if (set.empty()) {
    flag(0, ViolationRule::EmptySet, "at least one judgement is required");
    return report;
  }
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& j = set[i];
    const auto& box = set.box(i);
    if (!(j.probability > 0.0 && j.probability < 1.0))
      flag(i, ViolationRule::ProbabilityOutOfRange, "probability must lie strictly between 0 and 1");
    if (!std::isfinite(j.value)) flag(i, ViolationRule::NonFiniteValue, "value must be finite");
    if (!(std::isfinite(box.delta_p) && box.delta_p >= 0.0 && std::isfinite(box.delta_x) && box.delta_x >= 0.0))
      flag(i, ViolationRule::InvalidBox, "box half-widths must be finite and non-negative");
    if (i == 0) continue;
    const auto& prev = set[i - 1];
    if (j.probability < prev.probability)
      flag(i, ViolationRule::NonMonotoneProbability, "probability decreases from the previous judgement");
    else if (j.probability == prev.probability)
      flag(i, ViolationRule::DuplicateProbability, "probability repeats the previous judgement");
    if (j.value < prev.value)
      flag(i, ViolationRule::NonMonotoneValue, "value decreases from the previous judgement");
    else if (j.value == prev.value)
      flag(i, ViolationRule::DuplicateValue, "value repeats the previous judgement");
  }
  return report;
}

namespace {

std::string describe(const ValidationReport& report) {
  std::string msg = "invalid judgement set";
  for (const auto& v : report.violations)
    msg += "; [" + std::to_string(v.index) + "] " + to_string(v.rule) + ": " + v.message;
  return msg;
}

}  // namespace

InvalidJudgementsError::InvalidJudgementsError(ValidationReport report)
    : Error(ErrorCode::InvalidJudgements, describe(report)), report_(std::move(report)) {}

void require_valid(const JudgementSet& set) {
  auto report = validate(set);
  if (!report.ok()) throw InvalidJudgementsError(std::move(report));
}

JudgementSet canonical_set(CanonicalKind kind, bool with_boxes) {
  std::vector<Judgement> points;
  if (kind == CanonicalKind::Five) points.push_back({0.1, -1.2816});
  points.push_back({0.25, -0.6745});
  points.push_back({0.5, 0.0});
  points.push_back({0.75, 0.6745});
  if (kind == CanonicalKind::Five) points.push_back({0.9, 1.2816});
  JudgementSet set(std::move(points));
  if (with_boxes) return set.with_uniform_box({0.05, 0.05});
  return set;
}

std::ptrdiff_t median_index(const JudgementSet& set) {
  for (std::size_t i = 0; i < set.size(); ++i)
    if (set[i].probability == 0.5) return static_cast<std::ptrdiff_t>(i);
  return -1;
}

std::vector<ComplementaryPair> complementary_pairs(const JudgementSet& set) {
  std::vector<ComplementaryPair> pairs;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double p = set[i].probability;
    if (!(p < 0.5)) continue;
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      if (std::fabs(p + set[j].probability - 1.0) <= kComplementTolerance) {
        pairs.push_back({i, j});
        break;
      }
    }
  }
  // Innermost first: the lower member with the largest probability.
  std::sort(pairs.begin(), pairs.end(), [&](const ComplementaryPair& a, const ComplementaryPair& b) {
    return set[a.lower].probability > set[b.lower].probability;
  });
  return pairs;
}

SymmetryDiagnostic symmetry_diagnostic(const JudgementSet& set, double tolerance) {
  const auto median = median_index(set);
  const auto pairs = complementary_pairs(set);
  if (median < 0 && pairs.empty())
    throw Error(ErrorCode::NotAssessable, "symmetry needs a median or a complementary (p, 1-p) pair");

  SymmetryDiagnostic out;
  out.center = median >= 0 ? set[static_cast<std::size_t>(median)].value
                           : 0.5 * (set[pairs.front().lower].value + set[pairs.front().upper].value);
  for (const auto& pair : pairs) {
    const double upper_arm = set[pair.upper].value - out.center;
    const double lower_arm = out.center - set[pair.lower].value;
    out.max_asymmetry = std::max(out.max_asymmetry, std::fabs(upper_arm - lower_arm));
  }
  out.symmetric = out.max_asymmetry <= tolerance;
  return out;
}

}  // namespace elicit
