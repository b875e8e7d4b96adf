#ifndef ELICIT_SESSION_HPP
#define ELICIT_SESSION_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "elicit/codec.hpp"
#include "elicit/feedback.hpp"
#include "elicit/fitting.hpp"
#include "elicit/judgements.hpp"

namespace elicit {

inline constexpr int kSessionSchemaVersion = 1;

enum class SessionState { Collecting, Fitted, FeedbackGiven, Finalized };
enum class ExpertResponse { Accepted, Revised };

const char* to_string(SessionState state);
const char* to_string(ExpertResponse response);

/// What to show the expert. Empty thresholds are replaced by defaults derived from the judgements.
struct FeedbackSpec {
  std::vector<double> probabilities = kTertiles;
  std::vector<double> thresholds;

  bool operator==(const FeedbackSpec&) const = default;
};

struct FamilyFeedback {
  LocationScaleDistribution dist;
  std::vector<double> quantiles;

  bool operator==(const FamilyFeedback&) const = default;
};

struct PairDivergence {
  std::size_t first = 0;
  std::size_t second = 0;
  Divergence divergence;

  bool operator==(const PairDivergence&) const = default;
};

struct FeedbackRecord {
  FeedbackSpec spec;  // with thresholds resolved
  std::vector<FamilyFeedback> families;
  TailReport tails;
  std::vector<PairDivergence> divergences;

  bool operator==(const FeedbackRecord&) const = default;
};

/// Tail thresholds used when a feedback request names none: max x + {1, 2, 4} * half the judged range.
std::vector<double> default_tail_thresholds(const JudgementSet& set);

/// Representative fit per family (least squares, else exact, else the feasibility witness), then
/// quantiles, tail report and pairwise divergences.
FeedbackRecord build_feedback(const std::vector<FamilyFits>& fits, const JudgementSet& set, const FeedbackSpec& spec);

struct Round {
  JudgementSet judgement_set;
  std::optional<std::vector<FamilyFits>> fits;
  std::optional<FeedbackRecord> feedback_shown;
  std::optional<ExpertResponse> expert_response;

  bool operator==(const Round&) const = default;
};

namespace event {

struct AddJudgements {
  JudgementSet judgement_set;
  bool operator==(const AddJudgements&) const = default;
};
struct Fit {
  std::vector<FamilyKind> families;
  bool operator==(const Fit&) const = default;
};
struct ShowFeedback {
  FeedbackSpec spec;
  bool operator==(const ShowFeedback&) const = default;
};
struct Revise {
  JudgementSet judgement_set;
  bool operator==(const Revise&) const = default;
};
struct Finalize {
  bool operator==(const Finalize&) const = default;
};

}  // namespace event

using Event = std::variant<event::AddJudgements, event::Fit, event::ShowFeedback, event::Revise, event::Finalize>;

const char* event_name(const Event& e);

struct ElicitationSession {
  int schema_version = kSessionSchemaVersion;
  std::string id;
  std::string quantity_label;
  SessionState state = SessionState::Collecting;
  std::vector<Round> rounds;
  /// Every successfully applied event, in order.
  std::vector<Event> events;

  bool operator==(const ElicitationSession&) const = default;
};

ElicitationSession new_session(std::string id, std::string quantity_label);

/// Legality of `e` in `state`, ignoring payload validity.
bool is_legal(SessionState state, const Event& e);

/// Returns the successor session. Throws Error(InvalidTransition) for an illegal event and
/// InvalidJudgementsError for an invalid judgement payload; the input session is never modified.
ElicitationSession apply_event(const ElicitationSession& session, const Event& e);

/// Folds `events` over new_session(id, quantity_label).
ElicitationSession replay(const std::string& id, const std::string& quantity_label, const std::vector<Event>& events);

/// Canonical JSON text (sorted keys, two-space indent, trailing newline).
std::string save(const ElicitationSession& session);
/// Throws ParseError for malformed documents and Error(UnsupportedVersion) for other schema versions or unknown fields.
ElicitationSession load(const std::string& document);

codec::Json encode_event(const Event& e);
Event decode_event(const codec::Json& j, const std::string& where = "");

}  // namespace elicit

#endif  // ELICIT_SESSION_HPP
