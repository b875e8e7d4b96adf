#include <doctest.h>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "elicit/session.hpp"

using namespace elicit;

namespace {

const std::vector<FamilyKind> kThree{FamilyKind::normal(), FamilyKind::student_t(5), FamilyKind::cauchy()};

JudgementSet three() { return canonical_set(CanonicalKind::Three); }
JudgementSet five() { return canonical_set(CanonicalKind::Five); }

std::vector<Event> full_loop() {
  return {event::AddJudgements{three()}, event::Fit{kThree}, event::ShowFeedback{},
          event::Revise{five()},          event::Fit{kThree}, event::ShowFeedback{},
          event::Finalize{}};
}

ElicitationSession run(const std::vector<Event>& events) { return replay("s1", "rainfall (mm)", events); }

ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an elicit::Error");
  return ErrorCode::ParseError;
}

}  // namespace

TEST_CASE("new session") {
  const auto s = new_session("abc", "X");
  CHECK(s.schema_version == kSessionSchemaVersion);
  CHECK(s.state == SessionState::Collecting);
  CHECK(s.rounds.empty());
  CHECK(s.events.empty());
}

TEST_CASE("add judgements, fit, feedback, revise") {
  auto s = apply_event(new_session("s1", "X"), event::AddJudgements{three()});
  CHECK(s.state == SessionState::Collecting);
  REQUIRE(s.rounds.size() == 1);
  CHECK(s.rounds[0].judgement_set == three());

  s = apply_event(s, event::Fit{kThree});
  CHECK(s.state == SessionState::Fitted);
  REQUIRE(s.rounds[0].fits.has_value());
  CHECK(s.rounds[0].fits->size() == 3);
  CHECK(s.rounds[0].fits->at(2).family == FamilyKind::cauchy());

  s = apply_event(s, event::ShowFeedback{});
  CHECK(s.state == SessionState::FeedbackGiven);
  REQUIRE(s.rounds[0].feedback_shown.has_value());
  const auto& fb = *s.rounds[0].feedback_shown;
  CHECK(fb.spec.probabilities == kTertiles);
  CHECK(fb.spec.thresholds == default_tail_thresholds(three()));
  REQUIRE(fb.families.size() == 3);
  CHECK(std::fabs(fb.families[0].quantiles[1] - 0.4307) <= 1e-3);
  CHECK(fb.divergences.size() == 3);

  const auto before = s.rounds[0];
  s = apply_event(s, event::Revise{five()});
  CHECK(s.state == SessionState::Collecting);
  REQUIRE(s.rounds.size() == 2);
  CHECK(s.rounds[1].judgement_set == five());
  CHECK(s.rounds[0].expert_response == ExpertResponse::Revised);
  CHECK(s.rounds[0].judgement_set == before.judgement_set);
  CHECK(s.rounds[0].fits == before.fits);
  CHECK(s.rounds[0].feedback_shown == before.feedback_shown);
}

TEST_CASE("finalize records acceptance and freezes the session") {
  const auto s = run(full_loop());
  CHECK(s.state == SessionState::Finalized);
  CHECK(s.rounds.size() == 2);
  CHECK(s.rounds[1].expert_response == ExpertResponse::Accepted);
  CHECK(s.events.size() == full_loop().size());
  for (const auto& e : full_loop()) {
    CHECK_FALSE(is_legal(SessionState::Finalized, e));
    CHECK(error_of([&] { apply_event(s, e); }) == ErrorCode::InvalidTransition);
  }
}

TEST_CASE("state table") {
  const Event add = event::AddJudgements{three()};
  const Event fit = event::Fit{kThree};
  const Event show = event::ShowFeedback{};
  const Event revise = event::Revise{five()};
  const Event finalize = event::Finalize{};
  struct Row {
    SessionState state;
    bool add, fit, show, revise, finalize;
  };
  const std::vector<Row> table{
      {SessionState::Collecting, true, true, false, false, false},
      {SessionState::Fitted, false, false, true, false, false},
      {SessionState::FeedbackGiven, false, false, false, true, true},
      {SessionState::Finalized, false, false, false, false, false},
  };
  for (const auto& row : table) {
    CAPTURE(to_string(row.state));
    CHECK(is_legal(row.state, add) == row.add);
    CHECK(is_legal(row.state, fit) == row.fit);
    CHECK(is_legal(row.state, show) == row.show);
    CHECK(is_legal(row.state, revise) == row.revise);
    CHECK(is_legal(row.state, finalize) == row.finalize);
  }
}

TEST_CASE("illegal transitions leave the session untouched") {
  const auto empty = new_session("s1", "X");
  CHECK(error_of([&] { apply_event(empty, event::Fit{kThree}); }) == ErrorCode::InvalidTransition);
  CHECK(error_of([&] { apply_event(empty, event::ShowFeedback{}); }) == ErrorCode::InvalidTransition);
  CHECK(error_of([&] { apply_event(empty, event::Finalize{}); }) == ErrorCode::InvalidTransition);

  const auto fitted = run({event::AddJudgements{three()}, event::Fit{kThree}});
  const auto copy = fitted;
  CHECK(error_of([&] { apply_event(fitted, event::AddJudgements{five()}); }) == ErrorCode::InvalidTransition);
  CHECK(error_of([&] { apply_event(fitted, event::Revise{five()}); }) == ErrorCode::InvalidTransition);
  CHECK(fitted == copy);
}

TEST_CASE("invalid judgement payloads carry the validation report") {
  const JudgementSet bad({{0.5, 0.0}, {0.25, 1.0}});
  try {
    apply_event(new_session("s1", "X"), event::AddJudgements{bad});
    FAIL("expected InvalidJudgementsError");
  } catch (const InvalidJudgementsError& e) {
    CHECK(e.report().has(ViolationRule::NonMonotoneProbability));
  }
  const auto given = run({event::AddJudgements{three()}, event::Fit{kThree}, event::ShowFeedback{}});
  CHECK_THROWS_AS(apply_event(given, event::Revise{bad}), InvalidJudgementsError);
}

TEST_CASE("adding judgements replaces the working set of the open round") {
  const auto s = run({event::AddJudgements{three()}, event::AddJudgements{five()}});
  REQUIRE(s.rounds.size() == 1);
  CHECK(s.rounds[0].judgement_set == five());
}

TEST_CASE("history is immutable: each event only touches the last round") {
  ElicitationSession s = new_session("s1", "X");
  for (const auto& e : full_loop()) {
    const auto next = apply_event(s, e);
    const std::size_t keep = s.rounds.empty() ? 0 : s.rounds.size() - 1;
    for (std::size_t i = 0; i < keep; ++i) CHECK(next.rounds[i] == s.rounds[i]);
    s = next;
  }
}

TEST_CASE("save/load round trip") {
  const auto s = run(full_loop());
  const auto text = save(s);
  CHECK(text.back() == '\n');
  const auto back = load(text);
  CHECK(back == s);
  CHECK(save(back) == text);

  const auto partial = run({event::AddJudgements{three()}, event::Fit{kThree}, event::ShowFeedback{},
                            event::Revise{canonical_set(CanonicalKind::Five, true)}});
  CHECK(load(save(partial)) == partial);
}

TEST_CASE("session document shape") {
  const auto doc = codec::parse(save(run(full_loop())));
  for (const char* key : {"schema_version", "id", "quantity_label", "state", "rounds", "events"})
    CHECK(doc.contains(key));
  CHECK(doc.size() == 6);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["state"] == "Finalized");
  CHECK(doc["events"][0]["type"] == "AddJudgements");
}

TEST_CASE("replay reproduces the saved session byte for byte") {
  const auto s = run(full_loop());
  const auto text = save(s);
  const auto loaded = load(text);
  const auto replayed = replay(loaded.id, loaded.quantity_label, loaded.events);
  CHECK(save(replayed) == text);
}

TEST_CASE("event encoding round trip") {
  for (const auto& e : full_loop()) CHECK(decode_event(encode_event(e)) == e);
  const Event custom = event::ShowFeedback{{{0.05, 0.95}, {2.0, 4.0}}};
  CHECK(decode_event(encode_event(custom)) == custom);
  CHECK_THROWS_AS(decode_event(codec::parse(R"({"type":"Explode"})")), ParseError);
}

TEST_CASE("load rejects other schema versions and unknown fields") {
  auto doc = codec::parse(save(run(full_loop())));
  doc["schema_version"] = 9999;
  CHECK(error_of([&] { load(doc.dump()); }) == ErrorCode::UnsupportedVersion);

  auto extra = codec::parse(save(run(full_loop())));
  extra["future_field"] = true;
  CHECK(error_of([&] { load(extra.dump()); }) == ErrorCode::UnsupportedVersion);
}

TEST_CASE("load reports malformed documents with a location") {
  const auto text = save(run(full_loop()));
  try {
    load(text.substr(0, text.size() / 2));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK_FALSE(e.location().empty());
  }
  auto doc = codec::parse(text);
  doc["rounds"][0]["judgement_set"]["judgements"][0]["p"] = "quarter";
  try {
    load(doc.dump());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.location().find("/rounds/0") == 0);
  }
  CHECK_THROWS_AS(load("[]"), ParseError);
}

TEST_CASE("default tail thresholds lie beyond the judgements") {
  const auto t = default_tail_thresholds(five());
  REQUIRE(t.size() == 3);
  CHECK(t[0] > 1.2816);
  CHECK(t[0] < t[1]);
  CHECK(t[1] < t[2]);
}
