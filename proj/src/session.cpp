#include "elicit/session.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace elicit {

using codec::Json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void illegal(const ElicitationSession& s, const Event& e) {
  throw Error(ErrorCode::InvalidTransition,
              std::string(event_name(e)) + " is not allowed in state " + to_string(s.state));
}

LocationScaleDistribution representative(const FamilyFits& fits) {
  if (fits.least_squares) return fits.least_squares->dist;
  if (fits.exact) return fits.exact->dist;
  if (fits.feasibility.witness) return *fits.feasibility.witness;
  throw std::logic_error("no fitted distribution for " + fits.family.label());
}

SessionState parse_state(const std::string& s, const std::string& where) {
  for (auto state : {SessionState::Collecting, SessionState::Fitted, SessionState::FeedbackGiven, SessionState::Finalized})
    if (s == to_string(state)) return state;
  throw ParseError(where, "unknown state '" + s + "'");
}

Json encode_feedback(const FeedbackRecord& record) {
  Json families = Json::array();
  for (const auto& f : record.families) {
    Json item = codec::encode(f.dist);
    item["quantiles"] = f.quantiles;
    families.push_back(std::move(item));
  }
  Json divergences = Json::array();
  for (const auto& d : record.divergences) {
    Json item = codec::encode(d.divergence);
    item["first"] = d.first;
    item["second"] = d.second;
    divergences.push_back(std::move(item));
  }
  return {{"probabilities", record.spec.probabilities},
          {"thresholds", record.spec.thresholds},
          {"families", std::move(families)},
          {"tails", codec::encode(record.tails)},
          {"divergences", std::move(divergences)}};
}

FeedbackRecord decode_feedback(const Json& j, const std::string& where) {
  using codec::field;
  FeedbackRecord out;
  out.spec.probabilities = codec::numbers(field(j, "probabilities", where), where + "/probabilities");
  out.spec.thresholds = codec::numbers(field(j, "thresholds", where), where + "/thresholds");
  const auto& families = field(j, "families", where);
  if (!families.is_array()) throw ParseError(where + "/families", "expected an array");
  for (std::size_t i = 0; i < families.size(); ++i) {
    const auto item_at = where + "/families/" + std::to_string(i);
    out.families.push_back({codec::decode_distribution(families[i], item_at),
                            codec::numbers(field(families[i], "quantiles", item_at), item_at + "/quantiles")});
  }
  out.tails = codec::decode_tail_report(field(j, "tails", where), where + "/tails");
  const auto& divergences = field(j, "divergences", where);
  if (!divergences.is_array()) throw ParseError(where + "/divergences", "expected an array");
  for (std::size_t i = 0; i < divergences.size(); ++i) {
    const auto item_at = where + "/divergences/" + std::to_string(i);
    out.divergences.push_back(
        {static_cast<std::size_t>(codec::integer(field(divergences[i], "first", item_at), item_at + "/first")),
         static_cast<std::size_t>(codec::integer(field(divergences[i], "second", item_at), item_at + "/second")),
         codec::decode_divergence(divergences[i], item_at)});
  }
  return out;
}

Json encode_round(const Round& round) {
  return {{"judgement_set", codec::encode(round.judgement_set)},
          {"fits", round.fits ? codec::encode(*round.fits) : Json(nullptr)},
          {"feedback_shown", round.feedback_shown ? encode_feedback(*round.feedback_shown) : Json(nullptr)},
          {"expert_response", round.expert_response ? Json(to_string(*round.expert_response)) : Json(nullptr)}};
}

Round decode_round(const Json& j, const std::string& where) {
  using codec::field;
  Round round{.judgement_set = codec::decode_judgement_set(field(j, "judgement_set", where), where + "/judgement_set")};
  if (const auto& fits = field(j, "fits", where); !fits.is_null())
    round.fits = codec::decode_fit_report(fits, where + "/fits");
  if (const auto& fb = field(j, "feedback_shown", where); !fb.is_null())
    round.feedback_shown = decode_feedback(fb, where + "/feedback_shown");
  if (const auto& response = field(j, "expert_response", where); !response.is_null()) {
    const auto s = codec::text(response, where + "/expert_response");
    if (s == "accepted")
      round.expert_response = ExpertResponse::Accepted;
    else if (s == "revised")
      round.expert_response = ExpertResponse::Revised;
    else
      throw ParseError(where + "/expert_response", "unknown response '" + s + "'");
  }
  return round;
}

}  // namespace

const char* to_string(SessionState state) {
  switch (state) {
    case SessionState::Collecting:
      return "Collecting";
    case SessionState::Fitted:
      return "Fitted";
    case SessionState::FeedbackGiven:
      return "FeedbackGiven";
    case SessionState::Finalized:
      return "Finalized";
  }
  return "Unknown";
}

const char* to_string(ExpertResponse response) {
  return response == ExpertResponse::Accepted ? "accepted" : "revised";
}

const char* event_name(const Event& e) {
  return std::visit(Overloaded{[](const event::AddJudgements&) { return "AddJudgements"; },
                               [](const event::Fit&) { return "Fit"; },
                               [](const event::ShowFeedback&) { return "ShowFeedback"; },
                               [](const event::Revise&) { return "Revise"; },
                               [](const event::Finalize&) { return "Finalize"; }},
                    e);
}

std::vector<double> default_tail_thresholds(const JudgementSet& set) {
  if (set.empty()) return {};
  const double top = set[set.size() - 1].value;
  double half_range = 0.5 * (top - set[0].value);
  if (!(half_range > 0.0)) half_range = std::max(1.0, std::fabs(top));
  return {top + half_range, top + 2.0 * half_range, top + 4.0 * half_range};
}

FeedbackRecord build_feedback(const std::vector<FamilyFits>& fits, const JudgementSet& set, const FeedbackSpec& spec) {
  FeedbackRecord record;
  record.spec = spec;
  if (record.spec.thresholds.empty()) record.spec.thresholds = default_tail_thresholds(set);

  std::vector<LocationScaleDistribution> dists;
  for (const auto& f : fits) {
    dists.push_back(representative(f));
    record.families.push_back({dists.back(), feedback_quantiles(dists.back(), record.spec.probabilities)});
  }
  record.tails = tail_report(dists, record.spec.thresholds);
  for (std::size_t i = 0; i < dists.size(); ++i)
    for (std::size_t j = i + 1; j < dists.size(); ++j)
      record.divergences.push_back({i, j, family_divergence(dists[i], dists[j])});
  return record;
}

ElicitationSession new_session(std::string id, std::string quantity_label) {
  ElicitationSession s;
  s.id = std::move(id);
  s.quantity_label = std::move(quantity_label);
  return s;
}

bool is_legal(SessionState state, const Event& e) {
  return std::visit(Overloaded{[&](const event::AddJudgements&) { return state == SessionState::Collecting; },
                               [&](const event::Fit&) { return state == SessionState::Collecting; },
                               [&](const event::ShowFeedback&) { return state == SessionState::Fitted; },
                               [&](const event::Revise&) { return state == SessionState::FeedbackGiven; },
                               [&](const event::Finalize&) { return state == SessionState::FeedbackGiven; }},
                    e);
}

ElicitationSession apply_event(const ElicitationSession& session, const Event& e) {
  if (!is_legal(session.state, e)) illegal(session, e);

  ElicitationSession next = session;
  std::visit(Overloaded{
                 [&](const event::AddJudgements& ev) {
                   require_valid(ev.judgement_set);
                   if (next.rounds.empty()) next.rounds.emplace_back();
                   next.rounds.back().judgement_set = ev.judgement_set;
                 },
                 [&](const event::Fit& ev) {
                   if (next.rounds.empty() || next.rounds.back().judgement_set.empty()) illegal(session, e);
                   if (ev.families.empty()) throw std::invalid_argument("Fit needs at least one family");
                   auto& round = next.rounds.back();
                   round.fits = fit_all(ev.families, round.judgement_set);
                   next.state = SessionState::Fitted;
                 },
                 [&](const event::ShowFeedback& ev) {
                   auto& round = next.rounds.back();
                   round.feedback_shown = build_feedback(*round.fits, round.judgement_set, ev.spec);
                   next.state = SessionState::FeedbackGiven;
                 },
                 [&](const event::Revise& ev) {
                   require_valid(ev.judgement_set);
                   next.rounds.back().expert_response = ExpertResponse::Revised;
                   next.rounds.push_back(Round{.judgement_set = ev.judgement_set});
                   next.state = SessionState::Collecting;
                 },
                 [&](const event::Finalize&) {
                   next.rounds.back().expert_response = ExpertResponse::Accepted;
                   next.state = SessionState::Finalized;
                 },
             },
             e);
  next.events.push_back(e);
  return next;
}

ElicitationSession replay(const std::string& id, const std::string& quantity_label, const std::vector<Event>& events) {
  auto s = new_session(id, quantity_label);
  for (const auto& e : events) s = apply_event(s, e);
  return s;
}

Json encode_event(const Event& e) {
  Json j = std::visit(
      Overloaded{[](const event::AddJudgements& ev) { return Json{{"judgement_set", codec::encode(ev.judgement_set)}}; },
                 [](const event::Fit& ev) {
                   Json families = Json::array();
                   for (const auto& f : ev.families) families.push_back(f.label());
                   return Json{{"families", std::move(families)}};
                 },
                 [](const event::ShowFeedback& ev) {
                   return Json{{"probabilities", ev.spec.probabilities}, {"thresholds", ev.spec.thresholds}};
                 },
                 [](const event::Revise& ev) { return Json{{"judgement_set", codec::encode(ev.judgement_set)}}; },
                 [](const event::Finalize&) { return Json::object(); }},
      e);
  j["type"] = event_name(e);
  return j;
}

Event decode_event(const Json& j, const std::string& where) {
  using codec::field;
  const auto type = codec::text(field(j, "type", where), where + "/type");
  if (type == "AddJudgements")
    return event::AddJudgements{codec::decode_judgement_set(field(j, "judgement_set", where), where + "/judgement_set")};
  if (type == "Revise")
    return event::Revise{codec::decode_judgement_set(field(j, "judgement_set", where), where + "/judgement_set")};
  if (type == "Fit") return event::Fit{codec::decode_families(field(j, "families", where), where + "/families")};
  if (type == "ShowFeedback") {
    FeedbackSpec spec;
    if (j.contains("probabilities")) spec.probabilities = codec::numbers(j["probabilities"], where + "/probabilities");
    if (j.contains("thresholds")) spec.thresholds = codec::numbers(j["thresholds"], where + "/thresholds");
    return event::ShowFeedback{std::move(spec)};
  }
  if (type == "Finalize") return event::Finalize{};
  throw ParseError(where + "/type", "unknown event type '" + type + "'");
}

std::string save(const ElicitationSession& session) {
  Json rounds = Json::array();
  for (const auto& r : session.rounds) rounds.push_back(encode_round(r));
  Json events = Json::array();
  for (const auto& e : session.events) events.push_back(encode_event(e));
  const Json doc{{"schema_version", session.schema_version},
                 {"id", session.id},
                 {"quantity_label", session.quantity_label},
                 {"state", to_string(session.state)},
                 {"rounds", std::move(rounds)},
                 {"events", std::move(events)}};
  return doc.dump(2) + "\n";
}

ElicitationSession load(const std::string& document) {
  using codec::field;
  const Json doc = codec::parse(document);
  if (!doc.is_object()) throw ParseError("", "session document must be a JSON object");

  const int version = codec::integer(field(doc, "schema_version", ""), "/schema_version");
  if (version != kSessionSchemaVersion)
    throw Error(ErrorCode::UnsupportedVersion, "unsupported schema_version " + std::to_string(version));
  static const std::set<std::string> known{"schema_version", "id", "quantity_label", "state", "rounds", "events"};
  for (const auto& [key, value] : doc.items())
    if (!known.contains(key)) throw Error(ErrorCode::UnsupportedVersion, "unknown session field '" + key + "'");

  ElicitationSession s;
  s.schema_version = version;
  s.id = codec::text(field(doc, "id", ""), "/id");
  s.quantity_label = codec::text(field(doc, "quantity_label", ""), "/quantity_label");
  s.state = parse_state(codec::text(field(doc, "state", ""), "/state"), "/state");
  const auto& rounds = field(doc, "rounds", "");
  if (!rounds.is_array()) throw ParseError("/rounds", "expected an array");
  for (std::size_t i = 0; i < rounds.size(); ++i) s.rounds.push_back(decode_round(rounds[i], "/rounds/" + std::to_string(i)));
  const auto& events = field(doc, "events", "");
  if (!events.is_array()) throw ParseError("/events", "expected an array");
  for (std::size_t i = 0; i < events.size(); ++i) s.events.push_back(decode_event(events[i], "/events/" + std::to_string(i)));
  return s;
}

}  // namespace elicit
