#include "elicit/service.hpp"

#include <httplib.h>

#include <atomic>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "elicit/io.hpp"

namespace elicit::service {

using codec::Json;

namespace {

std::string random_id() {
  static std::mutex guard;
  static std::mt19937_64 engine{std::random_device{}()};
  std::lock_guard lock(guard);
  std::ostringstream out;
  out << std::hex << engine();
  return out.str();
}

Response json_response(int status, const Json& body) { return {status, body.dump() + "\n"}; }

JudgementSet request_judgements(const Json& request) {
  auto set = codec::decode_judgement_set(request);
  if (request.contains("dp") || request.contains("dx")) {
    ImprecisionBox box;
    if (request.contains("dp")) box.delta_p = codec::number(request["dp"], "/dp");
    if (request.contains("dx")) box.delta_x = codec::number(request["dx"], "/dx");
    set = set.with_uniform_box(box);
  }
  return set;
}

std::vector<FamilyKind> request_families(const Json& request) {
  if (request.contains("families")) return codec::decode_families(request["families"], "/families");
  if (request.contains("family")) return {codec::decode_family(request["family"], "/family")};
  throw ParseError("/families", "missing field");
}

}  // namespace

Json api_error(const std::string& code, const std::string& message, const Json& details) {
  Json body{{"code", code}, {"message", message}};
  if (!details.is_null()) body["details"] = details;
  return body;
}

SessionStore::SessionStore(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

bool SessionStore::valid_id(const std::string& id) {
  static const std::regex pattern("[A-Za-z0-9_-]{1,64}");
  return std::regex_match(id, pattern);
}

std::filesystem::path SessionStore::path_for(const std::string& id) const { return root_ / (id + ".json"); }

std::mutex& SessionStore::write_lock(const std::string& id) {
  std::lock_guard guard(locks_guard_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

void SessionStore::persist(const ElicitationSession& session) const {
  // Write-then-rename so lock-free readers never observe a partial document.
  const auto target = path_for(session.id);
  auto temp = target;
  temp += ".tmp";
  io::write_text_file(temp, save(session));
  std::filesystem::rename(temp, target);
}

ElicitationSession SessionStore::create(const std::string& quantity_label, std::optional<std::string> id) {
  const std::string chosen = id ? *id : random_id();
  if (!valid_id(chosen)) throw std::invalid_argument("invalid session id '" + chosen + "'");
  std::lock_guard lock(write_lock(chosen));
  if (std::filesystem::exists(path_for(chosen))) throw std::invalid_argument("session '" + chosen + "' already exists");
  auto session = new_session(chosen, quantity_label);
  persist(session);
  return session;
}

std::optional<std::string> SessionStore::read(const std::string& id) const {
  if (!valid_id(id)) return std::nullopt;
  std::ifstream in(path_for(id), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ElicitationSession SessionStore::apply(const std::string& id, const Event& e) {
  if (!valid_id(id)) throw std::out_of_range("unknown session '" + id + "'");
  std::lock_guard lock(write_lock(id));
  const auto text = read(id);
  if (!text) throw std::out_of_range("unknown session '" + id + "'");
  auto next = apply_event(load(*text), e);
  persist(next);
  return next;
}

Json compute_fit(const Json& request) {
  const auto set = request_judgements(request);
  const auto families = request_families(request);
  return {{"fits", codec::encode(fit_all(families, set))}};
}

Json compute_feasible(const Json& request) {
  const auto set = request_judgements(request);
  require_valid(set);
  Json results = Json::array();
  for (const auto& family : request_families(request)) {
    Json item = codec::encode(check_feasibility(family, set));
    item["family"] = family.label();
    results.push_back(std::move(item));
  }
  return {{"feasibility", std::move(results)}};
}

Json compute_feedback(const Json& request) {
  const auto& fits_json = codec::field(request, "fits", "");
  if (!fits_json.is_array() || fits_json.empty()) throw ParseError("/fits", "expected a non-empty array");
  std::vector<LocationScaleDistribution> fits;
  for (std::size_t i = 0; i < fits_json.size(); ++i)
    fits.push_back(codec::decode_distribution(fits_json[i], "/fits/" + std::to_string(i)));

  const auto probabilities =
      request.contains("probabilities") ? codec::numbers(request["probabilities"], "/probabilities") : kTertiles;
  std::optional<JudgementSet> set;
  if (request.contains("judgements")) {
    set = request_judgements(request);
    require_valid(*set);
  }
  auto thresholds = request.contains("thresholds") ? codec::numbers(request["thresholds"], "/thresholds")
                                                   : (set ? default_tail_thresholds(*set) : std::vector<double>{});
  if (thresholds.empty())
    for (double p : {0.9, 0.99, 0.999}) thresholds.push_back(fits.front().quantile(p));

  Json quantiles = Json::array();
  for (const auto& d : fits) quantiles.push_back(feedback_quantiles(d, probabilities));

  Json divergences = Json::array();
  for (std::size_t i = 0; i < fits.size(); ++i) {
    for (std::size_t j = i + 1; j < fits.size(); ++j) {
      Json item = codec::encode(family_divergence(fits[i], fits[j]));
      item["first"] = i;
      item["second"] = j;
      divergences.push_back(std::move(item));
    }
  }

  Json out{{"probabilities", probabilities},
           {"quantiles", std::move(quantiles)},
           {"tails", codec::encode(tail_report(fits, thresholds))},
           {"divergences", std::move(divergences)}};

  if (set) {
    auto range = default_figure_range(*set);
    if (request.contains("x_range")) {
      const auto r = codec::numbers(request["x_range"], "/x_range");
      if (r.size() != 2) throw ParseError("/x_range", "expected [min, max]");
      range = {r[0], r[1]};
    }
    const int n_points = request.contains("n_points") ? codec::integer(request["n_points"], "/n_points") : 201;
    const auto fig = figure_data(fits, *set, range, n_points);
    Json figure = codec::encode_figure_sidecar(fig);
    figure["x"] = fig.x;
    for (std::size_t c = 0; c < fig.curves.size(); ++c) figure["curves"][c]["cdf"] = fig.curves[c].cdf;
    out["figure"] = std::move(figure);
  }
  return out;
}

Response Api::create_session(const std::string& body) {
  const Json request = body.empty() ? Json::object() : codec::parse(body);
  if (!request.is_object()) throw ParseError("", "expected an object");
  const auto label = request.contains("quantity_label") ? codec::text(request["quantity_label"], "/quantity_label") : "";
  std::optional<std::string> id;
  if (request.contains("id")) id = codec::text(request["id"], "/id");
  const auto session = store_.create(label, id);
  return {201, save(session)};
}

Response Api::get_session(const std::string& id) {
  const auto text = store_.read(id);
  if (!text) return json_response(404, api_error("not_found", "unknown session '" + id + "'"));
  return {200, *text};
}

Response Api::post_event(const std::string& id, const std::string& body) {
  const auto e = decode_event(codec::parse(body));
  try {
    return {200, save(store_.apply(id, e))};
  } catch (const std::out_of_range& ex) {
    return json_response(404, api_error("not_found", ex.what()));
  }
}

Response Api::handle(const std::string& method, const std::string& path, const std::string& body) {
  static const std::regex session_path("^/sessions/([^/]+)$");
  static const std::regex events_path("^/sessions/([^/]+)/events$");
  try {
    std::smatch m;
    if (method == "POST" && path == "/sessions") return create_session(body);
    if (method == "GET" && std::regex_match(path, m, session_path)) return get_session(m[1]);
    if (method == "POST" && std::regex_match(path, m, events_path)) return post_event(m[1], body);
    if (method == "POST" && path == "/fit") return json_response(200, compute_fit(codec::parse(body)));
    if (method == "POST" && path == "/feasible") return json_response(200, compute_feasible(codec::parse(body)));
    if (method == "POST" && path == "/feedback") return json_response(200, compute_feedback(codec::parse(body)));
    return json_response(404, api_error("not_found", "no route for " + method + " " + path));
  } catch (const InvalidJudgementsError& e) {
    return json_response(422, api_error("invalid_judgements", e.what(), codec::encode(e.report())));
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::InvalidTransition:
        return json_response(409, api_error("invalid_transition", e.what()));
      case ErrorCode::UnsupportedVersion:
        return json_response(400, api_error("unsupported_version", e.what()));
      default:
        return json_response(400, api_error("bad_request", e.what()));
    }
  } catch (const std::logic_error& e) {  // invalid_argument, domain_error
    return json_response(400, api_error("bad_request", e.what()));
  }
}

struct HttpServer::Impl {
  Api& api;
  httplib::Server server;

  explicit Impl(Api& a) : api(a) {}
};

HttpServer::HttpServer(Api& api, std::optional<std::filesystem::path> static_root) : impl_(std::make_unique<Impl>(api)) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    const auto out = impl_->api.handle(req.method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  impl_->server.Post("/sessions", forward);
  impl_->server.Get(R"(/sessions/[^/]+)", forward);
  impl_->server.Post(R"(/sessions/[^/]+/events)", forward);
  impl_->server.Post("/fit", forward);
  impl_->server.Post("/feasible", forward);
  impl_->server.Post("/feedback", forward);
  if (static_root) impl_->server.set_mount_point("/", static_root->string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace elicit::service
