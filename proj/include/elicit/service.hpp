#ifndef ELICIT_SERVICE_HPP
#define ELICIT_SERVICE_HPP

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "elicit/session.hpp"

namespace elicit::service {

/// One JSON file per session id under `root`. Writes to one id are serialized; reads never lock.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path root);

  /// Throws std::invalid_argument for a malformed or already used id. Generates an id when none is given.
  ElicitationSession create(const std::string& quantity_label, std::optional<std::string> id = std::nullopt);

  /// Saved document text, or nullopt for an unknown id.
  std::optional<std::string> read(const std::string& id) const;

  /// Loads, applies and persists under the id's write lock. Throws as apply_event does;
  /// std::out_of_range for an unknown id.
  ElicitationSession apply(const std::string& id, const Event& e);

  static bool valid_id(const std::string& id);

 private:
  std::filesystem::path path_for(const std::string& id) const;
  std::mutex& write_lock(const std::string& id);
  void persist(const ElicitationSession& session) const;

  std::filesystem::path root_;
  std::mutex locks_guard_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

struct Response {
  int status = 200;
  std::string body;
};

/// Transport-independent request handler for the JSON API.
class Api {
 public:
  explicit Api(SessionStore& store) : store_(store) {}

  Response handle(const std::string& method, const std::string& path, const std::string& body);

 private:
  Response create_session(const std::string& body);
  Response get_session(const std::string& id);
  Response post_event(const std::string& id, const std::string& body);

  SessionStore& store_;
};

/// Stateless compute routes, exposed for reuse by the CLI and tests.
codec::Json compute_fit(const codec::Json& request);
codec::Json compute_feasible(const codec::Json& request);
codec::Json compute_feedback(const codec::Json& request);

/// Error body {"code", "message", "details"?}.
codec::Json api_error(const std::string& code, const std::string& message, const codec::Json& details = nullptr);

/// HTTP/1.1 listener wrapping Api; optionally serves a static UI bundle at `/`.
class HttpServer {
 public:
  HttpServer(Api& api, std::optional<std::filesystem::path> static_root = std::nullopt);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace elicit::service

#endif  // ELICIT_SERVICE_HPP
