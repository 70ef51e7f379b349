#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "blackout/session.hpp"

namespace httplib {
class Server;
}

namespace blackout::server {

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// The play API as a transport-independent dispatcher.
///
///   GET  /api/levels
///   POST /api/sessions                {"level_id": ...}
///   POST /api/sessions/{id}/moves     {"direction": "up"|"down"|"left"|"right"}
///   GET  /api/sessions/{id}/model
///   GET  /api/sessions/{id}/trace
///
/// Errors come back as {"error": message} with status 400 or 404.
class Api {
 public:
  explicit Api(SessionManager& sessions) : sessions_(sessions) {}

  ApiResponse handle(std::string_view method, std::string_view path, std::string_view body) const;

 private:
  SessionManager& sessions_;
};

/// HTTP transport for an Api. Static files under `static_dir` are mounted at
/// `/` when it is non-empty.
class HttpServer {
 public:
  explicit HttpServer(const Api& api, const std::string& static_dir = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port; throws Error on failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop() is called from another thread.
  void listen();
  void stop();

 private:
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace blackout::server
