#include "blackout/server.hpp"

#include <httplib.h>

#include <json.hpp>

#include "blackout/error.hpp"

namespace blackout::server {

namespace {

using nlohmann::json;

ApiResponse reply(int status, const json& body) { return {status, "application/json", body.dump() + "\n"}; }
ApiResponse error(int status, const std::string& message) { return reply(status, json{{"error", message}}); }

json atoms_json(const pddl::State& s) {
  json out = json::array();
  for (const auto& atom : s) out.push_back(atom.to_string());
  return out;
}

json proficiency_json(const eval::ProficiencyReport& r) {
  json out = json::array();
  for (const auto& row : r.rows) {
    if (row.unobserved)
      out.push_back({{"action", row.action}, {"f1", "unobserved"}});
    else
      out.push_back({{"action", row.action}, {"f1", row.scores.f1}});
  }
  return out;
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    auto slash = path.find('/');
    auto part = path.substr(0, slash);
    if (!part.empty()) parts.push_back(part);
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash + 1);
  }
  return parts;
}

std::optional<json> parse_body(std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

}  // namespace

ApiResponse Api::handle(std::string_view method, std::string_view path, std::string_view body) const {
  if (auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
  const auto parts = split_path(path);
  if (parts.size() < 2 || parts[0] != "api") return error(404, "no such endpoint");

  if (parts.size() == 2 && parts[1] == "levels") {
    if (method != "GET") return error(405, "method not allowed");
    json out = json::array();
    for (const auto& l : sessions_.levels())
      out.push_back({{"id", l.id}, {"name", l.name}, {"grid_rows", sokoban::render(l.level)}});
    return reply(200, out);
  }

  if (parts[1] != "sessions") return error(404, "no such endpoint");

  if (parts.size() == 2) {
    if (method != "POST") return error(405, "method not allowed");
    auto req = parse_body(body);
    if (!req || !req->contains("level_id") || !(*req)["level_id"].is_string())
      return error(400, "expected {\"level_id\": string}");
    auto session = sessions_.create((*req)["level_id"].get<std::string>());
    if (!session) return error(404, "unknown level");
    return reply(200, {{"session_id", session->id()},
                       {"grid", session->grid()},
                       {"state_atoms", atoms_json(session->state())},
                       {"proficiency", proficiency_json(session->proficiency())}});
  }

  auto session = sessions_.find(std::string(parts[2]));
  if (!session) return error(404, "unknown session");
  if (parts.size() != 4) return error(404, "no such endpoint");

  if (parts[3] == "moves") {
    if (method != "POST") return error(405, "method not allowed");
    auto req = parse_body(body);
    if (!req || !req->contains("direction") || !(*req)["direction"].is_string())
      return error(400, "expected {\"direction\": \"up\"|\"down\"|\"left\"|\"right\"}");
    auto dir = sokoban::parse_direction((*req)["direction"].get<std::string>());
    if (!dir) return error(400, "direction must be up, down, left or right");
    MoveResult r = session->move(*dir);
    return reply(200, {{"outcome", r.ok ? "ok" : "failed"},
                       {"action", r.action.to_string()},
                       {"state_atoms", atoms_json(r.state)},
                       {"grid", session->grid()},
                       {"trace_length", r.trace_length},
                       {"proficiency", proficiency_json(r.proficiency)},
                       {"model_pddl", r.model_pddl}});
  }
  if (parts[3] == "model") {
    if (method != "GET") return error(405, "method not allowed");
    return reply(200, {{"model_pddl", session->model_pddl()}, {"proficiency", proficiency_json(session->proficiency())}});
  }
  if (parts[3] == "trace") {
    if (method != "GET") return error(405, "method not allowed");
    return {200, "text/plain; charset=utf-8", session->trace_text()};
  }
  return error(404, "no such endpoint");
}

HttpServer::HttpServer(const Api& api, const std::string& static_dir) : http_(std::make_unique<httplib::Server>()) {
  auto forward = [&api](const httplib::Request& req, httplib::Response& res) {
    ApiResponse r = api.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(r.body, r.content_type);
  };
  http_->Get(R"(/api/.*)", forward);
  http_->Post(R"(/api/.*)", forward);
  http_->Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  if (!static_dir.empty() && !http_->set_mount_point("/", static_dir))
    throw Error("cannot serve static files from " + static_dir);
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    int bound = http_->bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!http_->bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::listen() { http_->listen_after_bind(); }

void HttpServer::stop() { http_->stop(); }

}  // namespace blackout::server
