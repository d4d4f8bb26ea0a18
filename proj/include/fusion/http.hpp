#pragma once

// HTTP+JSON front of the session manager (cpp-httplib).
//   POST /sessions                {kind, params, human}  -> {id, state}
//   GET  /sessions/{id}                                  -> state
//   POST /sessions/{id}/moves     {move, round?}         -> state
//   GET  /sessions/{id}/trace                            -> JSONL

#include <httplib.h>

#include "fusion/session.hpp"

namespace fusion {

inline void install_routes(httplib::Server& server, SessionManager& sessions) {
  auto reply = [](httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  };
  auto guarded = [reply](auto&& body) {
    return [reply, body](const httplib::Request& req, httplib::Response& res) {
      try {
        body(req, res);
      } catch (const std::exception& e) {
        auto [status, j] = error_response(e);
        reply(res, status, j);
      }
    };
  };

  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Post("/sessions", guarded([&sessions, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, 201, sessions.create(nlohmann::json::parse(req.body)));
              }));
  server.Get(R"(/sessions/([^/]+))", guarded([&sessions, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, 200, sessions.state(req.matches[1]));
             }));
  server.Post(R"(/sessions/([^/]+)/moves)",
              guarded([&sessions, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, 200, sessions.move(req.matches[1], nlohmann::json::parse(req.body)));
              }));
  server.Get(R"(/sessions/([^/]+)/trace)",
             guarded([&sessions](const httplib::Request& req, httplib::Response& res) {
               res.set_content(sessions.trace(req.matches[1]), "application/x-ndjson");
             }));
}

}  // namespace fusion
