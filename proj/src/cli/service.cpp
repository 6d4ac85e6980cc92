//  Copyright 2026 The hpsgkit Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#include "hpsg/cli/service.hpp"

#include <mutex>
#include <shared_mutex>

#include "hpsg/grammar/grammar.hpp"
#include "httplib.h"
#include "views.hpp"

namespace hpsg {

using views::json;

struct ProfileService::State {
  ServiceConfig config;
  std::optional<std::string> grammar_version;
  std::unique_ptr<ProfileLock> lock;
  Profile profile;
  std::shared_mutex mu;
  httplib::Server server;
};

namespace {

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump() + "\n", "application/json");
}

void fail(httplib::Response& res, int status, const std::string& message) {
  send(res, status, json{{"error", message}});
}

std::optional<Verdict> verdict_from_body(const json& body, std::string& error) {
  if (!body.is_object() || !body.contains("verdict") || !body["verdict"].is_string()) {
    error = "body needs a verdict";
    return std::nullopt;
  }
  auto kind = body["verdict"].get<std::string>();
  if (kind == "gold") {
    const char* key = body.contains("reading") ? "reading" : "reading-index";
    if (!body.contains(key) || !body[key].is_number_unsigned()) {
      error = "gold needs a non-negative reading";
      return std::nullopt;
    }
    return Verdict::gold(body[key].get<std::size_t>());
  }
  if (kind == "reject-all" || kind == "reject") return Verdict::reject_all();
  if (kind == "unverified") return Verdict::unverified();
  error = "unknown verdict " + kind;
  return std::nullopt;
}

}  // namespace

ProfileService::ProfileService(ServiceConfig config) : state_(std::make_unique<State>()) {
  State& s = *state_;
  s.config = std::move(config);
  if (s.config.grammar_dir) s.grammar_version = load_grammar_or_throw(*s.config.grammar_dir)->version();
  if (!s.config.read_only) s.lock = std::make_unique<ProfileLock>(s.config.profile_dir);
  s.profile = read_profile(s.config.profile_dir);
  // The library default adds SO_REUSEPORT, which would let a second service
  // bind a port that is already taken.
  s.server.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
  });

  s.server.Get("/info", [&s](const httplib::Request&, httplib::Response& res) {
    std::shared_lock lk(s.mu);
    json j;
    j["profile"] = s.config.profile_dir.string();
    j["profile-grammar-version"] = s.profile.run.grammar_version;
    if (s.grammar_version) j["grammar-version"] = *s.grammar_version;
    j["read-only"] = s.config.read_only;
    j["items"] = s.profile.items.size();
    send(res, 200, j);
  });

  s.server.Get("/items", [&s](const httplib::Request&, httplib::Response& res) {
    std::shared_lock lk(s.mu);
    json out = json::array();
    for (const auto& it : s.profile.items) out.push_back(views::item(s.profile, it));
    send(res, 200, out);
  });

  s.server.Get(R"(/items/(\d+))", [&s](const httplib::Request& req, httplib::Response& res) {
    std::shared_lock lk(s.mu);
    int id = std::stoi(req.matches[1]);
    const Item* it = s.profile.item(id);
    if (!it) return fail(res, 404, "no item " + std::to_string(id));
    json j = views::item(s.profile, *it);
    j["results"] = json::array();
    for (const ResultRecord* r : s.profile.results_for(id))
      j["results"].push_back({{"reading-index", r->reading_index}, {"derivation", r->derivation}});
    send(res, 200, j);
  });

  s.server.Get(R"(/items/(\d+)/readings/(\d+))", [&s](const httplib::Request& req, httplib::Response& res) {
    std::shared_lock lk(s.mu);
    int id = std::stoi(req.matches[1]);
    if (!s.profile.item(id)) return fail(res, 404, "no item " + std::to_string(id));
    try {
      send(res, 200, views::reading(s.profile, id, std::stoul(req.matches[2])));
    } catch (const std::out_of_range& e) {
      fail(res, 404, e.what());
    } catch (const std::exception& e) {
      fail(res, 500, e.what());
    }
  });

  s.server.Post(R"(/items/(\d+)/decision)", [&s](const httplib::Request& req, httplib::Response& res) {
    if (s.config.read_only) return fail(res, 403, "service is read-only");
    json body = json::parse(req.body, nullptr, false);
    std::string error;
    auto v = verdict_from_body(body, error);
    if (!v) return fail(res, 400, error);
    std::string annotator = "ui";
    if (body.contains("annotator") && body["annotator"].is_string()) annotator = body["annotator"].get<std::string>();
    int id = std::stoi(req.matches[1]);
    std::unique_lock lk(s.mu);
    if (!s.profile.item(id)) return fail(res, 404, "no item " + std::to_string(id));
    try {
      Decision d = append_decision(s.config.profile_dir, s.profile, id, *v, annotator);
      send(res, 200, json::parse(decision_line(d)));
    } catch (const ProfileError& e) {
      fail(res, 400, e.what());
    }
  });

  s.server.Get("/compare", [&s](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("against")) return fail(res, 400, "missing against parameter");
    Profile other;
    try {
      other = read_profile(req.get_param_value("against"));
    } catch (const ProfileError& e) {
      return fail(res, 404, e.what());
    }
    std::shared_lock lk(s.mu);
    try {
      send(res, 200, views::report(compare_profiles(s.profile, other)));
    } catch (const ProfileError& e) {
      fail(res, 409, e.what());
    }
  });
}

ProfileService::~ProfileService() { stop(); }

int ProfileService::bind() {
  State& s = *state_;
  if (s.config.port == 0) {
    int port = s.server.bind_to_any_port(s.config.host);
    if (port < 0) throw std::runtime_error("cannot bind " + s.config.host);
    return port;
  }
  if (!s.server.bind_to_port(s.config.host, s.config.port))
    throw std::runtime_error("cannot bind " + s.config.host + ":" + std::to_string(s.config.port));
  return s.config.port;
}

void ProfileService::run() { state_->server.listen_after_bind(); }

void ProfileService::wait_until_ready() { state_->server.wait_until_ready(); }

void ProfileService::stop() {
  if (state_) state_->server.stop();
}

}  // namespace hpsg
