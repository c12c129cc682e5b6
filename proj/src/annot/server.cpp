// Copyright 2026 The Curator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "curator/annot/server.hpp"

#include <spdlog/spdlog.h>

#include "httplib.h"
#include "curator/ingest.hpp"

namespace curator::annot {

namespace {

constexpr const char* kJson = "application/json; charset=utf-8";

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(ingest::canonical_line(body), kJson);
}

void reply_error(httplib::Response& res, int status, const std::string& msg) {
  reply(res, status, {{"error", msg}});
}

Json parse_body(const httplib::Request& req) {
  try {
    return Json::parse(req.body);
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed JSON body: ") + e.what());
  }
}

std::string string_field(const Json& body, const char* name) {
  auto it = body.find(name);
  if (it == body.end() || !it->is_string()) {
    throw DataError(std::string("missing string field '") + name + "'");
  }
  return it->get<std::string>();
}

// Maps store exceptions onto status codes.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Conflict& e) {
    reply_error(res, 409, e.what());
  } catch (const NotFound& e) {
    reply_error(res, 404, e.what());
  } catch (const DataError& e) {
    reply_error(res, 400, e.what());
  } catch (const std::exception& e) {
    spdlog::error("annotation server: {}", e.what());
    reply_error(res, 500, e.what());
  }
}

}  // namespace

std::string export_lines(const GroundTruthExport& ex) {
  std::string out;
  for (const auto& g : ex.records) out += ingest::canonical_line(ingest::encode(g)) + "\n";
  out += ingest::canonical_line(ex.trailer.to_json()) + "\n";
  return out;
}

AnnotationServer::AnnotationServer(AnnotationStore& store, ServerOptions opts)
    : store_(store), opts_(std::move(opts)), http_(std::make_unique<httplib::Server>()) {
  routes();
}

AnnotationServer::~AnnotationServer() { stop(); }

Json AnnotationServer::item_view(const AnnotationItem& item) const {
  Json j = item.to_json();
  const auto holder = item.assigned_to(store_.now());
  j["assigned_to"] = holder ? Json(*holder) : Json(nullptr);
  const auto next = item.next_step();
  j["next_step"] = next ? Json(std::string(to_string(*next))) : Json(nullptr);
  if (auto it = opts_.videos.find(item.video_id); it != opts_.videos.end()) {
    j["video"] = ingest::encode(it->second);
  }
  if (!opts_.media_url_prefix.empty()) j["media_url"] = opts_.media_url_prefix + item.video_id;
  return j;
}

void AnnotationServer::routes() {
  auto& s = *http_;

  s.Get("/api/queue/next", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto annotator = req.get_param_value("annotator");
      auto item = store_.next_item(annotator);
      if (!item) {
        res.status = 204;
        return;
      }
      reply(res, 200, item_view(*item));
    });
  });

  s.Post(R"(/api/items/([^/]+)/step)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = parse_body(req);
      const auto step = parse_step(string_field(body, "step"));
      const Json payload = body.contains("payload") ? body["payload"] : Json::object();
      auto out = store_.submit_step(string_field(body, "annotator"), req.matches[1], step, payload);
      Json j = item_view(out.item);
      j["warnings"] = out.warnings;
      reply(res, 200, j);
    });
  });

  s.Post(R"(/api/items/([^/]+)/review)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = parse_body(req);
      const Json fixes = body.contains("fixes") ? body["fixes"] : Json::object();
      const Json translations = body.contains("translations") ? body["translations"] : Json::object();
      auto item = store_.review(string_field(body, "reviewer"), req.matches[1], fixes, translations);
      reply(res, 200, item_view(item));
    });
  });

  s.Get(R"(/api/items/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto item = store_.item(req.matches[1]);
      if (!item) throw NotFound("no item " + std::string(req.matches[1]));
      reply(res, 200, item_view(*item));
    });
  });

  s.Get("/api/export", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      res.status = 200;
      res.set_content(export_lines(store_.export_groundtruth()), "application/x-ndjson; charset=utf-8");
    });
  });

  s.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, store_.stats().to_json()); });
  });

  s.set_logger([](const httplib::Request& req, const httplib::Response& res) {
    spdlog::debug("{} {} -> {}", req.method, req.path, res.status);
  });
}

bool AnnotationServer::listen(const std::string& host, int port) {
  return http_->listen(host, port);
}

int AnnotationServer::bind_any(const std::string& host) { return http_->bind_to_any_port(host); }

bool AnnotationServer::serve() { return http_->listen_after_bind(); }

void AnnotationServer::stop() {
  if (http_ && http_->is_running()) http_->stop();
}

}  // namespace curator::annot
