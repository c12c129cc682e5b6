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

#pragma once

// HTTP front for AnnotationStore.
//
//   GET  /api/queue/next?annotator=ID        200 item | 204 empty
//   POST /api/items/{video_id}/step          {annotator, step, payload}
//   POST /api/items/{video_id}/review        {reviewer, fixes, translations}
//   GET  /api/items/{video_id}               item plus video metadata
//   GET  /api/export                         ground-truth lines + trailer
//   GET  /api/stats                          queue and state counts
//
// Order, claim and state violations answer 409; malformed bodies 400;
// unknown items 404.

#include <map>
#include <memory>
#include <string>

#include "curator/annot/store.hpp"
#include "curator/model.hpp"

namespace httplib {
class Server;
}

namespace curator::annot {

struct ServerOptions {
  std::map<std::string, VideoRecord> videos;  // metadata shown with items
  std::string media_url_prefix;               // media_url = prefix + video_id
};

class AnnotationServer {
 public:
  AnnotationServer(AnnotationStore& store, ServerOptions opts);
  ~AnnotationServer();

  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  // Blocks until stop(). Returns false if the port cannot be bound.
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it; call serve() afterwards.
  int bind_any(const std::string& host);
  bool serve();
  void stop();

  Json item_view(const AnnotationItem& item) const;

 private:
  void routes();

  AnnotationStore& store_;
  ServerOptions opts_;
  std::unique_ptr<httplib::Server> http_;
};

// Export body: one canonical JSON line per record, then the trailer line.
std::string export_lines(const GroundTruthExport& ex);

}  // namespace curator::annot
