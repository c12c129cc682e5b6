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

// Event-sourced state for the coarse-to-fine annotation workflow. Every
// accepted mutation becomes one AnnotationEvent; state is whatever replaying
// the events produces, so the live store and a replay of its log agree.

#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "curator/error.hpp"
#include "curator/model.hpp"

namespace curator::annot {

// Request violates claim ownership, step order or the item state machine.
class Conflict : public DataError {
 public:
  using DataError::DataError;
};

class NotFound : public DataError {
 public:
  using DataError::DataError;
};

enum class ItemState { pending, title_rejected, annotated, discarded, reviewed };

// Workflow steps in the order an annotator must submit them.
enum class Step { title_verdict, caption_set, labels_set, usertags_verified, finalize };
inline constexpr std::array<Step, 5> kStepOrder{Step::title_verdict, Step::caption_set,
                                                Step::labels_set, Step::usertags_verified,
                                                Step::finalize};

enum class EventKind {
  enqueue,
  claim,
  title_verdict,
  caption_set,
  labels_set,
  usertags_verified,
  review_fix,
  finalize
};

std::string_view to_string(ItemState s);
std::string_view to_string(Step s);
std::string_view to_string(EventKind k);
ItemState parse_item_state(std::string_view s);
Step parse_step(std::string_view s);
EventKind parse_event_kind(std::string_view s);

inline constexpr std::size_t kCaptionSoftLimit = 80;

struct Claim {
  std::string annotator;
  std::int64_t expires_ms = 0;
  std::int64_t lease_ms = 0;
  bool operator==(const Claim&) const = default;
};

struct AnnotationItem {
  std::string video_id;
  std::uint64_t queue_seq = 0;
  ItemState state = ItemState::pending;
  std::optional<Claim> claim;
  GroundTruth draft;
  std::size_t steps_done = 0;

  // Holder of an unexpired claim at `now_ms`.
  std::optional<std::string> assigned_to(std::int64_t now_ms) const;
  std::optional<Step> next_step() const;
  Json to_json() const;
  static AnnotationItem from_json(const Json& j);
  bool operator==(const AnnotationItem&) const = default;
};

struct AnnotationEvent {
  std::uint64_t seq = 0;
  std::int64_t ts_ms = 0;
  std::string annotator;
  std::string video_id;
  EventKind kind = EventKind::enqueue;
  Json payload = Json::object();

  Json to_json() const;
  static AnnotationEvent from_json(const Json& j);
  bool operator==(const AnnotationEvent&) const = default;
};

using ItemMap = std::map<std::string, AnnotationItem>;

// Applies one event to a state. Trusts the event: validation happens before
// an event is created.
void apply_event(ItemMap& items, const AnnotationEvent& e);
ItemMap replay(const std::vector<AnnotationEvent>& events);

std::vector<AnnotationEvent> read_event_log(const std::filesystem::path& path);

struct StepOutcome {
  AnnotationItem item;
  std::vector<std::string> warnings;
};

struct ExportTrailer {
  std::size_t count = 0;
  std::map<Aspect, std::map<Language, std::size_t>> vocab;  // distinct labels
  Json to_json() const;
};

struct GroundTruthExport {
  std::vector<GroundTruth> records;  // sorted by video_id
  ExportTrailer trailer;
};

// Distinct labels per aspect and language over the given records.
ExportTrailer vocabulary_trailer(const std::vector<GroundTruth>& records);

// Reviewed items in video_id order.
GroundTruthExport export_reviewed(const ItemMap& items);

struct StoreStats {
  std::map<ItemState, std::size_t> states;
  std::size_t claimed = 0;
  std::size_t available = 0;  // pending and unclaimed
  std::uint64_t last_seq = 0;
  std::map<Aspect, std::vector<std::string>> recent_labels;
  Json to_json() const;
};

class AnnotationStore {
 public:
  using Clock = std::function<std::int64_t()>;  // epoch milliseconds

  struct Options {
    std::chrono::milliseconds lease = std::chrono::minutes(30);
    std::optional<std::filesystem::path> log_path;  // in-memory only when unset
    std::size_t snapshot_every = 0;                 // 0 disables snapshots
    Clock clock;
  };

  // Restores state from the snapshot and event log when they exist.
  explicit AnnotationStore(Options opts);

  // Adds unseen video ids to the queue in the given order.
  std::size_t enqueue(const std::vector<std::string>& video_ids);

  // Re-serves the annotator's own live claim, else claims the pending item
  // with the lowest queue position whose claim is absent or expired.
  std::optional<AnnotationItem> next_item(const std::string& annotator);

  StepOutcome submit_step(const std::string& annotator, const std::string& video_id, Step step,
                          const Json& payload);

  // fixes: {"caption"?: str, "labels"?: {aspect: [zh...]}}
  // translations: {"caption"?: str, "labels"?: {aspect: [en...]}}
  AnnotationItem review(const std::string& reviewer, const std::string& video_id,
                        const Json& fixes, const Json& translations);

  std::optional<AnnotationItem> item(const std::string& video_id) const;
  GroundTruthExport export_groundtruth() const;
  StoreStats stats() const;
  ItemMap items() const;
  std::vector<AnnotationEvent> events() const;
  std::int64_t now() const { return clock_(); }

  // Writes a snapshot of the current state next to the log.
  void snapshot() const;
  static std::filesystem::path snapshot_path(const std::filesystem::path& log_path);

 private:
  AnnotationItem& require_item(const std::string& video_id);
  void require_claim(const AnnotationItem& item, const std::string& annotator) const;
  void commit(std::string annotator, std::string video_id, EventKind kind, Json payload);
  void write_snapshot_locked() const;

  Options opts_;
  Clock clock_;
  mutable std::shared_mutex mu_;
  ItemMap items_;
  std::vector<AnnotationEvent> events_;
  std::uint64_t next_seq_ = 1;
  std::ofstream log_;
};

}  // namespace curator::annot
