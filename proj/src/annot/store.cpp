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

#include "curator/annot/store.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "curator/ingest.hpp"
#include "curator/text.hpp"

namespace curator::annot {

namespace {

constexpr std::array<std::pair<std::string_view, ItemState>, 5> kStateNames{{
    {"pending", ItemState::pending},
    {"title_rejected", ItemState::title_rejected},
    {"annotated", ItemState::annotated},
    {"discarded", ItemState::discarded},
    {"reviewed", ItemState::reviewed}}};
constexpr std::array<std::pair<std::string_view, Step>, 5> kStepNames{{
    {"title_verdict", Step::title_verdict},
    {"caption_set", Step::caption_set},
    {"labels_set", Step::labels_set},
    {"usertags_verified", Step::usertags_verified},
    {"finalize", Step::finalize}}};
constexpr std::array<std::pair<std::string_view, EventKind>, 8> kKindNames{{
    {"enqueue", EventKind::enqueue},
    {"claim", EventKind::claim},
    {"title_verdict", EventKind::title_verdict},
    {"caption_set", EventKind::caption_set},
    {"labels_set", EventKind::labels_set},
    {"usertags_verified", EventKind::usertags_verified},
    {"review_fix", EventKind::review_fix},
    {"finalize", EventKind::finalize}}};

template <typename E, std::size_t N>
std::string_view name_of(E e, const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [n, v] : table) {
    if (v == e) return n;
  }
  return "?";
}

template <typename E, std::size_t N>
E parse_name(std::string_view s, const std::array<std::pair<std::string_view, E>, N>& table,
             const char* what) {
  for (const auto& [n, v] : table) {
    if (n == s) return v;
  }
  throw DataError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

EventKind kind_for(Step s) {
  switch (s) {
    case Step::title_verdict: return EventKind::title_verdict;
    case Step::caption_set: return EventKind::caption_set;
    case Step::labels_set: return EventKind::labels_set;
    case Step::usertags_verified: return EventKind::usertags_verified;
    case Step::finalize: return EventKind::finalize;
  }
  return EventKind::finalize;
}

std::vector<std::string> clean_labels(const Json& list, const std::string& what) {
  if (!list.is_array()) throw DataError(what + " must be an array of strings");
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& v : list) {
    if (!v.is_string()) throw DataError(what + " must be an array of strings");
    auto s = text::trim(v.get<std::string>());
    if (!s.empty() && seen.insert(s).second) out.push_back(std::move(s));
  }
  return out;
}

std::string clean_caption(const Json& v, const std::string& what) {
  if (!v.is_string()) throw DataError(what + " must be a string");
  auto s = text::trim(v.get<std::string>());
  if (s.empty()) throw DataError(what + " is empty");
  return s;
}

bool complete(const GroundTruth& g) {
  return std::all_of(kAspects.begin(), kAspects.end(),
                     [&](Aspect a) { return !g.labels_for(a, Language::zh).empty(); });
}

void apply_labels(GroundTruth& g, const Json& by_aspect, Language lang) {
  for (const auto& [aspect, list] : by_aspect.items()) {
    g.labels[parse_aspect(aspect)][lang] = list.get<std::vector<std::string>>();
  }
}

// Normalizes review input into {"fixes": {...}, "translations": {...}}.
Json normalize_review(const Json& fixes, const Json& translations) {
  auto part = [](const Json& in, const std::string& what) {
    Json out = Json::object();
    if (in.is_null()) return out;
    if (!in.is_object()) throw DataError(what + " must be an object");
    for (const auto& [key, v] : in.items()) {
      if (key == "caption") {
        out["caption"] = clean_caption(v, what + ".caption");
      } else if (key == "labels") {
        if (!v.is_object()) throw DataError(what + ".labels must be an object keyed by aspect");
        Json labels = Json::object();
        for (const auto& [aspect, list] : v.items()) {
          parse_aspect(aspect);
          labels[aspect] = clean_labels(list, what + ".labels." + aspect);
        }
        out["labels"] = std::move(labels);
      } else {
        throw DataError("unknown " + what + " field '" + key + "'");
      }
    }
    return out;
  };
  return {{"fixes", part(fixes, "fixes")}, {"translations", part(translations, "translations")}};
}

}  // namespace

std::string_view to_string(ItemState s) { return name_of(s, kStateNames); }
std::string_view to_string(Step s) { return name_of(s, kStepNames); }
std::string_view to_string(EventKind k) { return name_of(k, kKindNames); }
ItemState parse_item_state(std::string_view s) { return parse_name(s, kStateNames, "state"); }
Step parse_step(std::string_view s) { return parse_name(s, kStepNames, "step"); }
EventKind parse_event_kind(std::string_view s) { return parse_name(s, kKindNames, "event kind"); }

std::optional<std::string> AnnotationItem::assigned_to(std::int64_t now_ms) const {
  if (claim && now_ms < claim->expires_ms) return claim->annotator;
  return std::nullopt;
}

std::optional<Step> AnnotationItem::next_step() const {
  if (state != ItemState::pending || steps_done >= kStepOrder.size()) return std::nullopt;
  return kStepOrder[steps_done];
}

Json AnnotationItem::to_json() const {
  Json j{{"video_id", video_id},
         {"queue_seq", queue_seq},
         {"state", to_string(state)},
         {"steps_done", steps_done},
         {"draft", ingest::encode(draft)}};
  j["claim"] = claim ? Json{{"annotator", claim->annotator},
                            {"expires_ms", claim->expires_ms},
                            {"lease_ms", claim->lease_ms}}
                     : Json(nullptr);
  return j;
}

AnnotationItem AnnotationItem::from_json(const Json& j) {
  AnnotationItem it;
  it.video_id = j.at("video_id").get<std::string>();
  it.queue_seq = j.at("queue_seq").get<std::uint64_t>();
  it.state = parse_item_state(j.at("state").get<std::string>());
  it.steps_done = j.at("steps_done").get<std::size_t>();
  it.draft = ingest::decode_groundtruth(j.at("draft"));
  if (const auto& c = j.at("claim"); !c.is_null()) {
    it.claim = Claim{c.at("annotator").get<std::string>(), c.at("expires_ms").get<std::int64_t>(),
                     c.at("lease_ms").get<std::int64_t>()};
  }
  return it;
}

Json AnnotationEvent::to_json() const {
  return {{"seq", seq},           {"ts", ts_ms},     {"annotator", annotator},
          {"video_id", video_id}, {"kind", to_string(kind)}, {"payload", payload}};
}

AnnotationEvent AnnotationEvent::from_json(const Json& j) {
  try {
    AnnotationEvent e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.ts_ms = j.at("ts").get<std::int64_t>();
    e.annotator = j.at("annotator").get<std::string>();
    e.video_id = j.at("video_id").get<std::string>();
    e.kind = parse_event_kind(j.at("kind").get<std::string>());
    e.payload = j.at("payload");
    return e;
  } catch (const Json::exception& ex) {
    throw DataError(std::string("malformed event: ") + ex.what());
  }
}

void apply_event(ItemMap& items, const AnnotationEvent& e) {
  if (e.kind == EventKind::enqueue) {
    AnnotationItem it;
    it.video_id = e.video_id;
    it.queue_seq = e.seq;
    it.draft.video_id = e.video_id;
    items[e.video_id] = std::move(it);
    return;
  }
  auto found = items.find(e.video_id);
  if (found == items.end()) {
    throw DataError("event " + std::to_string(e.seq) + " references unknown item " + e.video_id);
  }
  auto& it = found->second;
  auto extend = [&] {
    if (it.claim) it.claim->expires_ms = e.ts_ms + it.claim->lease_ms;
  };
  const auto& p = e.payload;
  switch (e.kind) {
    case EventKind::claim: {
      if (!it.claim || it.claim->annotator != e.annotator) {
        it.draft = GroundTruth{};
        it.draft.video_id = it.video_id;
        it.steps_done = 0;
      }
      const auto lease = p.at("lease_ms").get<std::int64_t>();
      it.claim = Claim{e.annotator, e.ts_ms + lease, lease};
      break;
    }
    case EventKind::title_verdict:
      it.draft.title_relevant = p.at("relevant").get<bool>();
      it.steps_done = 1;
      if (!it.draft.title_relevant) {
        it.state = ItemState::title_rejected;
        it.claim.reset();
      } else {
        extend();
      }
      break;
    case EventKind::caption_set:
      it.draft.caption[Language::zh] = p.at("caption").get<std::string>();
      it.steps_done = 2;
      extend();
      break;
    case EventKind::labels_set:
      it.draft.labels[Aspect::object][Language::zh] = p.at("objects").get<std::vector<std::string>>();
      it.draft.labels[Aspect::action][Language::zh] = p.at("actions").get<std::vector<std::string>>();
      it.draft.labels[Aspect::scene][Language::zh] = p.at("scenes").get<std::vector<std::string>>();
      it.steps_done = 3;
      extend();
      break;
    case EventKind::usertags_verified:
      it.draft.labels[Aspect::user_tag][Language::zh] =
          p.at("relevant").get<std::vector<std::string>>();
      it.steps_done = 4;
      extend();
      break;
    case EventKind::finalize:
      it.steps_done = 5;
      it.state = complete(it.draft) ? ItemState::annotated : ItemState::discarded;
      it.claim.reset();
      break;
    case EventKind::review_fix: {
      const auto& fixes = p.at("fixes");
      const auto& tr = p.at("translations");
      if (fixes.contains("caption")) it.draft.caption[Language::zh] = fixes["caption"].get<std::string>();
      if (fixes.contains("labels")) apply_labels(it.draft, fixes["labels"], Language::zh);
      if (tr.contains("caption")) it.draft.caption[Language::en] = tr["caption"].get<std::string>();
      if (tr.contains("labels")) apply_labels(it.draft, tr["labels"], Language::en);
      it.state = ItemState::reviewed;
      break;
    }
    case EventKind::enqueue:
      break;
  }
}

ItemMap replay(const std::vector<AnnotationEvent>& events) {
  ItemMap items;
  for (const auto& e : events) apply_event(items, e);
  return items;
}

std::vector<AnnotationEvent> read_event_log(const std::filesystem::path& path) {
  std::vector<AnnotationEvent> events;
  ingest::for_each_line(path, [&](std::size_t, const Json& j) {
    auto e = AnnotationEvent::from_json(j);
    if (!events.empty() && e.seq <= events.back().seq) {
      throw DataError("event seq " + std::to_string(e.seq) + " is not increasing");
    }
    events.push_back(std::move(e));
  });
  return events;
}

Json ExportTrailer::to_json() const {
  Json v = Json::object();
  for (Aspect a : kAspects) {
    Json per = Json::object();
    for (Language l : {Language::zh, Language::en}) {
      std::size_t n = 0;
      if (auto it = vocab.find(a); it != vocab.end()) {
        if (auto jt = it->second.find(l); jt != it->second.end()) n = jt->second;
      }
      per[std::string(to_string(l))] = n;
    }
    v[std::string(to_string(a))] = std::move(per);
  }
  return {{"trailer", {{"count", count}, {"vocab", std::move(v)}}}};
}

ExportTrailer vocabulary_trailer(const std::vector<GroundTruth>& records) {
  ExportTrailer t;
  t.count = records.size();
  std::map<Aspect, std::map<Language, std::set<std::string>>> distinct;
  for (const auto& g : records) {
    for (const auto& [a, by_lang] : g.labels) {
      for (const auto& [l, list] : by_lang) distinct[a][l].insert(list.begin(), list.end());
    }
  }
  for (Aspect a : kAspects) {
    for (Language l : {Language::zh, Language::en}) t.vocab[a][l] = distinct[a][l].size();
  }
  return t;
}

Json StoreStats::to_json() const {
  Json s = Json::object();
  for (const auto& [state, n] : states) s[std::string(to_string(state))] = n;
  Json recent = Json::object();
  for (const auto& [a, labels] : recent_labels) recent[std::string(to_string(a))] = labels;
  return {{"states", std::move(s)},
          {"claimed", claimed},
          {"available", available},
          {"last_seq", last_seq},
          {"recent_labels", std::move(recent)}};
}

// ---- store ---------------------------------------------------------------

std::filesystem::path AnnotationStore::snapshot_path(const std::filesystem::path& log_path) {
  auto p = log_path;
  p += ".snapshot";
  return p;
}

AnnotationStore::AnnotationStore(Options opts) : opts_(std::move(opts)) {
  clock_ = opts_.clock ? opts_.clock : [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
  if (!opts_.log_path) return;

  const auto& path = *opts_.log_path;
  if (std::filesystem::exists(path)) events_ = read_event_log(path);
  std::uint64_t restored = 0;
  const auto snap = snapshot_path(path);
  if (std::filesystem::exists(snap)) {
    auto in = ingest::open_input(snap);
    Json j;
    try {
      j = Json::parse(in);
      restored = j.at("seq").get<std::uint64_t>();
      for (const auto& item : j.at("items")) {
        auto it = AnnotationItem::from_json(item);
        items_[it.video_id] = std::move(it);
      }
    } catch (const Json::exception& e) {
      throw DataError("corrupt snapshot " + snap.string() + ": " + e.what());
    }
    if (!events_.empty() && restored > events_.back().seq) {
      throw DataError("snapshot is newer than the event log");
    }
  }
  for (const auto& e : events_) {
    if (e.seq > restored) apply_event(items_, e);
  }
  if (!events_.empty()) next_seq_ = events_.back().seq + 1;
  log_.open(path, std::ios::binary | std::ios::app);
  if (!log_) throw IoError("cannot append to event log " + path.string());
}

void AnnotationStore::commit(std::string annotator, std::string video_id, EventKind kind,
                             Json payload) {
  AnnotationEvent e{next_seq_, clock_(), std::move(annotator), std::move(video_id), kind,
                    std::move(payload)};
  if (log_.is_open()) {
    log_ << ingest::canonical_line(e.to_json()) << '\n';
    log_.flush();
    if (!log_) throw IoError("event log write failed");
  }
  ++next_seq_;
  apply_event(items_, e);
  events_.push_back(std::move(e));
  if (opts_.snapshot_every != 0 && opts_.log_path && events_.back().seq % opts_.snapshot_every == 0) {
    write_snapshot_locked();
  }
}

std::size_t AnnotationStore::enqueue(const std::vector<std::string>& video_ids) {
  std::unique_lock lock(mu_);
  std::size_t added = 0;
  for (const auto& id : video_ids) {
    if (id.empty()) throw DataError("empty video id");
    if (items_.count(id)) continue;
    commit("", id, EventKind::enqueue, Json::object());
    ++added;
  }
  return added;
}

AnnotationItem& AnnotationStore::require_item(const std::string& video_id) {
  auto it = items_.find(video_id);
  if (it == items_.end()) throw NotFound("no item " + video_id);
  return it->second;
}

void AnnotationStore::require_claim(const AnnotationItem& item, const std::string& annotator) const {
  const auto holder = item.assigned_to(clock_());
  if (!holder) throw Conflict(item.video_id + " is not claimed (or the claim expired)");
  if (*holder != annotator) throw Conflict(item.video_id + " is claimed by another annotator");
}

std::optional<AnnotationItem> AnnotationStore::next_item(const std::string& annotator) {
  if (annotator.empty()) throw DataError("annotator id is required");
  std::unique_lock lock(mu_);
  const auto now = clock_();
  const AnnotationItem* pick = nullptr;
  for (const auto& [id, it] : items_) {
    if (it.state != ItemState::pending) continue;
    const auto holder = it.assigned_to(now);
    if (holder && *holder == annotator) {
      pick = &it;
      break;
    }
    if (!holder && (!pick || it.queue_seq < pick->queue_seq)) pick = &it;
  }
  if (!pick) return std::nullopt;
  const std::string id = pick->video_id;
  commit(annotator, id, EventKind::claim, {{"lease_ms", opts_.lease.count()}});
  return items_.at(id);
}

StepOutcome AnnotationStore::submit_step(const std::string& annotator, const std::string& video_id,
                                         Step step, const Json& payload) {
  std::unique_lock lock(mu_);
  auto& item = require_item(video_id);
  if (item.state != ItemState::pending) {
    throw Conflict(video_id + " is " + std::string(to_string(item.state)) +
                   "; no further steps accepted");
  }
  require_claim(item, annotator);
  const auto expected = item.next_step();
  if (!expected || *expected != step) {
    throw Conflict("out-of-order step " + std::string(to_string(step)) + " for " + video_id +
                   "; expected " + (expected ? std::string(to_string(*expected)) : "none"));
  }
  if (!payload.is_object() && !payload.is_null()) throw DataError("payload must be an object");
  const Json p = payload.is_null() ? Json::object() : payload;

  StepOutcome out;
  Json normalized = Json::object();
  switch (step) {
    case Step::title_verdict: {
      auto it = p.find("relevant");
      if (it == p.end() || !it->is_boolean()) throw DataError("title_verdict needs boolean 'relevant'");
      normalized["relevant"] = it->get<bool>();
      break;
    }
    case Step::caption_set: {
      auto it = p.find("caption");
      if (it == p.end()) throw DataError("caption_set needs 'caption'");
      normalized["caption"] = clean_caption(*it, "caption");
      const auto len = text::codepoint_count(normalized["caption"].get<std::string>());
      if (len > kCaptionSoftLimit) {
        out.warnings.push_back("caption has " + std::to_string(len) + " characters, over the " +
                               std::to_string(kCaptionSoftLimit) + "-character soft limit");
      }
      break;
    }
    case Step::labels_set:
      for (const char* key : {"objects", "actions", "scenes"}) {
        auto it = p.find(key);
        normalized[key] = it == p.end() ? std::vector<std::string>{} : clean_labels(*it, key);
      }
      break;
    case Step::usertags_verified: {
      auto it = p.find("relevant");
      normalized["relevant"] =
          it == p.end() ? std::vector<std::string>{} : clean_labels(*it, "relevant");
      break;
    }
    case Step::finalize:
      break;
  }
  commit(annotator, video_id, kind_for(step), std::move(normalized));
  out.item = items_.at(video_id);
  return out;
}

AnnotationItem AnnotationStore::review(const std::string& reviewer, const std::string& video_id,
                                       const Json& fixes, const Json& translations) {
  if (reviewer.empty()) throw DataError("reviewer id is required");
  std::unique_lock lock(mu_);
  auto& item = require_item(video_id);
  if (item.state != ItemState::annotated) {
    throw Conflict("cannot review " + video_id + " in state " + std::string(to_string(item.state)));
  }
  auto payload = normalize_review(fixes, translations);
  GroundTruth trial = item.draft;
  if (payload["fixes"].contains("labels")) apply_labels(trial, payload["fixes"]["labels"], Language::zh);
  if (!complete(trial)) throw Conflict("review fix would leave an aspect of " + video_id + " empty");
  commit(reviewer, video_id, EventKind::review_fix, std::move(payload));
  return items_.at(video_id);
}

std::optional<AnnotationItem> AnnotationStore::item(const std::string& video_id) const {
  std::shared_lock lock(mu_);
  auto it = items_.find(video_id);
  if (it == items_.end()) return std::nullopt;
  return it->second;
}

GroundTruthExport export_reviewed(const ItemMap& items) {
  GroundTruthExport out;
  for (const auto& [id, it] : items) {  // map order is video_id order
    if (it.state == ItemState::reviewed) out.records.push_back(it.draft);
  }
  out.trailer = vocabulary_trailer(out.records);
  return out;
}

GroundTruthExport AnnotationStore::export_groundtruth() const {
  std::shared_lock lock(mu_);
  return export_reviewed(items_);
}

StoreStats AnnotationStore::stats() const {
  std::shared_lock lock(mu_);
  StoreStats s;
  for (const auto& [name, state] : kStateNames) s.states[state] = 0;
  const auto now = clock_();
  for (const auto& [id, it] : items_) {
    ++s.states[it.state];
    if (it.state != ItemState::pending) continue;
    if (it.assigned_to(now)) ++s.claimed;
    else ++s.available;
  }
  s.last_seq = events_.empty() ? 0 : events_.back().seq;

  constexpr std::size_t kRecent = 20;
  auto note = [&](Aspect a, const Json& list) {
    auto& dst = s.recent_labels[a];
    for (const auto& v : list) {
      const auto label = v.get<std::string>();
      if (dst.size() < kRecent && std::find(dst.begin(), dst.end(), label) == dst.end()) {
        dst.push_back(label);
      }
    }
  };
  for (Aspect a : kAspects) s.recent_labels[a];
  for (auto e = events_.rbegin(); e != events_.rend(); ++e) {
    if (e->kind == EventKind::labels_set) {
      note(Aspect::object, e->payload["objects"]);
      note(Aspect::action, e->payload["actions"]);
      note(Aspect::scene, e->payload["scenes"]);
    } else if (e->kind == EventKind::usertags_verified) {
      note(Aspect::user_tag, e->payload["relevant"]);
    }
  }
  return s;
}

ItemMap AnnotationStore::items() const {
  std::shared_lock lock(mu_);
  return items_;
}

std::vector<AnnotationEvent> AnnotationStore::events() const {
  std::shared_lock lock(mu_);
  return events_;
}

void AnnotationStore::write_snapshot_locked() const {
  if (!opts_.log_path) return;
  Json items = Json::array();
  for (const auto& [id, it] : items_) items.push_back(it.to_json());
  const Json j{{"seq", events_.empty() ? 0 : events_.back().seq}, {"items", std::move(items)}};
  const auto path = snapshot_path(*opts_.log_path);
  auto tmp = path;
  tmp += ".tmp";
  {
    auto out = ingest::open_output(tmp);
    out << ingest::canonical_line(j) << '\n';
    if (!out) throw IoError("snapshot write failed");
  }
  std::filesystem::rename(tmp, path);
}

void AnnotationStore::snapshot() const {
  std::unique_lock lock(mu_);
  write_snapshot_locked();
}

}  // namespace curator::annot
