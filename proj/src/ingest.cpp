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

#include "curator/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "curator/error.hpp"
#include "curator/text.hpp"

namespace curator::ingest {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw DataError("record is not an object");
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) throw DataError(std::string("missing field ") + name);
  return *it;
}

const Json* optional_field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

[[noreturn]] void bad_type(const char* name, const char* expected) {
  throw DataError(std::string("field ") + name + ": expected " + expected);
}

std::string get_string(const Json& v, const char* name) {
  if (!v.is_string()) bad_type(name, "string");
  return v.get<std::string>();
}

double get_number(const Json& v, const char* name) {
  if (!v.is_number()) bad_type(name, "number");
  return v.get<double>();
}

std::int64_t get_int(const Json& v, const char* name) {
  if (!v.is_number_integer()) bad_type(name, "integer");
  return v.get<std::int64_t>();
}

std::vector<std::string> get_strings(const Json& v, const char* name) {
  if (!v.is_array()) bad_type(name, "array of strings");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(get_string(s, name));
  return out;
}

}  // namespace

std::string labels_file(Dimension d) { return "labels." + std::string(to_string(d)) + ".jsonl"; }

std::string canonical_line(const Json& j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

Json encode(const VideoRecord& r) {
  Json j{{"id", r.id},
         {"duration_s", r.duration_s},
         {"file_size_bytes", r.file_size_bytes},
         {"title", r.title},
         {"user_tags", r.user_tags}};
  if (r.description) j["description"] = *r.description;
  if (r.channel) j["channel"] = *r.channel;
  if (r.upload_ts) j["upload_ts"] = *r.upload_ts;
  if (r.auto_caption) j["auto_caption"] = *r.auto_caption;
  return j;
}

VideoRecord decode_video(const Json& j) {
  VideoRecord r;
  r.id = get_string(field(j, "id"), "id");
  if (r.id.empty()) throw DataError("field id: empty");
  r.duration_s = get_number(field(j, "duration_s"), "duration_s");
  if (!(r.duration_s >= 0.0)) throw DataError("field duration_s: negative");
  const auto size = get_int(field(j, "file_size_bytes"), "file_size_bytes");
  if (size < 0) throw DataError("field file_size_bytes: negative");
  r.file_size_bytes = static_cast<std::uint64_t>(size);
  r.title = get_string(field(j, "title"), "title");
  r.user_tags = get_strings(field(j, "user_tags"), "user_tags");
  if (auto* v = optional_field(j, "description")) r.description = get_string(*v, "description");
  if (auto* v = optional_field(j, "channel")) r.channel = get_string(*v, "channel");
  if (auto* v = optional_field(j, "upload_ts")) r.upload_ts = get_int(*v, "upload_ts");
  if (auto* v = optional_field(j, "auto_caption")) r.auto_caption = get_string(*v, "auto_caption");
  return r;
}

Json encode(const FrameRecord& f) {
  Json boxes = Json::array();
  for (const auto& b : f.face_boxes) boxes.push_back({b.x, b.y, b.w, b.h});
  return {{"video_id", f.video_id},         {"frame_index", f.frame_index},
          {"frame_w", f.frame_w},           {"frame_h", f.frame_h},
          {"face_boxes", std::move(boxes)}, {"ocr_char_count", f.ocr_char_count}};
}

FrameRecord decode_frame(const Json& j) {
  FrameRecord f;
  f.video_id = get_string(field(j, "video_id"), "video_id");
  f.frame_index = get_int(field(j, "frame_index"), "frame_index");
  f.frame_w = get_int(field(j, "frame_w"), "frame_w");
  f.frame_h = get_int(field(j, "frame_h"), "frame_h");
  const auto& boxes = field(j, "face_boxes");
  if (!boxes.is_array()) bad_type("face_boxes", "array of [x,y,w,h]");
  for (const auto& b : boxes) {
    if (!b.is_array() || b.size() != 4) bad_type("face_boxes", "array of [x,y,w,h]");
    f.face_boxes.push_back({get_int(b[0], "face_boxes"), get_int(b[1], "face_boxes"),
                            get_int(b[2], "face_boxes"), get_int(b[3], "face_boxes")});
  }
  f.ocr_char_count = get_int(field(j, "ocr_char_count"), "ocr_char_count");
  if (f.ocr_char_count < 0) throw DataError("field ocr_char_count: negative");
  return f;
}

Json encode(const LabelScoreSet& s) {
  return {{"video_id", s.video_id}, {"scores", s.scores}};
}

LabelScoreSet decode_label_scores(const Json& j, Dimension d) {
  LabelScoreSet s;
  s.video_id = get_string(field(j, "video_id"), "video_id");
  s.dimension = d;
  const auto& scores = field(j, "scores");
  if (!scores.is_object()) bad_type("scores", "object");
  for (const auto& [label, v] : scores.items()) {
    const double x = get_number(v, "scores");
    if (label.empty()) throw DataError("field scores: empty label");
    if (!(x >= 0.0)) throw DataError("field scores: negative score for '" + label + "'");
    s.scores.emplace(label, x);
  }
  return s;
}

Json encode(const FeatureVector& v) { return {{"video_id", v.video_id}, {"values", v.values}}; }

FeatureVector decode_feature(const Json& j) {
  FeatureVector v;
  v.video_id = get_string(field(j, "video_id"), "video_id");
  const auto& values = field(j, "values");
  if (!values.is_array()) bad_type("values", "array of numbers");
  v.values.reserve(values.size());
  for (const auto& x : values) v.values.push_back(get_number(x, "values"));
  return v;
}

Json encode(const TitleTokenization& t) {
  Json toks = Json::array();
  for (const auto& tok : t.tokens) {
    Json o{{"surface", tok.surface}, {"pos", to_string(tok.pos)}};
    if (tok.head) o["head"] = *tok.head;
    if (tok.relation) o["relation"] = to_string(*tok.relation);
    toks.push_back(std::move(o));
  }
  return {{"video_id", t.video_id}, {"tokens", std::move(toks)}};
}

TitleTokenization decode_title_tokens(const Json& j) {
  TitleTokenization t;
  t.video_id = get_string(field(j, "video_id"), "video_id");
  const auto& toks = field(j, "tokens");
  if (!toks.is_array()) bad_type("tokens", "array");
  for (const auto& o : toks) {
    TitleToken tok;
    tok.surface = get_string(field(o, "surface"), "surface");
    tok.pos = parse_pos(get_string(field(o, "pos"), "pos"));
    if (auto* h = optional_field(o, "head")) {
      const auto head = get_int(*h, "head");
      if (head < 0) throw DataError("field head: negative");
      tok.head = static_cast<std::size_t>(head);
    }
    if (auto* r = optional_field(o, "relation")) {
      tok.relation = parse_relation(get_string(*r, "relation"));
    }
    t.tokens.push_back(std::move(tok));
  }
  for (auto& msg : check(t)) throw DataError("field tokens: " + msg);
  return t;
}

Json encode(const GroundTruth& g) {
  Json caption = Json::object();
  for (const auto& [lang, text] : g.caption) caption[std::string(to_string(lang))] = text;
  Json labels = Json::object();
  for (const auto& [aspect, by_lang] : g.labels) {
    Json o = Json::object();
    for (const auto& [lang, list] : by_lang) o[std::string(to_string(lang))] = list;
    labels[std::string(to_string(aspect))] = std::move(o);
  }
  return {{"video_id", g.video_id},
          {"title_relevant", g.title_relevant},
          {"caption", std::move(caption)},
          {"labels", std::move(labels)}};
}

GroundTruth decode_groundtruth(const Json& j) {
  GroundTruth g;
  g.video_id = get_string(field(j, "video_id"), "video_id");
  if (auto* t = optional_field(j, "title_relevant")) {
    if (!t->is_boolean()) bad_type("title_relevant", "boolean");
    g.title_relevant = t->get<bool>();
  }
  if (auto* c = optional_field(j, "caption")) {
    if (!c->is_object()) bad_type("caption", "object keyed by language");
    for (const auto& [lang, text] : c->items()) {
      g.caption[parse_language(lang)] = get_string(text, "caption");
    }
  }
  const auto& labels = field(j, "labels");
  if (!labels.is_object()) bad_type("labels", "object keyed by aspect");
  for (const auto& [aspect, by_lang] : labels.items()) {
    if (!by_lang.is_object()) bad_type("labels", "object keyed by language");
    auto& dst = g.labels[parse_aspect(aspect)];
    for (const auto& [lang, list] : by_lang.items()) {
      dst[parse_language(lang)] = get_strings(list, "labels");
    }
  }
  return g;
}

Json encode(const CleaningVerdict& v) {
  Json j{{"video_id", v.video_id}, {"kept", v.kept()}, {"evidence", v.evidence}};
  if (v.category) j["category"] = to_string(*v.category);
  return j;
}

CleaningVerdict decode_verdict(const Json& j) {
  CleaningVerdict v;
  v.video_id = get_string(field(j, "video_id"), "video_id");
  const auto& kept = field(j, "kept");
  if (!kept.is_boolean()) bad_type("kept", "boolean");
  if (auto* c = optional_field(j, "category")) v.category = parse_category(get_string(*c, "category"));
  if (kept.get<bool>() == v.category.has_value()) {
    throw DataError("field kept: inconsistent with category");
  }
  if (auto* e = optional_field(j, "evidence")) v.evidence = *e;
  return v;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void for_each_line(std::istream& in, const std::function<void(std::size_t, const Json&)>& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::exception& e) {
      throw DataError("line " + std::to_string(lineno) + ": malformed JSON (" + e.what() + ")");
    }
    try {
      fn(lineno, j);
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Json::exception& e) {
      throw DataError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void for_each_line(const fs::path& path,
                   const std::function<void(std::size_t, const Json&)>& fn) {
  auto in = open_input(path);
  try {
    for_each_line(in, fn);
  } catch (const DataError& e) {
    throw DataError(path.filename().string() + ": " + e.what());
  }
}

std::vector<VideoRecord> read_manifest(std::istream& in) {
  std::vector<VideoRecord> records;
  std::set<std::string> ids;
  for_each_line(in, [&](std::size_t, const Json& j) {
    auto r = decode_video(j);
    if (!ids.insert(r.id).second) throw DataError("duplicate id " + r.id);
    records.push_back(std::move(r));
  });
  return records;
}

std::vector<VideoRecord> load_manifest(const fs::path& path) {
  auto in = open_input(path);
  try {
    return read_manifest(in);
  } catch (const DataError& e) {
    throw DataError(path.filename().string() + ": " + e.what());
  }
}

void write_manifest(std::ostream& out, const std::vector<VideoRecord>& records) {
  for (const auto& r : records) out << canonical_line(encode(r)) << '\n';
}

namespace {

template <typename T>
using Decoder = std::function<T(const Json&)>;

// Reads every record of a sidecar file; missing files yield nothing.
template <typename T>
std::vector<T> read_all(const fs::path& path, Decoder<T> decode) {
  std::vector<T> out;
  if (!fs::exists(path)) return out;
  for_each_line(path, [&](std::size_t, const Json& j) { out.push_back(decode(j)); });
  return out;
}

void require_known(const std::set<std::string>& ids, const std::string& id, const char* file) {
  if (!ids.count(id)) {
    throw DataError(std::string(file) + ": unknown video_id '" + id + "'");
  }
}

}  // namespace

SidecarBundle load_sidecars(const fs::path& dir, const std::vector<VideoRecord>& manifest) {
  if (!fs::is_directory(dir)) throw IoError("sidecar directory not found: " + dir.string());
  std::set<std::string> ids;
  for (const auto& r : manifest) ids.insert(r.id);

  auto frames_f = std::async(std::launch::async, read_all<FrameRecord>, dir / kFramesFile,
                             Decoder<FrameRecord>(decode_frame));
  auto features_f = std::async(std::launch::async, read_all<FeatureVector>, dir / kFeaturesFile,
                               Decoder<FeatureVector>(decode_feature));
  auto titles_f = std::async(std::launch::async, read_all<TitleTokenization>,
                             dir / kTitleTokensFile, Decoder<TitleTokenization>(decode_title_tokens));
  std::vector<std::future<std::vector<LabelScoreSet>>> labels_f;
  for (Dimension d : kDimensions) {
    labels_f.push_back(std::async(
        std::launch::async, read_all<LabelScoreSet>, dir / labels_file(d),
        Decoder<LabelScoreSet>([d](const Json& j) { return decode_label_scores(j, d); })));
  }

  SidecarBundle bundle;
  for (auto& f : frames_f.get()) {
    require_known(ids, f.video_id, kFramesFile);
    for (auto& msg : check(f)) {
      throw DataError(std::string(kFramesFile) + ": video " + f.video_id + " " + msg);
    }
    bundle.frames[f.video_id].push_back(std::move(f));
  }
  for (auto& [id, frames] : bundle.frames) {
    std::stable_sort(frames.begin(), frames.end(), [](const auto& a, const auto& b) {
      return a.frame_index < b.frame_index;
    });
    for (std::size_t i = 1; i < frames.size(); ++i) {
      if (frames[i].frame_index == frames[i - 1].frame_index) {
        throw DataError(std::string(kFramesFile) + ": video " + id + " repeats frame " +
                        std::to_string(frames[i].frame_index));
      }
    }
  }
  std::optional<std::size_t> dim;
  for (auto& v : features_f.get()) {
    require_known(ids, v.video_id, kFeaturesFile);
    for (auto& msg : check(v)) {
      throw DataError(std::string(kFeaturesFile) + ": video " + v.video_id + " " + msg);
    }
    if (!dim) dim = v.values.size();
    if (*dim != v.values.size()) {
      throw DataError(std::string(kFeaturesFile) + ": video " + v.video_id + " has dimension " +
                      std::to_string(v.values.size()) + ", expected " + std::to_string(*dim));
    }
    if (!bundle.features.emplace(v.video_id, v).second) {
      throw DataError(std::string(kFeaturesFile) + ": duplicate video_id " + v.video_id);
    }
  }
  for (auto& t : titles_f.get()) {
    require_known(ids, t.video_id, kTitleTokensFile);
    if (!bundle.title_tokens.emplace(t.video_id, t).second) {
      throw DataError(std::string(kTitleTokensFile) + ": duplicate video_id " + t.video_id);
    }
  }
  for (std::size_t i = 0; i < kDimensions.size(); ++i) {
    const Dimension d = kDimensions[i];
    const std::string file = labels_file(d);
    for (auto& s : labels_f[i].get()) {
      require_known(ids, s.video_id, file.c_str());
      if (!bundle.label_scores.emplace(std::pair{s.video_id, d}, s).second) {
        throw DataError(file + ": duplicate video_id " + s.video_id);
      }
    }
  }
  const auto sim_path = dir / kLabelSimFile;
  if (fs::exists(sim_path)) {
    SimilarityTable table;
    for_each_line(sim_path, [&](std::size_t, const Json& j) {
      const auto source = get_string(field(j, "source"), "source");
      const auto target = get_string(field(j, "target"), "target");
      const double sim = get_number(field(j, "sim"), "sim");
      if (!(sim >= 0.0 && sim <= 1.0)) throw DataError("similarity out of [0,1]");
      table.set(source, target, sim);
    });
    bundle.similarity = std::move(table);
  }
  return bundle;
}

void save_sidecars(const fs::path& dir, const SidecarBundle& bundle) {
  fs::create_directories(dir);
  if (!bundle.frames.empty()) {
    auto out = open_output(dir / kFramesFile);
    for (const auto& [id, frames] : bundle.frames) {
      for (const auto& f : frames) out << canonical_line(encode(f)) << '\n';
    }
  }
  for (Dimension d : kDimensions) {
    std::ostringstream buf;
    for (const auto& [key, set] : bundle.label_scores) {
      if (key.second == d) buf << canonical_line(encode(set)) << '\n';
    }
    if (!buf.str().empty()) open_output(dir / labels_file(d)) << buf.str();
  }
  if (!bundle.features.empty()) {
    auto out = open_output(dir / kFeaturesFile);
    for (const auto& [id, v] : bundle.features) out << canonical_line(encode(v)) << '\n';
  }
  if (!bundle.title_tokens.empty()) {
    auto out = open_output(dir / kTitleTokensFile);
    for (const auto& [id, t] : bundle.title_tokens) out << canonical_line(encode(t)) << '\n';
  }
  if (bundle.similarity) {
    auto out = open_output(dir / kLabelSimFile);
    for (const auto& [key, sim] : bundle.similarity->entries()) {
      out << canonical_line({{"source", key.first}, {"target", key.second}, {"sim", sim}}) << '\n';
    }
  }
}

std::vector<GroundTruth> load_groundtruth(const fs::path& path) {
  std::vector<GroundTruth> out;
  std::set<std::string> ids;
  for_each_line(path, [&](std::size_t, const Json& j) {
    if (j.contains("trailer")) return;
    auto g = decode_groundtruth(j);
    if (!ids.insert(g.video_id).second) throw DataError("duplicate video_id " + g.video_id);
    out.push_back(std::move(g));
  });
  return out;
}

std::vector<CleaningVerdict> load_verdicts(const fs::path& path) {
  std::vector<CleaningVerdict> out;
  for_each_line(path, [&](std::size_t, const Json& j) { out.push_back(decode_verdict(j)); });
  return out;
}

}  // namespace curator::ingest
