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

#include "curator/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "curator/error.hpp"

namespace curator {

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view s, const std::array<std::pair<std::string_view, Enum>, N>& table,
                std::string_view what) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  throw DataError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

constexpr std::array<std::pair<std::string_view, Dimension>, 3> kDimensionNames{{
    {"object", Dimension::object}, {"action", Dimension::action}, {"scene", Dimension::scene}}};
constexpr std::array<std::pair<std::string_view, Aspect>, 4> kAspectNames{{
    {"object", Aspect::object}, {"action", Aspect::action}, {"scene", Aspect::scene},
    {"user_tag", Aspect::user_tag}}};
constexpr std::array<std::pair<std::string_view, Language>, 2> kLanguageNames{{
    {"zh", Language::zh}, {"en", Language::en}}};
constexpr std::array<std::pair<std::string_view, PartOfSpeech>, 5> kPosNames{{
    {"verb", PartOfSpeech::verb}, {"noun", PartOfSpeech::noun},
    {"adjective", PartOfSpeech::adjective}, {"mental_verb", PartOfSpeech::mental_verb},
    {"other", PartOfSpeech::other}}};
constexpr std::array<std::pair<std::string_view, DepRelation>, 4> kRelationNames{{
    {"verb_object", DepRelation::verb_object}, {"modifier_head", DepRelation::modifier_head},
    {"subject_verb", DepRelation::subject_verb}, {"other", DepRelation::other}}};
constexpr std::array<std::pair<std::string_view, RemovalCategory>, 4> kCategoryNames{{
    {"empty_title", RemovalCategory::empty_title}, {"face_only", RemovalCategory::face_only},
    {"text_heavy", RemovalCategory::text_heavy}, {"content_less", RemovalCategory::content_less}}};

template <typename Enum, std::size_t N>
std::string_view name_of(Enum e, const std::array<std::pair<std::string_view, Enum>, N>& table) {
  for (const auto& [name, value] : table) {
    if (value == e) return name;
  }
  return "?";
}

}  // namespace

std::string_view to_string(Dimension d) { return name_of(d, kDimensionNames); }
std::string_view to_string(Aspect a) { return name_of(a, kAspectNames); }
std::string_view to_string(Language l) { return name_of(l, kLanguageNames); }
std::string_view to_string(PartOfSpeech p) { return name_of(p, kPosNames); }
std::string_view to_string(DepRelation r) { return name_of(r, kRelationNames); }
std::string_view to_string(RemovalCategory c) { return name_of(c, kCategoryNames); }

Dimension parse_dimension(std::string_view s) { return parse_enum(s, kDimensionNames, "dimension"); }
Aspect parse_aspect(std::string_view s) { return parse_enum(s, kAspectNames, "aspect"); }
Language parse_language(std::string_view s) { return parse_enum(s, kLanguageNames, "language"); }
PartOfSpeech parse_pos(std::string_view s) { return parse_enum(s, kPosNames, "pos"); }
DepRelation parse_relation(std::string_view s) { return parse_enum(s, kRelationNames, "relation"); }
RemovalCategory parse_category(std::string_view s) {
  return parse_enum(s, kCategoryNames, "category");
}

void SimilarityTable::set(const std::string& source, const std::string& target, double sim) {
  if (!(sim >= 0.0 && sim <= 1.0)) {
    throw DataError("similarity out of [0,1]: " + source + " -> " + target);
  }
  table_[{source, target}] = sim;
}

std::optional<double> SimilarityTable::get(const std::string& source,
                                           const std::string& target) const {
  auto it = table_.find({source, target});
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>& GroundTruth::labels_for(Aspect a, Language l) const {
  static const std::vector<std::string> kEmpty;
  auto it = labels.find(a);
  if (it == labels.end()) return kEmpty;
  auto jt = it->second.find(l);
  return jt == it->second.end() ? kEmpty : jt->second;
}

RankedPrediction::RankedPrediction(std::string subject_id, std::vector<RankedItem> items)
    : subject_id_(std::move(subject_id)), ranking_(std::move(items)) {
  for (const auto& it : ranking_) {
    if (std::isnan(it.score)) throw DataError("NaN score for '" + it.item + "' in " + subject_id_);
  }
  std::sort(ranking_.begin(), ranking_.end(), [](const RankedItem& a, const RankedItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.item < b.item;
  });
  std::set<std::string_view> seen;
  for (const auto& it : ranking_) {
    if (!seen.insert(it.item).second) {
      throw DataError("duplicate item '" + it.item + "' in ranking for " + subject_id_);
    }
  }
}

TokenGrid::TokenGrid(std::size_t k, std::size_t p, std::size_t d)
    : TokenGrid(k, p, d, std::vector<double>(k * (p + 1) * d, 0.0)) {}

TokenGrid::TokenGrid(std::size_t k, std::size_t p, std::size_t d, std::vector<double> values)
    : k_(k), p_(p), d_(d), values_(std::move(values)) {
  if (k_ == 0 || p_ == 0 || d_ == 0) throw DataError("token grid needs k, p, d >= 1");
  if (values_.size() != k_ * (p_ + 1) * d_) {
    throw DataError("token grid holds " + std::to_string(values_.size()) + " values, expected " +
                    std::to_string(k_ * (p_ + 1) * d_));
  }
}

const double* TokenGrid::token(std::size_t frame, std::size_t index) const {
  return values_.data() + (frame * (p_ + 1) + index) * d_;
}

double* TokenGrid::token(std::size_t frame, std::size_t index) {
  return values_.data() + (frame * (p_ + 1) + index) * d_;
}

std::vector<std::string> check(const VideoRecord& r) {
  std::vector<std::string> out;
  if (r.id.empty()) out.emplace_back("empty id");
  if (!(r.duration_s > 0.0)) out.emplace_back("nonpositive duration");
  return out;
}

std::vector<std::string> check(const FrameRecord& f) {
  std::vector<std::string> out;
  const std::string where = "frame " + std::to_string(f.frame_index);
  if (f.frame_index < 0) out.push_back(where + ": negative frame index");
  if (f.frame_w <= 0 || f.frame_h <= 0) out.push_back(where + ": nonpositive frame size");
  if (f.ocr_char_count < 0) out.push_back(where + ": negative ocr_char_count");
  for (const auto& b : f.face_boxes) {
    if (b.x < 0 || b.y < 0 || b.w < 0 || b.h < 0 || b.x + b.w > f.frame_w ||
        b.y + b.h > f.frame_h) {
      out.push_back(where + ": box [" + std::to_string(b.x) + "," + std::to_string(b.y) + "," +
                    std::to_string(b.w) + "," + std::to_string(b.h) + "] outside " +
                    std::to_string(f.frame_w) + "x" + std::to_string(f.frame_h) + " frame");
    }
  }
  return out;
}

std::vector<std::string> check(const LabelScoreSet& s) {
  std::vector<std::string> out;
  for (const auto& [label, score] : s.scores) {
    if (label.empty()) out.emplace_back("empty label");
    if (!(score >= 0.0) || std::isinf(score)) {
      out.push_back("score for '" + label + "' is not a nonnegative finite number");
    }
  }
  return out;
}

std::vector<std::string> check(const FeatureVector& v) {
  std::vector<std::string> out;
  if (v.values.empty()) out.emplace_back("empty feature vector");
  bool all_zero = true;
  for (double x : v.values) {
    if (!std::isfinite(x)) {
      out.emplace_back("non-finite feature value");
      break;
    }
    if (x != 0.0) all_zero = false;
  }
  if (all_zero && !v.values.empty()) out.emplace_back("all-zero feature vector");
  return out;
}

std::vector<std::string> check(const TitleTokenization& t) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < t.tokens.size(); ++i) {
    const auto& tok = t.tokens[i];
    if (!tok.head) continue;
    if (*tok.head >= t.tokens.size()) {
      out.push_back("token " + std::to_string(i) + ": head index out of range");
    } else if (*tok.head == i) {
      out.push_back("token " + std::to_string(i) + ": token is its own head");
    }
  }
  return out;
}

std::vector<std::string> check(const GroundTruth& g) {
  std::vector<std::string> out;
  if (g.video_id.empty()) out.emplace_back("empty video_id");
  for (Aspect a : kAspects) {
    if (g.labels_for(a, Language::zh).empty()) {
      out.push_back("no " + std::string(to_string(a)) + " label");
    }
  }
  return out;
}

bool ValidationReport::ok() const { return count(Severity::error) == 0; }

std::size_t ValidationReport::count(Severity s) const {
  return static_cast<std::size_t>(std::count_if(
      issues.begin(), issues.end(), [s](const ValidationIssue& i) { return i.severity == s; }));
}

Json ValidationReport::to_json() const {
  Json arr = Json::array();
  for (const auto& i : issues) {
    arr.push_back({{"severity", i.severity == Severity::error ? "error" : "notice"},
                   {"video_id", i.video_id},
                   {"message", i.message}});
  }
  return {{"errors", count(Severity::error)}, {"notices", count(Severity::notice)},
          {"issues", std::move(arr)}};
}

ValidationReport validate_corpus(const std::vector<VideoRecord>& records,
                                 const SidecarBundle& sidecars) {
  ValidationReport report;
  auto error = [&](const std::string& id, std::string msg) {
    report.issues.push_back({Severity::error, id, std::move(msg)});
  };
  auto notice = [&](const std::string& id, std::string msg) {
    report.issues.push_back({Severity::notice, id, std::move(msg)});
  };

  std::set<std::string> ids;
  for (const auto& r : records) {
    if (!ids.insert(r.id).second) error(r.id, "duplicate id");
    for (auto& msg : check(r)) error(r.id, std::move(msg));
  }

  auto known = [&](const std::string& id, std::string_view what) {
    if (ids.count(id)) return true;
    error(id, std::string(what) + " sidecar references unknown video");
    return false;
  };

  for (const auto& [id, frames] : sidecars.frames) {
    known(id, "frames");
    for (std::size_t i = 0; i < frames.size(); ++i) {
      for (auto& msg : check(frames[i])) error(id, std::move(msg));
      if (i > 0 && frames[i].frame_index <= frames[i - 1].frame_index) {
        error(id, "frame_index not strictly increasing at frame " +
                      std::to_string(frames[i].frame_index));
      }
    }
  }
  for (const auto& [key, set] : sidecars.label_scores) {
    known(key.first, "labels");
    for (auto& msg : check(set)) error(key.first, std::string(to_string(key.second)) + ": " + msg);
  }
  std::optional<std::size_t> dim;
  for (const auto& [id, fv] : sidecars.features) {
    known(id, "features");
    for (auto& msg : check(fv)) error(id, std::move(msg));
    if (!dim) dim = fv.values.size();
    if (fv.values.size() != *dim) {
      error(id, "feature dimension " + std::to_string(fv.values.size()) + " differs from " +
                    std::to_string(*dim));
    }
  }
  for (const auto& [id, tt] : sidecars.title_tokens) {
    known(id, "title_tokens");
    for (auto& msg : check(tt)) error(id, std::move(msg));
  }

  for (const auto& r : records) {
    if (r.title.empty()) notice(r.id, "empty title (treated as missing)");
    if (!sidecars.title_tokens.count(r.id)) {
      notice(r.id, "empty-title stage will skip (treated as missing-title removal)");
    }
    if (!sidecars.frames.count(r.id)) {
      notice(r.id, "no frames: face-only and text-heavy stages unscored");
    }
    for (Dimension d : kDimensions) {
      if (!sidecars.label_scores.count({r.id, d})) {
        notice(r.id, "no " + std::string(to_string(d)) + " label scores");
      }
    }
    if (!sidecars.features.count(r.id)) notice(r.id, "no feature vector: cannot be preselected");
  }
  return report;
}

}  // namespace curator
