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

// Shared domain types for the curation engine. No I/O lives here; file
// forms are in ingest.hpp.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace curator {

using Json = nlohmann::json;

enum class Dimension { object, action, scene };
inline constexpr std::array<Dimension, 3> kDimensions{Dimension::object, Dimension::action,
                                                      Dimension::scene};

// Annotation aspects. user_tag only exists on ground truth.
enum class Aspect { object, action, scene, user_tag };
inline constexpr std::array<Aspect, 4> kAspects{Aspect::object, Aspect::action, Aspect::scene,
                                                Aspect::user_tag};

enum class Language { zh, en };

enum class PartOfSpeech { verb, noun, adjective, mental_verb, other };
enum class DepRelation { verb_object, modifier_head, subject_verb, other };

enum class RemovalCategory { empty_title, face_only, text_heavy, content_less };
inline constexpr std::array<RemovalCategory, 4> kRemovalCategories{
    RemovalCategory::empty_title, RemovalCategory::face_only, RemovalCategory::text_heavy,
    RemovalCategory::content_less};

std::string_view to_string(Dimension d);
std::string_view to_string(Aspect a);
std::string_view to_string(Language l);
std::string_view to_string(PartOfSpeech p);
std::string_view to_string(DepRelation r);
std::string_view to_string(RemovalCategory c);

// Parsers throw DataError on unknown names.
Dimension parse_dimension(std::string_view s);
Aspect parse_aspect(std::string_view s);
Language parse_language(std::string_view s);
PartOfSpeech parse_pos(std::string_view s);
DepRelation parse_relation(std::string_view s);
RemovalCategory parse_category(std::string_view s);

struct VideoRecord {
  std::string id;
  double duration_s = 0.0;
  std::uint64_t file_size_bytes = 0;
  std::string title;
  std::vector<std::string> user_tags;
  std::optional<std::string> description;
  std::optional<std::string> channel;
  std::optional<std::int64_t> upload_ts;
  std::optional<std::string> auto_caption;

  bool operator==(const VideoRecord&) const = default;
};

struct FaceBox {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t w = 0;
  std::int64_t h = 0;

  std::int64_t area() const { return w * h; }
  bool operator==(const FaceBox&) const = default;
};

struct FrameRecord {
  std::string video_id;
  std::int64_t frame_index = 0;
  std::int64_t frame_w = 0;
  std::int64_t frame_h = 0;
  std::vector<FaceBox> face_boxes;
  std::int64_t ocr_char_count = 0;

  bool operator==(const FrameRecord&) const = default;
};

struct LabelScoreSet {
  std::string video_id;
  Dimension dimension = Dimension::object;
  std::map<std::string, double> scores;

  bool operator==(const LabelScoreSet&) const = default;
};

struct FeatureVector {
  std::string video_id;
  std::vector<double> values;

  bool operator==(const FeatureVector&) const = default;
};

struct TitleToken {
  std::string surface;
  PartOfSpeech pos = PartOfSpeech::other;
  std::optional<std::size_t> head;
  std::optional<DepRelation> relation;

  bool operator==(const TitleToken&) const = default;
};

struct TitleTokenization {
  std::string video_id;
  std::vector<TitleToken> tokens;

  bool operator==(const TitleTokenization&) const = default;
};

// Precomputed label-to-tag similarities in [0,1], keyed (source label, target tag).
class SimilarityTable {
 public:
  void set(const std::string& source, const std::string& target, double sim);
  std::optional<double> get(const std::string& source, const std::string& target) const;
  bool empty() const { return table_.empty(); }
  std::size_t size() const { return table_.size(); }
  const std::map<std::pair<std::string, std::string>, double>& entries() const { return table_; }

  bool operator==(const SimilarityTable&) const = default;

 private:
  std::map<std::pair<std::string, std::string>, double> table_;
};

// Everything upstream models produced for a corpus.
struct SidecarBundle {
  std::map<std::string, std::vector<FrameRecord>> frames;
  std::map<std::pair<std::string, Dimension>, LabelScoreSet> label_scores;
  std::map<std::string, FeatureVector> features;
  std::map<std::string, TitleTokenization> title_tokens;
  std::optional<SimilarityTable> similarity;

  bool operator==(const SidecarBundle&) const = default;
};

struct CleaningVerdict {
  std::string video_id;
  std::optional<RemovalCategory> category;
  // Measurements keyed by filter name, e.g. {"face_only": {"max_faces": 3, ...}}.
  Json evidence = Json::object();

  bool kept() const { return !category.has_value(); }
};

using LabelsByLanguage = std::map<Language, std::vector<std::string>>;

struct GroundTruth {
  std::string video_id;
  bool title_relevant = false;
  std::map<Language, std::string> caption;
  std::map<Aspect, LabelsByLanguage> labels;

  const std::vector<std::string>& labels_for(Aspect a, Language l) const;
  bool operator==(const GroundTruth&) const = default;
};

struct RankedItem {
  std::string item;
  double score = 0.0;

  bool operator==(const RankedItem&) const = default;
};

// A ranking in canonical order: descending score, ties by ascending item.
class RankedPrediction {
 public:
  RankedPrediction() = default;
  // Sorts into canonical order. Throws DataError on duplicate items or NaN scores.
  RankedPrediction(std::string subject_id, std::vector<RankedItem> items);

  const std::string& subject_id() const { return subject_id_; }
  const std::vector<RankedItem>& ranking() const { return ranking_; }
  std::size_t size() const { return ranking_.size(); }

 private:
  std::string subject_id_;
  std::vector<RankedItem> ranking_;
};

// k frames, each holding p patch tokens plus the classification token at
// index 0, every token d wide. Stored frame-major, then token, then channel.
class TokenGrid {
 public:
  TokenGrid(std::size_t k, std::size_t p, std::size_t d);
  TokenGrid(std::size_t k, std::size_t p, std::size_t d, std::vector<double> values);

  std::size_t frames() const { return k_; }
  std::size_t patches() const { return p_; }
  std::size_t width() const { return d_; }
  std::size_t tokens_per_frame() const { return p_ + 1; }

  const double* token(std::size_t frame, std::size_t index) const;
  double* token(std::size_t frame, std::size_t index);
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t k_, p_, d_;
  std::vector<double> values_;
};

// Invariant checks. Each returns human-readable violations; empty means valid.
std::vector<std::string> check(const VideoRecord& r);
std::vector<std::string> check(const FrameRecord& f);
std::vector<std::string> check(const LabelScoreSet& s);
std::vector<std::string> check(const FeatureVector& v);
std::vector<std::string> check(const TitleTokenization& t);
std::vector<std::string> check(const GroundTruth& g);

enum class Severity { error, notice };

struct ValidationIssue {
  Severity severity = Severity::error;
  std::string video_id;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const;  // no error-severity issues
  std::size_t count(Severity s) const;
  Json to_json() const;
};

// Lists duplicate ids, invariant violations, and sidecars missing for
// downstream stages. Never throws for data problems.
ValidationReport validate_corpus(const std::vector<VideoRecord>& records,
                                 const SidecarBundle& sidecars);

}  // namespace curator
