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

// Four-stage automated cleaning: empty-title, face-only, text-heavy and
// content-less removal, applied in that order.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "curator/model.hpp"

namespace curator::clean {

enum class CharFilter { keep_han_ascii, off };

struct CleanConfig {
  double face_area_ratio = 0.5;
  double frame_fraction = 0.75;
  std::int64_t mosaic_face_threshold = 8;
  std::int64_t ocr_char_threshold = 50;
  double high_pct = 75.0;
  double mid_pct = 50.0;
  // Labels need this many corpus observations to get their own cutoffs.
  std::size_t min_label_observations = 20;
  std::optional<std::filesystem::path> stopword_path;
  CharFilter char_filter = CharFilter::keep_han_ascii;
  unsigned threads = 0;  // 0 = hardware concurrency

  // Throws DataError naming the first out-of-range field.
  void validate() const;
  Json to_json() const;
  // Overlays the keys present in j onto this config.
  void apply(const Json& j);
};

// Terms that say nothing about content, plus the mental verbs.
const std::set<std::string>& default_stopwords();
// Default list plus one term per nonblank line of cfg.stopword_path.
std::set<std::string> load_stopwords(const CleanConfig& cfg);

// ---- empty title ---------------------------------------------------------

enum class PhrasePattern { verb_object, modifier_head, subject_verb_object, adjacent_verb_noun };

struct TitleFilterResult {
  bool is_empty = true;
  std::optional<PhrasePattern> matched;
  // Survivors with heads re-indexed; arcs to dropped tokens are cut.
  std::vector<TitleToken> surviving_tokens;
};

TitleFilterResult filter_title(const TitleTokenization& tokens,
                               const std::set<std::string>& stopwords, CharFilter char_filter);

// ---- face only -----------------------------------------------------------

enum class FaceFrameClass { talking_head, normal };
enum class FaceOnlyKind { talking_head, face_mosaic };

FaceFrameClass classify_face_frame(const FrameRecord& frame, const CleanConfig& cfg);

struct FaceVideoResult {
  bool is_face_only = false;
  std::optional<FaceOnlyKind> kind;
  Json evidence;
};

FaceVideoResult classify_face_video(const std::vector<FrameRecord>& frames,
                                    const CleanConfig& cfg);

// ---- text heavy ----------------------------------------------------------

struct TextHeavyResult {
  bool is_text_heavy = false;
  double heavy_frame_fraction = 0.0;
  Json evidence;
};

TextHeavyResult classify_text_heavy(const std::vector<FrameRecord>& frames,
                                    const CleanConfig& cfg);

// ---- content less --------------------------------------------------------

struct Cutoffs {
  double high = 0.0;
  double mid = 0.0;
  bool operator==(const Cutoffs&) const = default;
};

struct DimensionThresholds {
  Cutoffs pooled;
  std::map<std::string, Cutoffs> per_label;

  const Cutoffs& lookup(const std::string& label) const;
  bool operator==(const DimensionThresholds&) const = default;
};

struct PercentileThresholds {
  std::map<Dimension, DimensionThresholds> dims;

  const Cutoffs& lookup(Dimension d, const std::string& label) const;
  Json to_json() const;
  std::string digest() const;  // sha256 hex of the canonical JSON form
};

// Nearest-rank percentile: the value at 1-based index ceil(pct/100 * n) of
// the ascending sorted sample. Throws DataError on an empty sample.
double nearest_rank(std::vector<double> sample, double pct);

// Throws DataError when a dimension has no scores at all.
PercentileThresholds compute_percentile_thresholds(const std::vector<const LabelScoreSet*>& scores,
                                                   const CleanConfig& cfg);
PercentileThresholds compute_percentile_thresholds(const SidecarBundle& sidecars,
                                                   const CleanConfig& cfg);

struct ContentlessResult {
  bool is_contentless = true;
  std::map<Dimension, std::vector<std::string>> emitted;
};

ContentlessResult filter_contentless(const std::map<Dimension, const LabelScoreSet*>& video_scores,
                                     const PercentileThresholds& thr);

// ---- pipeline ------------------------------------------------------------

struct CleanSummary {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::map<RemovalCategory, std::size_t> removed;
  Json config;
  std::string thresholds_digest;

  Json to_json() const;
};

struct PipelineResult {
  std::vector<CleaningVerdict> verdicts;  // same order as the corpus
  CleanSummary summary;
  PercentileThresholds thresholds;
};

// Phase 1 scans every label score into percentile cutoffs; phase 2 judges
// videos in parallel. A video leaves at the first failing stage.
PipelineResult run_pipeline(const std::vector<VideoRecord>& corpus, const SidecarBundle& sidecars,
                            const CleanConfig& cfg);

std::string_view to_string(CharFilter f);
std::string_view to_string(PhrasePattern p);
std::string_view to_string(FaceOnlyKind k);

}  // namespace curator::clean
