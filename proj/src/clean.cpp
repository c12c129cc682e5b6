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

#include "curator/clean.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "curator/digest.hpp"
#include "curator/error.hpp"
#include "curator/ingest.hpp"
#include "curator/parallel.hpp"
#include "curator/text.hpp"

namespace curator::clean {

std::string_view to_string(CharFilter f) {
  return f == CharFilter::keep_han_ascii ? "keep_han_ascii" : "off";
}

std::string_view to_string(PhrasePattern p) {
  switch (p) {
    case PhrasePattern::verb_object: return "verb_object";
    case PhrasePattern::modifier_head: return "modifier_head";
    case PhrasePattern::subject_verb_object: return "subject_verb_object";
    case PhrasePattern::adjacent_verb_noun: return "adjacent_verb_noun";
  }
  return "?";
}

std::string_view to_string(FaceOnlyKind k) {
  return k == FaceOnlyKind::talking_head ? "talking_head" : "face_mosaic";
}

void CleanConfig::validate() const {
  if (!(face_area_ratio > 0.0 && face_area_ratio < 1.0)) {
    throw DataError("face_area_ratio must lie in (0,1)");
  }
  if (!(frame_fraction > 0.0 && frame_fraction < 1.0)) {
    throw DataError("frame_fraction must lie in (0,1)");
  }
  if (mosaic_face_threshold <= 0) throw DataError("mosaic_face_threshold must be positive");
  if (ocr_char_threshold <= 0) throw DataError("ocr_char_threshold must be positive");
  if (!(mid_pct > 0.0 && mid_pct <= high_pct && high_pct < 100.0)) {
    throw DataError("percentiles must satisfy 0 < mid_pct <= high_pct < 100");
  }
  if (min_label_observations == 0) throw DataError("min_label_observations must be positive");
}

Json CleanConfig::to_json() const {
  Json j{{"face_area_ratio", face_area_ratio},
         {"frame_fraction", frame_fraction},
         {"mosaic_face_threshold", mosaic_face_threshold},
         {"ocr_char_threshold", ocr_char_threshold},
         {"high_pct", high_pct},
         {"mid_pct", mid_pct},
         {"min_label_observations", min_label_observations},
         {"char_filter", to_string(char_filter)}};
  j["stopword_path"] = stopword_path ? Json(stopword_path->string()) : Json(nullptr);
  return j;
}

void CleanConfig::apply(const Json& j) {
  if (!j.is_object()) throw DataError("clean config must be an object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "face_area_ratio") face_area_ratio = v.get<double>();
      else if (key == "frame_fraction") frame_fraction = v.get<double>();
      else if (key == "mosaic_face_threshold") mosaic_face_threshold = v.get<std::int64_t>();
      else if (key == "ocr_char_threshold") ocr_char_threshold = v.get<std::int64_t>();
      else if (key == "high_pct") high_pct = v.get<double>();
      else if (key == "mid_pct") mid_pct = v.get<double>();
      else if (key == "min_label_observations") min_label_observations = v.get<std::size_t>();
      else if (key == "threads") threads = v.get<unsigned>();
      else if (key == "stopword_path") {
        if (v.is_null()) stopword_path.reset();
        else stopword_path = v.get<std::string>();
      } else if (key == "char_filter") {
        const auto s = v.get<std::string>();
        if (s == "keep_han_ascii") char_filter = CharFilter::keep_han_ascii;
        else if (s == "off") char_filter = CharFilter::off;
        else throw DataError("unknown char_filter '" + s + "'");
      } else {
        throw DataError("unknown clean option '" + key + "'");
      }
    } catch (const Json::exception&) {
      throw DataError("clean option '" + key + "' has the wrong type");
    }
  }
}

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> kWords{
      "名场面", "打卡挑战", "跟着UP主创作吧",  // slang that says nothing about content
      "觉得", "知道", "建议",                  // mental verbs
  };
  return kWords;
}

std::set<std::string> load_stopwords(const CleanConfig& cfg) {
  auto words = default_stopwords();
  if (!cfg.stopword_path) return words;
  auto in = ingest::open_input(*cfg.stopword_path);
  std::string line;
  while (std::getline(in, line)) {
    auto w = text::trim(line);
    if (!w.empty() && w[0] != '#') words.insert(std::move(w));
  }
  return words;
}

// ---- empty title ---------------------------------------------------------

namespace {

bool has_content_chars(std::string_view surface) {
  for (char32_t cp : text::decode_utf8(surface)) {
    if (text::is_kana(cp) || text::is_hangul(cp)) continue;
    if (text::is_han(cp) || text::is_ascii_alnum(cp)) return true;
  }
  return false;
}

std::optional<PhrasePattern> match_patterns(const std::vector<TitleToken>& toks) {
  auto arc = [&](const TitleToken& t, DepRelation r) {
    return t.head && t.relation && *t.relation == r;
  };
  for (const auto& t : toks) {
    if (arc(t, DepRelation::verb_object)) return PhrasePattern::verb_object;
  }
  for (const auto& t : toks) {
    if (arc(t, DepRelation::modifier_head) && toks[*t.head].pos == PartOfSpeech::noun) {
      return PhrasePattern::modifier_head;
    }
  }
  for (const auto& s : toks) {
    if (!arc(s, DepRelation::subject_verb)) continue;
    for (const auto& o : toks) {
      if (arc(o, DepRelation::verb_object) && *o.head == *s.head) {
        return PhrasePattern::subject_verb_object;
      }
    }
  }
  const bool any_arc = std::any_of(toks.begin(), toks.end(), [](const TitleToken& t) {
    return t.head.has_value();
  });
  if (!any_arc) {
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
      if (toks[i].pos == PartOfSpeech::verb && toks[i + 1].pos == PartOfSpeech::noun) {
        return PhrasePattern::adjacent_verb_noun;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

TitleFilterResult filter_title(const TitleTokenization& tokens,
                               const std::set<std::string>& stopwords, CharFilter char_filter) {
  const auto& toks = tokens.tokens;
  std::vector<bool> drop(toks.size(), false);

  std::size_t longest = 0;
  for (const auto& w : stopwords) longest = std::max(longest, w.size());
  // Stopwords may span several parser tokens, e.g. a slang phrase split in two.
  for (std::size_t i = 0; i < toks.size(); ++i) {
    std::string run;
    for (std::size_t j = i; j < toks.size(); ++j) {
      run += toks[j].surface;
      if (run.size() > longest) break;
      if (stopwords.count(text::trim(run))) {
        std::fill(drop.begin() + static_cast<std::ptrdiff_t>(i),
                  drop.begin() + static_cast<std::ptrdiff_t>(j) + 1, true);
      }
    }
  }
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].pos == PartOfSpeech::mental_verb) drop[i] = true;
    if (char_filter == CharFilter::keep_han_ascii && !has_content_chars(toks[i].surface)) {
      drop[i] = true;
    }
  }

  std::vector<std::optional<std::size_t>> remap(toks.size());
  TitleFilterResult result;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (drop[i]) continue;
    remap[i] = result.surviving_tokens.size();
    result.surviving_tokens.push_back(toks[i]);
  }
  for (auto& t : result.surviving_tokens) {
    if (t.head && *t.head < remap.size() && remap[*t.head]) {
      t.head = *remap[*t.head];
    } else {
      t.head.reset();
      t.relation.reset();
    }
  }
  result.matched = match_patterns(result.surviving_tokens);
  result.is_empty = !result.matched.has_value();
  return result;
}

// ---- face only -----------------------------------------------------------

namespace {

double max_box_ratio(const FrameRecord& frame) {
  const double frame_area = static_cast<double>(frame.frame_w) * static_cast<double>(frame.frame_h);
  double best = 0.0;
  for (const auto& b : frame.face_boxes) {
    best = std::max(best, static_cast<double>(b.area()) / frame_area);
  }
  return best;
}

}  // namespace

FaceFrameClass classify_face_frame(const FrameRecord& frame, const CleanConfig& cfg) {
  return max_box_ratio(frame) > cfg.face_area_ratio ? FaceFrameClass::talking_head
                                                    : FaceFrameClass::normal;
}

FaceVideoResult classify_face_video(const std::vector<FrameRecord>& frames,
                                    const CleanConfig& cfg) {
  FaceVideoResult r;
  if (frames.empty()) {
    r.evidence = {{"status", "unscored"}, {"frames", 0}};
    return r;
  }
  std::size_t talking = 0;
  std::size_t max_faces = 0;
  double max_ratio = 0.0;
  for (const auto& f : frames) {
    if (classify_face_frame(f, cfg) == FaceFrameClass::talking_head) ++talking;
    max_faces = std::max(max_faces, f.face_boxes.size());
    max_ratio = std::max(max_ratio, max_box_ratio(f));
  }
  const double fraction = static_cast<double>(talking) / static_cast<double>(frames.size());
  if (fraction > cfg.frame_fraction) {
    r.kind = FaceOnlyKind::talking_head;
  } else if (static_cast<std::int64_t>(max_faces) > cfg.mosaic_face_threshold) {
    r.kind = FaceOnlyKind::face_mosaic;
  }
  r.is_face_only = r.kind.has_value();
  r.evidence = {{"frames", frames.size()},
                {"talking_head_frames", talking},
                {"talking_head_fraction", fraction},
                {"max_face_area_ratio", max_ratio},
                {"max_faces", max_faces}};
  if (r.kind) r.evidence["kind"] = to_string(*r.kind);
  return r;
}

// ---- text heavy ----------------------------------------------------------

TextHeavyResult classify_text_heavy(const std::vector<FrameRecord>& frames,
                                    const CleanConfig& cfg) {
  TextHeavyResult r;
  if (frames.empty()) {
    r.evidence = {{"status", "unscored"}, {"frames", 0}};
    return r;
  }
  std::size_t heavy = 0;
  std::int64_t max_chars = 0;
  for (const auto& f : frames) {
    if (f.ocr_char_count > cfg.ocr_char_threshold) ++heavy;
    max_chars = std::max(max_chars, f.ocr_char_count);
  }
  r.heavy_frame_fraction = static_cast<double>(heavy) / static_cast<double>(frames.size());
  r.is_text_heavy = r.heavy_frame_fraction > cfg.frame_fraction;
  r.evidence = {{"frames", frames.size()},
                {"heavy_frames", heavy},
                {"heavy_frame_fraction", r.heavy_frame_fraction},
                {"max_ocr_chars", max_chars}};
  return r;
}

// ---- content less --------------------------------------------------------

const Cutoffs& DimensionThresholds::lookup(const std::string& label) const {
  auto it = per_label.find(label);
  return it == per_label.end() ? pooled : it->second;
}

const Cutoffs& PercentileThresholds::lookup(Dimension d, const std::string& label) const {
  auto it = dims.find(d);
  if (it == dims.end()) throw DataError("no thresholds for " + std::string(to_string(d)));
  return it->second.lookup(label);
}

Json PercentileThresholds::to_json() const {
  Json j = Json::object();
  for (const auto& [d, t] : dims) {
    Json per = Json::object();
    for (const auto& [label, c] : t.per_label) per[label] = {{"high", c.high}, {"mid", c.mid}};
    j[std::string(to_string(d))] = {{"pooled", {{"high", t.pooled.high}, {"mid", t.pooled.mid}}},
                                    {"per_label", std::move(per)}};
  }
  return j;
}

std::string PercentileThresholds::digest() const {
  return sha256_hex(ingest::canonical_line(to_json()));
}

double nearest_rank(std::vector<double> sample, double pct) {
  if (sample.empty()) throw DataError("percentile of an empty sample");
  const auto n = sample.size();
  auto rank = static_cast<std::size_t>(std::ceil(pct * static_cast<double>(n) / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(sample.begin(), sample.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   sample.end());
  return sample[rank - 1];
}

PercentileThresholds compute_percentile_thresholds(const std::vector<const LabelScoreSet*>& scores,
                                                   const CleanConfig& cfg) {
  std::map<Dimension, std::map<std::string, std::vector<double>>> by_label;
  std::map<Dimension, std::vector<double>> pooled;
  for (const auto* set : scores) {
    auto& labels = by_label[set->dimension];
    auto& all = pooled[set->dimension];
    for (const auto& [label, score] : set->scores) {
      labels[label].push_back(score);
      all.push_back(score);
    }
  }
  PercentileThresholds thr;
  for (Dimension d : kDimensions) {
    auto it = pooled.find(d);
    if (it == pooled.end() || it->second.empty()) {
      throw DataError("no " + std::string(to_string(d)) + " label scores in corpus");
    }
    auto& dt = thr.dims[d];
    dt.pooled = {nearest_rank(it->second, cfg.high_pct), nearest_rank(it->second, cfg.mid_pct)};
    for (auto& [label, sample] : by_label[d]) {
      if (sample.size() < cfg.min_label_observations) continue;
      dt.per_label[label] = {nearest_rank(sample, cfg.high_pct), nearest_rank(sample, cfg.mid_pct)};
    }
  }
  return thr;
}

PercentileThresholds compute_percentile_thresholds(const SidecarBundle& sidecars,
                                                   const CleanConfig& cfg) {
  std::vector<const LabelScoreSet*> all;
  all.reserve(sidecars.label_scores.size());
  for (const auto& [key, set] : sidecars.label_scores) all.push_back(&set);
  return compute_percentile_thresholds(all, cfg);
}

ContentlessResult filter_contentless(const std::map<Dimension, const LabelScoreSet*>& video_scores,
                                     const PercentileThresholds& thr) {
  ContentlessResult r;
  for (const auto& [d, set] : video_scores) {
    if (set == nullptr) continue;
    std::vector<std::string> high;
    std::vector<std::string> mid;
    for (const auto& [label, score] : set->scores) {
      const auto& c = thr.lookup(d, label);
      if (score >= c.high) high.push_back(label);
      if (score >= c.mid) mid.push_back(label);
    }
    if (!high.empty()) {
      r.emitted[d] = std::move(high);
    } else if (mid.size() >= 2) {
      r.emitted[d] = std::move(mid);
    }
  }
  r.is_contentless = r.emitted.empty();
  return r;
}

// ---- pipeline ------------------------------------------------------------

Json CleanSummary::to_json() const {
  Json rem = Json::object();
  for (RemovalCategory c : kRemovalCategories) {
    auto it = removed.find(c);
    rem[std::string(to_string(c))] = it == removed.end() ? 0 : it->second;
  }
  return {{"input", input},
          {"kept", kept},
          {"removed", std::move(rem)},
          {"config", config},
          {"thresholds_digest", thresholds_digest}};
}

namespace {

CleaningVerdict judge(const VideoRecord& video, const SidecarBundle& sidecars,
                      const CleanConfig& cfg, const std::set<std::string>& stopwords,
                      const PercentileThresholds& thr) {
  CleaningVerdict v;
  v.video_id = video.id;
  auto remove = [&](RemovalCategory c, const char* stage, Json evidence) {
    v.category = c;
    v.evidence = Json::object({{stage, std::move(evidence)}});
    return v;
  };

  auto tt = sidecars.title_tokens.find(video.id);
  if (tt == sidecars.title_tokens.end()) {
    return remove(RemovalCategory::empty_title, "empty_title",
                  {{"status", "missing_title_tokens"}});
  }
  const auto title = filter_title(tt->second, stopwords, cfg.char_filter);
  Json title_ev{{"tokens", tt->second.tokens.size()},
                {"surviving_tokens", title.surviving_tokens.size()}};
  if (title.matched) title_ev["pattern"] = to_string(*title.matched);
  if (title.is_empty) return remove(RemovalCategory::empty_title, "empty_title", title_ev);
  v.evidence["empty_title"] = std::move(title_ev);

  static const std::vector<FrameRecord> kNoFrames;
  auto fr = sidecars.frames.find(video.id);
  const auto& frames = fr == sidecars.frames.end() ? kNoFrames : fr->second;

  auto face = classify_face_video(frames, cfg);
  if (face.is_face_only) return remove(RemovalCategory::face_only, "face_only", face.evidence);
  v.evidence["face_only"] = std::move(face.evidence);

  auto textual = classify_text_heavy(frames, cfg);
  if (textual.is_text_heavy) {
    return remove(RemovalCategory::text_heavy, "text_heavy", textual.evidence);
  }
  v.evidence["text_heavy"] = std::move(textual.evidence);

  std::map<Dimension, const LabelScoreSet*> scores;
  for (Dimension d : kDimensions) {
    auto it = sidecars.label_scores.find({video.id, d});
    if (it != sidecars.label_scores.end()) scores[d] = &it->second;
  }
  const auto content = filter_contentless(scores, thr);
  Json emitted = Json::object();
  for (const auto& [d, labels] : content.emitted) emitted[std::string(to_string(d))] = labels;
  Json content_ev{{"emitted_labels", std::move(emitted)}, {"scored_dimensions", scores.size()}};
  if (content.is_contentless) {
    return remove(RemovalCategory::content_less, "content_less", std::move(content_ev));
  }
  v.evidence["content_less"] = std::move(content_ev);
  return v;
}

}  // namespace

PipelineResult run_pipeline(const std::vector<VideoRecord>& corpus, const SidecarBundle& sidecars,
                            const CleanConfig& cfg) {
  cfg.validate();
  const auto stopwords = load_stopwords(cfg);

  PipelineResult result;
  result.thresholds = compute_percentile_thresholds(sidecars, cfg);

  result.verdicts.resize(corpus.size());
  parallel_for(corpus.size(), cfg.threads, [&](std::size_t i) {
    result.verdicts[i] = judge(corpus[i], sidecars, cfg, stopwords, result.thresholds);
  });

  auto& s = result.summary;
  s.input = corpus.size();
  for (RemovalCategory c : kRemovalCategories) s.removed[c] = 0;
  for (const auto& v : result.verdicts) {
    if (v.kept()) ++s.kept;
    else ++s.removed[*v.category];
  }
  s.config = cfg.to_json();
  s.thresholds_digest = result.thresholds.digest();
  return result;
}

}  // namespace curator::clean
