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

#include "curator/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "curator/error.hpp"
#include "curator/text.hpp"

namespace curator::metrics {

// ---- tagging -------------------------------------------------------------

double average_precision(const RankedPrediction& pred, const std::set<std::string>& relevant) {
  if (relevant.empty()) throw DataError("average precision needs at least one relevant label");
  std::size_t hits = 0;
  double sum = 0.0;
  const auto& ranking = pred.ranking();
  for (std::size_t r = 0; r < ranking.size(); ++r) {
    if (!relevant.count(ranking[r].item)) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(r + 1);
  }
  return sum / static_cast<double>(relevant.size());
}

double mean_ap(const std::vector<TaggingInstance>& per_video) {
  if (per_video.empty()) throw DataError("mean AP over an empty list");
  double sum = 0.0;
  for (const auto& inst : per_video) sum += average_precision(inst.pred, inst.relevant);
  return sum / static_cast<double>(per_video.size());
}

TransferResult transfer_scores(const std::string& subject_id,
                               const std::vector<RankedItem>& top_preds,
                               const std::vector<std::string>& target_vocab,
                               const SimilarityTable& sim) {
  TransferResult r;
  std::vector<RankedItem> scored;
  scored.reserve(target_vocab.size());
  for (const auto& tag : target_vocab) {
    double s = 0.0;
    for (const auto& p : top_preds) {
      if (auto w = sim.get(p.item, tag)) {
        s += p.score * *w;
      } else {
        ++r.missing_pairs;
      }
    }
    scored.push_back({tag, s});
  }
  r.ranking = RankedPrediction(subject_id, std::move(scored));
  return r;
}

// ---- retrieval -----------------------------------------------------------

void SimMatrix::validate() const {
  if (rows.size() != query_ids.size()) {
    throw DataError("similarity matrix has " + std::to_string(rows.size()) + " rows for " +
                    std::to_string(query_ids.size()) + " queries");
  }
  for (std::size_t q = 0; q < rows.size(); ++q) {
    if (rows[q].size() != video_ids.size()) {
      throw DataError("row for query " + query_ids[q] + " has " + std::to_string(rows[q].size()) +
                      " columns, expected " + std::to_string(video_ids.size()));
    }
  }
  std::set<std::string> seen(query_ids.begin(), query_ids.end());
  if (seen.size() != query_ids.size()) throw DataError("duplicate query id in similarity matrix");
  seen = std::set<std::string>(video_ids.begin(), video_ids.end());
  if (seen.size() != video_ids.size()) throw DataError("duplicate video id in similarity matrix");
}

std::size_t rank_of(const std::vector<double>& row, const std::vector<std::string>& video_ids,
                    std::size_t truth) {
  const double t = row[truth];
  std::size_t ahead = 0;
  for (std::size_t v = 0; v < row.size(); ++v) {
    if (v == truth) continue;
    if (row[v] > t || (row[v] == t && video_ids[v] < video_ids[truth])) ++ahead;
  }
  return ahead + 1;
}

RecallReport recall_at(const SimMatrix& m, const std::map<std::string, std::string>& truth,
                       const std::vector<int>& ns) {
  m.validate();
  std::map<std::string, std::size_t> qpos, vpos;
  for (std::size_t i = 0; i < m.query_ids.size(); ++i) qpos[m.query_ids[i]] = i;
  for (std::size_t i = 0; i < m.video_ids.size(); ++i) vpos[m.video_ids[i]] = i;

  RecallReport report;
  std::map<int, std::size_t> hits;
  for (int n : ns) hits[n] = 0;
  for (const auto& [query, video] : truth) {
    auto q = qpos.find(query);
    if (q == qpos.end()) throw DataError("no similarity row for query " + query);
    auto v = vpos.find(video);
    if (v == vpos.end()) throw DataError("truth video " + video + " is not a matrix column");
    const auto rank = rank_of(m.rows[q->second], m.video_ids, v->second);
    for (int n : ns) {
      if (rank <= static_cast<std::size_t>(n)) ++hits[n];
    }
  }
  report.queries = truth.size();
  for (int n : ns) {
    const double r = truth.empty() ? 0.0
                                   : 100.0 * static_cast<double>(hits[n]) /
                                         static_cast<double>(truth.size());
    report.recall[n] = r;
    report.sum += r;
  }
  return report;
}

// ---- captioning ----------------------------------------------------------

SegmentedCaption SegmentedCaption::from_raw(std::string raw) {
  auto tokens = text::segment(raw);
  return {std::move(raw), std::move(tokens)};
}

SegmentedCaption SegmentedCaption::from_tokens(std::string raw, std::vector<std::string> tokens) {
  if (tokens.empty() && !text::trim(raw).empty()) {
    throw DataError("segmented caption has no tokens for nonempty text");
  }
  return {std::move(raw), std::move(tokens)};
}

namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts ngrams(const std::vector<std::string>& toks, std::size_t n) {
  NgramCounts out;
  if (toks.size() < n) return out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    ++out[std::vector<std::string>(toks.begin() + static_cast<std::ptrdiff_t>(i),
                                   toks.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return out;
}

void check_pairs(std::size_t hyps, std::size_t refs) {
  if (hyps != refs) {
    throw DataError("caption metric needs one reference per hypothesis (" + std::to_string(hyps) +
                    " vs " + std::to_string(refs) + ")");
  }
  if (hyps == 0) throw DataError("caption metric over an empty corpus");
}

}  // namespace

double bleu4(const std::vector<SegmentedCaption>& hyps, const std::vector<SegmentedCaption>& refs,
             const BleuOptions& opt) {
  check_pairs(hyps.size(), refs.size());
  std::array<double, 4> matched{};
  std::array<double, 4> total{};
  double hyp_len = 0.0;
  double ref_len = 0.0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const auto& h = hyps[i].tokens;
    const auto& r = refs[i].tokens;
    if (h.empty() && r.empty()) {
      throw DataError("BLEU: item " + std::to_string(i) + " has empty hypothesis and reference");
    }
    hyp_len += static_cast<double>(h.size());
    ref_len += static_cast<double>(r.size());
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto hc = ngrams(h, n);
      const auto rc = ngrams(r, n);
      for (const auto& [g, c] : hc) {
        auto it = rc.find(g);
        if (it != rc.end()) matched[n - 1] += static_cast<double>(std::min(c, it->second));
        total[n - 1] += static_cast<double>(c);
      }
    }
  }
  if (hyp_len == 0.0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < 4; ++n) {
    double num = matched[n];
    double den = total[n];
    if (opt.add_one_smoothing && n > 0) {
      num += 1.0;
      den += 1.0;
    }
    if (num == 0.0 || den == 0.0) return 0.0;
    log_sum += 0.25 * std::log(num / den);
  }
  const double bp = hyp_len < ref_len ? std::exp(1.0 - ref_len / hyp_len) : 1.0;
  return bp * std::exp(log_sum);
}

namespace {

// Depth-first search over hypothesis positions. Each position either takes
// an unused reference position holding the same word or stays unaligned,
// the latter only while that word still has spare hypothesis occurrences.
// That restriction makes every complete path a maximum matching, so the
// search only has to minimize chunks.
class ChunkMinimizer {
 public:
  ChunkMinimizer(const std::vector<std::string>& hyp, const std::vector<std::string>& ref)
      : hyp_(hyp), ref_(ref) {
    std::unordered_map<std::string, std::size_t> ids;
    auto id_of = [&](const std::string& w) {
      return ids.emplace(w, ids.size()).first->second;
    };
    for (const auto& w : hyp_) hyp_word_.push_back(id_of(w));
    for (const auto& w : ref_) ref_word_.push_back(id_of(w));
    const std::size_t words = ids.size();
    std::vector<std::size_t> hyp_count(words, 0), ref_count(words, 0);
    for (auto w : hyp_word_) ++hyp_count[w];
    for (auto w : ref_word_) ++ref_count[w];
    spare_.resize(words);
    positions_.resize(words);
    for (std::size_t w = 0; w < words; ++w) {
      spare_[w] = hyp_count[w] - std::min(hyp_count[w], ref_count[w]);
      matches_ += std::min(hyp_count[w], ref_count[w]);
    }
    for (std::size_t j = 0; j < ref_word_.size(); ++j) positions_[ref_word_[j]].push_back(j);
    used_.assign(ref_.size(), false);
    skipped_.assign(words, 0);
  }

  Alignment solve() {
    if (matches_ == 0) return {0, 0};
    return {matches_, best(0, kNone)};
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::string key(std::size_t i, std::size_t prev) const {
    std::string k;
    k.reserve(ref_.size() + 16);
    k.append(reinterpret_cast<const char*>(&i), sizeof i);
    k.append(reinterpret_cast<const char*>(&prev), sizeof prev);
    for (bool u : used_) k.push_back(u ? '1' : '0');
    return k;
  }

  std::size_t best(std::size_t i, std::size_t prev) {
    if (i == hyp_.size()) return 0;
    const auto k = key(i, prev);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;

    const std::size_t w = hyp_word_[i];
    std::size_t result = kNone;
    for (std::size_t j : positions_[w]) {
      if (used_[j]) continue;
      used_[j] = true;
      const std::size_t starts = (prev != kNone && j == prev + 1) ? 0 : 1;
      const std::size_t rest = best(i + 1, j);
      used_[j] = false;
      if (rest != kNone) result = std::min(result, rest + starts);
    }
    if (skipped_[w] < spare_[w]) {
      ++skipped_[w];
      const std::size_t rest = best(i + 1, kNone);
      --skipped_[w];
      result = std::min(result, rest);
    }
    memo_.emplace(k, result);
    return result;
  }

  const std::vector<std::string>& hyp_;
  const std::vector<std::string>& ref_;
  std::vector<std::size_t> hyp_word_, ref_word_;
  std::vector<std::size_t> spare_, skipped_;
  std::vector<std::vector<std::size_t>> positions_;
  std::vector<bool> used_;
  std::size_t matches_ = 0;
  std::unordered_map<std::string, std::size_t> memo_;
};

}  // namespace

Alignment align_exact(const std::vector<std::string>& hyp, const std::vector<std::string>& ref) {
  return ChunkMinimizer(hyp, ref).solve();
}

double meteor_exact(const SegmentedCaption& hyp, const SegmentedCaption& ref,
                    const MeteorParams& p) {
  if (hyp.tokens.empty() || ref.tokens.empty()) throw DataError("METEOR: empty caption");
  const auto a = align_exact(hyp.tokens, ref.tokens);
  if (a.matches == 0) return 0.0;
  const double m = static_cast<double>(a.matches);
  const double precision = m / static_cast<double>(hyp.tokens.size());
  const double recall = m / static_cast<double>(ref.tokens.size());
  const double f = precision * recall / (p.alpha * precision + (1.0 - p.alpha) * recall);
  const double penalty = p.gamma * std::pow(static_cast<double>(a.chunks) / m, p.beta);
  return f * (1.0 - penalty);
}

double meteor_exact(const std::vector<SegmentedCaption>& hyps,
                    const std::vector<SegmentedCaption>& refs, const MeteorParams& p) {
  check_pairs(hyps.size(), refs.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < hyps.size(); ++i) sum += meteor_exact(hyps[i], refs[i], p);
  return sum / static_cast<double>(hyps.size());
}

double cider(const std::vector<SegmentedCaption>& hyps, const std::vector<SegmentedCaption>& refs) {
  check_pairs(hyps.size(), refs.size());
  if (hyps.size() < 2) throw DataError("CIDEr needs a corpus of at least two items");
  const double n_items = static_cast<double>(refs.size());

  double total = 0.0;
  std::vector<double> per_item(hyps.size(), 0.0);
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<NgramCounts> hc(hyps.size()), rc(refs.size());
    std::map<std::vector<std::string>, std::size_t> df;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      rc[i] = ngrams(refs[i].tokens, n);
      hc[i] = ngrams(hyps[i].tokens, n);
      for (const auto& [g, c] : rc[i]) ++df[g];
    }
    auto idf = [&](const std::vector<std::string>& g) {
      auto it = df.find(g);
      const double d = it == df.end() ? 1.0 : static_cast<double>(it->second);
      return std::log(n_items / d);
    };
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      double dot = 0.0, hn = 0.0, rn = 0.0;
      for (const auto& [g, c] : hc[i]) {
        const double w = static_cast<double>(c) * idf(g);
        hn += w * w;
        auto it = rc[i].find(g);
        if (it != rc[i].end()) dot += w * static_cast<double>(it->second) * idf(g);
      }
      for (const auto& [g, c] : rc[i]) {
        const double w = static_cast<double>(c) * idf(g);
        rn += w * w;
      }
      if (hn > 0.0 && rn > 0.0) per_item[i] += dot / (std::sqrt(hn) * std::sqrt(rn));
    }
  }
  for (double s : per_item) total += s / 4.0;
  return 10.0 * total / static_cast<double>(hyps.size());
}

double caption_overall(double bleu4_pct, double meteor_pct, double cider_scaled) {
  return (bleu4_pct + meteor_pct + cider_scaled) / 3.0;
}

// ---- misc ----------------------------------------------------------------

std::vector<double> mean_pool(const std::vector<std::vector<double>>& frame_features) {
  if (frame_features.empty()) throw DataError("mean pooling over no frames");
  const std::size_t d = frame_features.front().size();
  std::vector<double> out(d, 0.0);
  for (const auto& f : frame_features) {
    if (f.size() != d) {
      throw DataError("frame feature dimension " + std::to_string(f.size()) + " differs from " +
                      std::to_string(d));
    }
    for (std::size_t c = 0; c < d; ++c) out[c] += f[c];
  }
  const double n = static_cast<double>(frame_features.size());
  for (double& x : out) x /= n;
  return out;
}

VocabComparison vocab_compare(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> ta, tb;
  for (const auto& s : a) ta.insert(text::trim(s));
  for (const auto& s : b) tb.insert(text::trim(s));
  VocabComparison r;
  for (const auto& s : ta) {
    if (tb.count(s)) ++r.common;
    else ++r.novel_in_a;
  }
  return r;
}

Json Description::to_json() const {
  return {{"min", min}, {"max", max}, {"mean", mean}, {"median", median}};
}

Description describe(std::vector<double> values) {
  if (values.empty()) throw DataError("describe over an empty list");
  std::sort(values.begin(), values.end());
  Description d;
  d.min = values.front();
  d.max = values.back();
  d.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  const std::size_t n = values.size();
  d.median = n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
  return d;
}

std::string_view to_string(Task t) {
  switch (t) {
    case Task::tagging: return "tagging";
    case Task::retrieval: return "retrieval";
    case Task::caption: return "caption";
  }
  return "?";
}

Json MetricReport::to_json() const {
  Json j{{"task", to_string(task)}, {"scores", scores}, {"overall", overall}};
  if (!raw_scores.empty()) j["raw_scores"] = raw_scores;
  for (const auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

}  // namespace curator::metrics
