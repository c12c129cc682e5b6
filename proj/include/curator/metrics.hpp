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

// Evaluation metrics for tagging, retrieval and captioning, plus the small
// corpus statistics used in dataset reports.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "curator/model.hpp"

namespace curator::metrics {

// ---- tagging -------------------------------------------------------------

// Mean over relevant labels of precision at each relevant hit. Relevant
// labels missing from the ranking contribute zero. Throws on empty relevant.
double average_precision(const RankedPrediction& pred, const std::set<std::string>& relevant);

struct TaggingInstance {
  RankedPrediction pred;
  std::set<std::string> relevant;
};

double mean_ap(const std::vector<TaggingInstance>& per_video);

struct TransferResult {
  RankedPrediction ranking;
  std::size_t missing_pairs = 0;  // (source, tag) pairs absent from the table, scored as 0
};

// score(tag) = sum over predicted labels of score(label) * sim(label, tag).
TransferResult transfer_scores(const std::string& subject_id,
                               const std::vector<RankedItem>& top_preds,
                               const std::vector<std::string>& target_vocab,
                               const SimilarityTable& sim);

// ---- retrieval -----------------------------------------------------------

struct SimMatrix {
  std::vector<std::string> query_ids;
  std::vector<std::string> video_ids;
  std::vector<std::vector<double>> rows;  // rows[q][v]

  // Throws DataError on ragged rows, duplicate ids or size mismatches.
  void validate() const;
};

struct RecallReport {
  std::map<int, double> recall;  // N -> percent
  double sum = 0.0;              // SumR
  std::size_t queries = 0;
};

// 1-based rank of `truth` in a row: higher score first, ties by ascending id.
std::size_t rank_of(const std::vector<double>& row, const std::vector<std::string>& video_ids,
                    std::size_t truth);

RecallReport recall_at(const SimMatrix& m, const std::map<std::string, std::string>& truth,
                       const std::vector<int>& ns = {1, 5, 10});

// ---- captioning ----------------------------------------------------------

struct SegmentedCaption {
  std::string raw;
  std::vector<std::string> tokens;

  static SegmentedCaption from_raw(std::string raw);  // fallback segmenter
  static SegmentedCaption from_tokens(std::string raw, std::vector<std::string> tokens);
};

struct BleuOptions {
  bool add_one_smoothing = false;  // applied to orders 2..4
};

// Corpus BLEU-4, one reference per hypothesis, uniform weights.
double bleu4(const std::vector<SegmentedCaption>& hyps, const std::vector<SegmentedCaption>& refs,
             const BleuOptions& opt = {});

struct MeteorParams {
  double alpha = 0.9;
  double beta = 3.0;
  double gamma = 0.5;
};

struct Alignment {
  std::size_t matches = 0;
  std::size_t chunks = 0;
};

// Exact-match unigram alignment with the most matches, then fewest chunks.
Alignment align_exact(const std::vector<std::string>& hyp, const std::vector<std::string>& ref);

double meteor_exact(const SegmentedCaption& hyp, const SegmentedCaption& ref,
                    const MeteorParams& p = {});
// Mean of meteor_exact over pairs.
double meteor_exact(const std::vector<SegmentedCaption>& hyps,
                    const std::vector<SegmentedCaption>& refs, const MeteorParams& p = {});

// Vanilla CIDEr on the 0-10 scale; needs at least two items for IDF.
double cider(const std::vector<SegmentedCaption>& hyps, const std::vector<SegmentedCaption>& refs);

double caption_overall(double bleu4_pct, double meteor_pct, double cider_scaled);

// ---- misc ----------------------------------------------------------------

std::vector<double> mean_pool(const std::vector<std::vector<double>>& frame_features);

struct VocabComparison {
  std::size_t common = 0;
  std::size_t novel_in_a = 0;
};

VocabComparison vocab_compare(const std::set<std::string>& a, const std::set<std::string>& b);

struct Description {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;

  Json to_json() const;
};

Description describe(std::vector<double> values);

// ---- reports -------------------------------------------------------------

enum class Task { tagging, retrieval, caption };
std::string_view to_string(Task t);

struct MetricReport {
  Task task = Task::tagging;
  std::map<std::string, double> scores;      // reporting scale
  std::map<std::string, double> raw_scores;  // native scale, when it differs
  double overall = 0.0;
  Json extra = Json::object();

  Json to_json() const;
};

}  // namespace curator::metrics
