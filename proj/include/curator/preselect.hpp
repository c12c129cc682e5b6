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

// Neighbor-voting preselection over cleaned videos.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "curator/model.hpp"

namespace curator::preselect {

struct Neighbor {
  std::string id;
  double cosine = 0.0;
  bool operator==(const Neighbor&) const = default;
};

// Exhaustive cosine index. Vectors are normalized once at construction.
class NeighborIndex {
 public:
  // Throws DataError on zero-norm or mismatched-dimension vectors.
  explicit NeighborIndex(const std::map<std::string, FeatureVector>& features);

  std::size_t size() const { return ids_.size(); }
  bool contains(const std::string& id) const;

  // Top k by cosine, excluding the query; ties by ascending id.
  std::vector<Neighbor> query(const std::string& id, std::size_t k) const;

 private:
  std::vector<std::string> ids_;          // ascending
  std::map<std::string, std::size_t> pos_;
  std::size_t dim_ = 0;
  std::vector<double> unit_;              // size() x dim_, row-major
};

std::vector<Neighbor> nearest_neighbors(const std::string& query_id,
                                        const std::map<std::string, FeatureVector>& features,
                                        std::size_t k);

// Counts, for each of the query's own tags, how many neighbors carry it.
// Tags are compared after whitespace trim. Only counts >= min_votes survive.
std::map<std::string, std::size_t> vote_tags(const VideoRecord& query,
                                             const std::vector<const VideoRecord*>& neighbors,
                                             std::size_t min_votes = 1);

struct PreselectConfig {
  std::size_t k = 200;
  std::size_t min_votes = 1;
  std::size_t sample_n = 10000;
  double max_duration_s = 60.0;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  Json to_json() const;
  void apply(const Json& j);
};

struct Candidate {
  std::string video_id;
  std::map<std::string, std::size_t> voted_tags;
};

struct PreselectResult {
  std::vector<Candidate> candidates;  // corpus order
  std::size_t scanned = 0;            // videos with a feature vector
  std::size_t eligible = 0;           // at least one voted tag
  std::size_t sampled = 0;
  std::size_t too_long = 0;

  Json summary() const;
};

// Votes every video against its neighbors, samples min(sample_n, eligible)
// uniformly with the seeded generator, then drops videos longer than
// max_duration_s. Videos without a feature vector are never eligible.
PreselectResult preselect_candidates(const std::vector<VideoRecord>& corpus,
                                     const std::map<std::string, FeatureVector>& features,
                                     const PreselectConfig& cfg);

// Uniform m-of-n sample without replacement, returned ascending. Uses only
// mt19937_64 output, so results match across standard libraries.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t m, std::uint64_t seed);

}  // namespace curator::preselect
