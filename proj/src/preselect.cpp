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

#include "curator/preselect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <random>
#include <set>

#include "curator/error.hpp"
#include "curator/parallel.hpp"
#include "curator/text.hpp"

namespace curator::preselect {

NeighborIndex::NeighborIndex(const std::map<std::string, FeatureVector>& features) {
  ids_.reserve(features.size());
  for (const auto& [id, fv] : features) {
    if (ids_.empty()) dim_ = fv.values.size();
    if (fv.values.size() != dim_ || dim_ == 0) {
      throw DataError("feature dimension mismatch for " + id);
    }
    double norm = 0.0;
    for (double x : fv.values) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw DataError("zero-norm feature vector for " + id);
    pos_[id] = ids_.size();
    ids_.push_back(id);
    for (double x : fv.values) unit_.push_back(x / norm);
  }
}

bool NeighborIndex::contains(const std::string& id) const { return pos_.count(id) != 0; }

std::vector<Neighbor> NeighborIndex::query(const std::string& id, std::size_t k) const {
  auto it = pos_.find(id);
  if (it == pos_.end()) throw DataError("query video " + id + " has no feature vector");
  if (k + 1 > ids_.size()) {
    throw DataError("k=" + std::to_string(k) + " exceeds corpus size - 1");
  }
  const std::size_t q = it->second;
  const double* qv = unit_.data() + q * dim_;

  std::vector<std::pair<double, std::size_t>> sims;
  sims.reserve(ids_.size() - 1);
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (i == q) continue;
    const double* v = unit_.data() + i * dim_;
    double dot = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) dot += qv[c] * v[c];
    sims.emplace_back(dot, i);
  }
  // ids_ is ascending, so a smaller row index means a smaller id.
  auto better = [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  };
  std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k), sims.end(),
                    better);
  std::vector<Neighbor> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back({ids_[sims[i].second], sims[i].first});
  return out;
}

std::vector<Neighbor> nearest_neighbors(const std::string& query_id,
                                        const std::map<std::string, FeatureVector>& features,
                                        std::size_t k) {
  return NeighborIndex(features).query(query_id, k);
}

std::map<std::string, std::size_t> vote_tags(const VideoRecord& query,
                                             const std::vector<const VideoRecord*>& neighbors,
                                             std::size_t min_votes) {
  if (min_votes == 0) throw DataError("min_votes must be at least 1");
  std::map<std::string, std::size_t> votes;
  for (const auto& tag : query.user_tags) {
    auto t = text::trim(tag);
    if (!t.empty()) votes.emplace(std::move(t), 0);
  }
  for (const auto* n : neighbors) {
    std::set<std::string> tags;
    for (const auto& tag : n->user_tags) tags.insert(text::trim(tag));
    for (auto& [tag, count] : votes) {
      if (tags.count(tag)) ++count;
    }
  }
  std::erase_if(votes, [&](const auto& kv) { return kv.second < min_votes; });
  return votes;
}

Json PreselectConfig::to_json() const {
  return {{"k", k},
          {"min_votes", min_votes},
          {"sample_n", sample_n},
          {"max_duration_s", max_duration_s},
          {"seed", seed}};
}

void PreselectConfig::apply(const Json& j) {
  if (!j.is_object()) throw DataError("preselect config must be an object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "k") k = v.get<std::size_t>();
      else if (key == "min_votes") min_votes = v.get<std::size_t>();
      else if (key == "sample_n") sample_n = v.get<std::size_t>();
      else if (key == "max_duration_s") max_duration_s = v.get<double>();
      else if (key == "seed") seed = v.get<std::uint64_t>();
      else if (key == "threads") threads = v.get<unsigned>();
      else throw DataError("unknown preselect option '" + key + "'");
    } catch (const Json::exception&) {
      throw DataError("preselect option '" + key + "' has the wrong type");
    }
  }
}

Json PreselectResult::summary() const {
  return {{"scanned", scanned},
          {"eligible", eligible},
          {"sampled", sampled},
          {"excluded_too_long", too_long},
          {"candidates", candidates.size()}};
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t m, std::uint64_t seed) {
  m = std::min(m, n);
  std::mt19937_64 gen(seed);
  // Unbiased draw from [0, bound) by rejection.
  auto draw = [&](std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = gen();
    } while (x >= limit);
    return x % bound;
  };
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::size_t>(draw(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

PreselectResult preselect_candidates(const std::vector<VideoRecord>& corpus,
                                     const std::map<std::string, FeatureVector>& features,
                                     const PreselectConfig& cfg) {
  std::map<std::string, FeatureVector> usable;
  std::map<std::string, const VideoRecord*> by_id;
  for (const auto& v : corpus) {
    by_id[v.id] = &v;
    auto it = features.find(v.id);
    if (it != features.end()) usable.emplace(v.id, it->second);
  }
  const NeighborIndex index(usable);
  PreselectResult result;
  result.scanned = index.size();
  const std::size_t k = index.size() == 0 ? 0 : std::min(cfg.k, index.size() - 1);

  std::vector<std::map<std::string, std::size_t>> votes(corpus.size());
  parallel_for(corpus.size(), cfg.threads, [&](std::size_t i) {
    const auto& video = corpus[i];
    if (!index.contains(video.id)) return;
    std::vector<const VideoRecord*> neighbors;
    for (const auto& n : index.query(video.id, k)) neighbors.push_back(by_id.at(n.id));
    votes[i] = vote_tags(video, neighbors, cfg.min_votes);
  });

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!votes[i].empty()) eligible.push_back(i);
  }
  result.eligible = eligible.size();
  const auto picks = sample_indices(eligible.size(), cfg.sample_n, cfg.seed);
  result.sampled = picks.size();
  for (std::size_t p : picks) {
    const std::size_t i = eligible[p];
    if (corpus[i].duration_s > cfg.max_duration_s) {
      ++result.too_long;
      continue;
    }
    result.candidates.push_back({corpus[i].id, std::move(votes[i])});
  }
  return result;
}

}  // namespace curator::preselect
