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

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "curator/error.hpp"
#include "curator/preselect.hpp"
#include "oracles.hpp"

namespace curator::preselect {
namespace {

std::map<std::string, FeatureVector> features(const std::map<std::string, std::vector<double>>& raw) {
  std::map<std::string, FeatureVector> out;
  for (const auto& [id, v] : raw) out[id] = {id, v};
  return out;
}

VideoRecord video(std::string id, std::vector<std::string> tags, double duration = 30.0) {
  VideoRecord v;
  v.id = std::move(id);
  v.duration_s = duration;
  v.user_tags = std::move(tags);
  return v;
}

TEST(Neighbors, SmallExample) {
  const auto f = features({{"v1", {1, 0}}, {"v2", {1, 0}}, {"v3", {0, 1}}});
  const auto n = nearest_neighbors("v1", f, 2);
  ASSERT_EQ(n.size(), 2u);
  EXPECT_EQ(n[0], (Neighbor{"v2", 1.0}));
  EXPECT_EQ(n[1], (Neighbor{"v3", 0.0}));
}

TEST(Neighbors, KEqualsCorpusMinusOneReturnsAllOthers) {
  const auto f = features({{"a", {1, 2}}, {"b", {2, 1}}, {"c", {-1, 0}}, {"d", {0, 3}}});
  const auto n = nearest_neighbors("c", f, 3);
  std::set<std::string> ids;
  for (const auto& x : n) ids.insert(x.id);
  EXPECT_EQ(ids, (std::set<std::string>{"a", "b", "d"}));
  EXPECT_THROW(nearest_neighbors("c", f, 4), DataError);
}

TEST(Neighbors, TiesByAscendingId) {
  const auto f = features({{"q", {1, 0}}, {"z", {2, 0}}, {"b", {3, 0}}, {"m", {0.5, 0}}});
  const auto n = nearest_neighbors("q", f, 3);
  EXPECT_EQ(n[0].id, "b");
  EXPECT_EQ(n[1].id, "m");
  EXPECT_EQ(n[2].id, "z");
}

TEST(Neighbors, ZeroVectorRejected) {
  EXPECT_THROW(NeighborIndex(features({{"a", {0, 0}}, {"b", {1, 0}}})), DataError);
  EXPECT_THROW(NeighborIndex(features({{"a", {1}}, {"b", {1, 0}}})), DataError);
  NeighborIndex idx(features({{"a", {1, 0}}, {"b", {1, 1}}}));
  EXPECT_THROW(idx.query("zz", 1), DataError);
}

TEST(Neighbors, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    std::map<std::string, std::vector<double>> raw;
    for (int i = 0; i < 50; ++i) {
      std::vector<double> v(16);
      for (auto& x : v) x = g(rng);
      raw["v" + std::to_string(i)] = v;
    }
    const auto f = features(raw);
    NeighborIndex idx(f);
    for (const std::string q : {"v0", "v17", "v42"}) {
      const auto got = idx.query(q, 10);
      const auto want = oracle::nearest(raw, q, 10);
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].id, want[i].first);
        EXPECT_NEAR(got[i].cosine, want[i].second, 1e-12);
      }
    }
  }
}

TEST(Neighbors, InvariantToPositiveScaling) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  std::map<std::string, std::vector<double>> raw;
  for (int i = 0; i < 30; ++i) raw["v" + std::to_string(i)] = {g(rng), g(rng), g(rng), g(rng)};
  const auto base = nearest_neighbors("v3", features(raw), 29);
  for (auto& [id, v] : raw) {
    const double c = std::exp(g(rng) * 3.0);
    for (auto& x : v) x *= c;
  }
  const auto scaled = nearest_neighbors("v3", features(raw), 29);
  ASSERT_EQ(base.size(), scaled.size());
  for (std::size_t i = 0; i < base.size(); ++i) EXPECT_EQ(base[i].id, scaled[i].id);
}

TEST(VoteTags, Examples) {
  const auto q = video("q", {"猫", "狗"});
  std::vector<VideoRecord> pool;
  for (int i = 0; i < 200; ++i) pool.push_back(video("n" + std::to_string(i), i < 3 ? std::vector<std::string>{"猫"} : std::vector<std::string>{"鱼"}));
  std::vector<const VideoRecord*> ptrs;
  for (const auto& v : pool) ptrs.push_back(&v);
  const auto votes = vote_tags(q, ptrs);
  EXPECT_EQ(votes, (std::map<std::string, std::size_t>{{"猫", 3}}));
}

TEST(VoteTags, MinVotesFilters) {
  const auto q = video("q", {"a", "b"});
  std::vector<VideoRecord> pool;
  for (int i = 0; i < 5; ++i) {
    std::vector<std::string> tags{"b"};
    if (i < 3) tags.push_back("a");
    pool.push_back(video("n" + std::to_string(i), tags));
  }
  std::vector<const VideoRecord*> ptrs;
  for (const auto& v : pool) ptrs.push_back(&v);
  EXPECT_EQ(vote_tags(q, ptrs, 4), (std::map<std::string, std::size_t>{{"b", 5}}));
  EXPECT_THROW(vote_tags(q, ptrs, 0), DataError);
}

TEST(VoteTags, TrimsAndStaysWithinQueryTags) {
  const auto q = video("q", {" 猫 ", "猫"});
  const auto n1 = video("n1", {"猫\t", "狗"});
  const auto n2 = video("n2", {"狗"});
  const auto votes = vote_tags(q, {&n1, &n2});
  EXPECT_EQ(votes, (std::map<std::string, std::size_t>{{"猫", 1}}));
}

TEST(Sample, UniformSubsetProperties) {
  const auto s = sample_indices(100, 10, 7);
  ASSERT_EQ(s.size(), 10u);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 10u);
  EXPECT_LT(s.back(), 100u);
  EXPECT_EQ(sample_indices(100, 10, 7), s);
  EXPECT_NE(sample_indices(100, 10, 8), s);
  EXPECT_EQ(sample_indices(5, 10, 1).size(), 5u);
  EXPECT_TRUE(sample_indices(0, 3, 1).empty());
}

TEST(Sample, RoughlyUniformMarginals) {
  std::vector<int> hits(20, 0);
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    for (auto i : sample_indices(20, 5, seed)) ++hits[i];
  }
  for (int h : hits) EXPECT_NEAR(h, 1000, 150);
}

struct Corpus {
  std::vector<VideoRecord> videos;
  std::map<std::string, FeatureVector> feats;
};

Corpus clustered(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.05);
  Corpus c;
  const std::vector<std::string> topics{"猫", "狗", "车"};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t t = i % 3;
    const std::string id = "v" + std::to_string(1000 + i);
    c.videos.push_back(video(id, {topics[t], "随手拍" + std::to_string(i)}, static_cast<double>(40 + i % 30)));
    std::vector<double> v(3, 0.0);
    v[t] = 1.0;
    for (auto& x : v) x += g(rng);
    c.feats[id] = {id, v};
  }
  return c;
}

TEST(Preselect, CapsAtEligible) {
  auto c = clustered(30, 1);
  PreselectConfig cfg;
  cfg.k = 5;
  cfg.sample_n = 10;
  cfg.max_duration_s = 1000;
  auto r = preselect_candidates(c.videos, c.feats, cfg);
  EXPECT_EQ(r.eligible, 30u);
  EXPECT_EQ(r.sampled, 10u);
  cfg.sample_n = 100;
  r = preselect_candidates(c.videos, c.feats, cfg);
  EXPECT_EQ(r.sampled, 30u);
  EXPECT_EQ(r.candidates.size(), 30u);
}

TEST(Preselect, DurationBoundary) {
  auto c = clustered(12, 2);
  c.videos[0].duration_s = 61.0;
  c.videos[1].duration_s = 60.0;
  PreselectConfig cfg;
  cfg.k = 4;
  const auto r = preselect_candidates(c.videos, c.feats, cfg);
  std::set<std::string> ids;
  for (const auto& cand : r.candidates) ids.insert(cand.video_id);
  EXPECT_FALSE(ids.count(c.videos[0].id));
  EXPECT_TRUE(ids.count(c.videos[1].id));
  EXPECT_EQ(r.too_long, 1u);
}

TEST(Preselect, DeterministicGivenSeed) {
  auto c = clustered(90, 3);
  PreselectConfig cfg;
  cfg.k = 10;
  cfg.sample_n = 20;
  cfg.seed = 123;
  auto ids = [&](unsigned threads) {
    cfg.threads = threads;
    std::vector<std::string> out;
    for (const auto& x : preselect_candidates(c.videos, c.feats, cfg).candidates) out.push_back(x.video_id);
    return out;
  };
  const auto a = ids(1);
  EXPECT_EQ(a, ids(1));
  EXPECT_EQ(a, ids(8));
  EXPECT_EQ(std::set<std::string>(a.begin(), a.end()).size(), a.size());
}

TEST(Preselect, OutputSubsetOfInputAndVotedTagsOwn) {
  auto c = clustered(45, 4);
  // Videos without features are never eligible.
  c.feats.erase(c.videos[2].id);
  PreselectConfig cfg;
  cfg.k = 6;
  cfg.max_duration_s = 1000;
  const auto r = preselect_candidates(c.videos, c.feats, cfg);
  EXPECT_EQ(r.scanned, 44u);
  std::map<std::string, const VideoRecord*> by_id;
  for (const auto& v : c.videos) by_id[v.id] = &v;
  for (const auto& cand : r.candidates) {
    ASSERT_TRUE(by_id.count(cand.video_id));
    EXPECT_NE(cand.video_id, c.videos[2].id);
    const auto& tags = by_id[cand.video_id]->user_tags;
    for (const auto& [tag, n] : cand.voted_tags) {
      EXPECT_NE(std::find(tags.begin(), tags.end(), tag), tags.end());
      EXPECT_GE(n, 1u);
    }
  }
  const auto s = r.summary();
  EXPECT_EQ(s["scanned"], 44);
}

TEST(Preselect, UniqueTagsAreNotEligible) {
  std::vector<VideoRecord> vs{video("a", {"x"}), video("b", {"y"}), video("c", {"z"})};
  const auto f = features({{"a", {1, 0}}, {"b", {0, 1}}, {"c", {1, 1}}});
  PreselectConfig cfg;
  cfg.k = 2;
  const auto r = preselect_candidates(vs, f, cfg);
  EXPECT_EQ(r.eligible, 0u);
  EXPECT_TRUE(r.candidates.empty());
}

TEST(Preselect, KClampedForSmallCorpora) {
  auto c = clustered(10, 5);
  PreselectConfig cfg;  // k = 200 by default
  EXPECT_NO_THROW(preselect_candidates(c.videos, c.feats, cfg));
}

}  // namespace
}  // namespace curator::preselect
