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

#include <cstring>
#include <fstream>
#include <random>
#include <set>

#include "curator/error.hpp"
#include "curator/vtr.hpp"
#include "fixtures.hpp"

namespace curator::vtr {
namespace {

TokenGrid random_grid(std::size_t k, std::size_t p, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> values(k * (p + 1) * d);
  for (auto& x : values) x = u(rng);
  return {k, p, d, std::move(values)};
}

TEST(Reduce, StandardLayoutCounts) {
  EXPECT_EQ(reduce_tokens(TokenGrid(6, 196, 2), ReductionMode::middle_only).count(), 202u);
  EXPECT_EQ(reduce_tokens(TokenGrid(16, 196, 2), ReductionMode::middle_only).count(), 212u);
  EXPECT_EQ(reduce_tokens(TokenGrid(16, 196, 2), ReductionMode::middle_first_last).count(), 604u);
  EXPECT_EQ(reduced_count(6, 196, ReductionMode::middle_only), 202u);
  EXPECT_EQ(reduced_count(16, 196, ReductionMode::middle_first_last), 604u);
}

TEST(Reduce, MiddleFrameIndex) {
  EXPECT_EQ(middle_frame(1), 0u);
  EXPECT_EQ(middle_frame(6), 3u);
  EXPECT_EQ(middle_frame(7), 3u);
  EXPECT_EQ(middle_frame(16), 8u);
}

TEST(Reduce, MiddleOnlyLayout) {
  const auto g = random_grid(5, 3, 2, 1);
  const auto r = reduce_tokens(g, ReductionMode::middle_only);
  ASSERT_EQ(r.count(), 8u);
  for (std::size_t t = 0; t <= 3; ++t) EXPECT_EQ(r.provenance[t], (TokenSource{2, t}));
  const std::vector<std::size_t> others{0, 1, 3, 4};
  for (std::size_t i = 0; i < others.size(); ++i) {
    EXPECT_EQ(r.provenance[4 + i], (TokenSource{others[i], 0}));
  }
}

TEST(Reduce, MiddleFirstLastLayout) {
  const auto g = random_grid(5, 2, 1, 2);
  const auto r = reduce_tokens(g, ReductionMode::middle_first_last);
  ASSERT_EQ(r.count(), 5u + 3u * 2u);
  std::vector<TokenSource> want;
  for (std::size_t f : {0u, 2u, 4u}) {
    for (std::size_t t = 0; t <= 2; ++t) want.push_back({f, t});
  }
  want.push_back({1, 0});
  want.push_back({3, 0});
  EXPECT_EQ(r.provenance, want);
}

TEST(Reduce, SingleFrameKeepsEverything) {
  const auto g = random_grid(1, 4, 3, 3);
  const auto r = reduce_tokens(g, ReductionMode::middle_only);
  ASSERT_EQ(r.count(), 5u);
  EXPECT_EQ(r.rows, g.values());
}

TEST(Reduce, MiddleFirstLastNeedsThreeFrames) {
  EXPECT_THROW(reduce_tokens(TokenGrid(2, 4, 1), ReductionMode::middle_first_last), DataError);
  EXPECT_NO_THROW(reduce_tokens(TokenGrid(3, 4, 1), ReductionMode::middle_first_last));
}

TEST(Reduce, RowsAreBitExactCopiesWithUniqueProvenance) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + rng() % 12, p = 1 + rng() % 20, d = 1 + rng() % 5;
    const auto mode = (k >= 3 && rng() % 2) ? ReductionMode::middle_first_last : ReductionMode::middle_only;
    const auto g = random_grid(k, p, d, rng());
    const auto r = reduce_tokens(g, mode);
    ASSERT_EQ(r.count(), reduced_count(k, p, mode));
    ASSERT_EQ(r.width, d);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t i = 0; i < r.count(); ++i) {
      const auto& s = r.provenance[i];
      EXPECT_TRUE(seen.insert({s.frame, s.token}).second);
      EXPECT_EQ(std::memcmp(r.row(i), g.token(s.frame, s.token), d * sizeof(double)), 0);
    }
    if (mode == ReductionMode::middle_only) {
      for (std::size_t t = 0; t <= p; ++t) EXPECT_EQ(r.provenance[t], (TokenSource{k / 2, t}));
    }
  }
}

TEST(CombineLosses, Examples) {
  EXPECT_EQ(combine_losses(1.0, 2.0, 9.9), 2.0);
  EXPECT_EQ(combine_losses(0.0, 2.0, 4.0), 4.0);
  EXPECT_EQ(combine_losses(0.5, 2.0, 4.0), 3.0);
  EXPECT_THROW(combine_losses(-0.1, 1, 1), DataError);
  EXPECT_THROW(combine_losses(1.5, 1, 1), DataError);
}

TEST(GridFile, JsonRoundTripAndErrors) {
  const auto g = random_grid(3, 2, 2, 5);
  const auto back = grid_from_json(grid_to_json(g));
  EXPECT_EQ(back.values(), g.values());
  EXPECT_EQ(back.frames(), 3u);
  auto bad = grid_to_json(g);
  bad["k"] = 4;
  EXPECT_THROW(grid_from_json(bad), DataError);
  EXPECT_THROW(grid_from_json(Json{{"k", 1}}), DataError);

  curator::testing::TempDir dir;
  {
    std::ofstream out(dir.path() / "grid.json");
    out << grid_to_json(g).dump();
  }
  EXPECT_EQ(load_grid(dir.path() / "grid.json").values(), g.values());
  EXPECT_THROW(load_grid(dir.path() / "absent.json"), IoError);
}

}  // namespace
}  // namespace curator::vtr
