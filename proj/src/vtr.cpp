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

#include "curator/vtr.hpp"

#include <algorithm>
#include <fstream>

#include "curator/error.hpp"
#include "curator/ingest.hpp"

namespace curator::vtr {

std::size_t middle_frame(std::size_t k) { return k / 2; }

std::size_t reduced_count(std::size_t k, std::size_t p, ReductionMode mode) {
  return mode == ReductionMode::middle_only ? k + p : k + 3 * p;
}

ReducedTokens reduce_tokens(const TokenGrid& grid, ReductionMode mode) {
  const std::size_t k = grid.frames();
  const std::size_t per_frame = grid.tokens_per_frame();
  const std::size_t d = grid.width();

  std::vector<std::size_t> full;
  if (mode == ReductionMode::middle_only) {
    full = {middle_frame(k)};
  } else {
    if (k < 3) throw DataError("middle_first_last reduction needs at least 3 frames");
    full = {0, middle_frame(k), k - 1};
  }
  // Full frames in temporal order.
  std::sort(full.begin(), full.end());

  ReducedTokens out;
  out.width = d;
  out.provenance.reserve(reduced_count(k, grid.patches(), mode));
  out.rows.reserve(out.provenance.capacity() * d);
  auto emit = [&](std::size_t frame, std::size_t token) {
    const double* src = grid.token(frame, token);
    out.rows.insert(out.rows.end(), src, src + d);
    out.provenance.push_back({frame, token});
  };
  for (std::size_t f : full) {
    for (std::size_t t = 0; t < per_frame; ++t) emit(f, t);
  }
  for (std::size_t f = 0; f < k; ++f) {
    if (std::find(full.begin(), full.end(), f) == full.end()) emit(f, 0);
  }
  return out;
}

double combine_losses(double w, double l_gen, double l_match) {
  if (!(w >= 0.0 && w <= 1.0)) throw DataError("loss weight must lie in [0,1]");
  return w * l_gen + (1.0 - w) * l_match;
}

Json grid_to_json(const TokenGrid& grid) {
  Json frames = Json::array();
  for (std::size_t f = 0; f < grid.frames(); ++f) {
    Json tokens = Json::array();
    for (std::size_t t = 0; t < grid.tokens_per_frame(); ++t) {
      const double* v = grid.token(f, t);
      tokens.push_back(std::vector<double>(v, v + grid.width()));
    }
    frames.push_back(std::move(tokens));
  }
  return {{"k", grid.frames()}, {"p", grid.patches()}, {"d", grid.width()}, {"values", frames}};
}

TokenGrid grid_from_json(const Json& j) {
  try {
    const auto k = j.at("k").get<std::size_t>();
    const auto p = j.at("p").get<std::size_t>();
    const auto d = j.at("d").get<std::size_t>();
    const auto& frames = j.at("values");
    if (frames.size() != k) throw DataError("grid values hold " + std::to_string(frames.size()) + " frames, expected k");
    std::vector<double> values;
    values.reserve(k * (p + 1) * d);
    for (const auto& tokens : frames) {
      if (tokens.size() != p + 1) throw DataError("grid frame does not hold p+1 tokens");
      for (const auto& tok : tokens) {
        if (tok.size() != d) throw DataError("grid token is not d wide");
        for (const auto& x : tok) values.push_back(x.get<double>());
      }
    }
    return TokenGrid(k, p, d, std::move(values));
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed grid: ") + e.what());
  }
}

TokenGrid load_grid(const std::filesystem::path& path) {
  auto in = ingest::open_input(path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return grid_from_json(j);
}

}  // namespace curator::vtr
