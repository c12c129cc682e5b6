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

// Visual-token reduction as a pure array transform: keep every token of the
// middle frame (and optionally the first and last frames) plus the
// classification token of each remaining frame.

#include <filesystem>
#include <vector>

#include "curator/model.hpp"

namespace curator::vtr {

enum class ReductionMode { middle_only, middle_first_last };

struct TokenSource {
  std::size_t frame = 0;
  std::size_t token = 0;  // 0 is the classification token
  bool operator==(const TokenSource&) const = default;
};

struct ReducedTokens {
  std::size_t width = 0;
  std::vector<double> rows;  // provenance.size() x width, row-major
  std::vector<TokenSource> provenance;

  std::size_t count() const { return provenance.size(); }
  const double* row(std::size_t i) const { return rows.data() + i * width; }
};

std::size_t middle_frame(std::size_t k);

// Output count: k + p for middle_only, k + 3p for middle_first_last.
std::size_t reduced_count(std::size_t k, std::size_t p, ReductionMode mode);

// Full frames come first in ascending frame order, each in original token
// order; then the classification tokens of the other frames in ascending
// frame order. Throws DataError when middle_first_last gets k < 3.
ReducedTokens reduce_tokens(const TokenGrid& grid, ReductionMode mode);

// w * l_gen + (1 - w) * l_match. Throws DataError unless 0 <= w <= 1.
double combine_losses(double w, double l_gen, double l_match);

// Grid file: {"k", "p", "d", "values": [[[...d] x (p+1)] x k]}.
TokenGrid load_grid(const std::filesystem::path& path);
Json grid_to_json(const TokenGrid& grid);
TokenGrid grid_from_json(const Json& j);

}  // namespace curator::vtr
