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

// Random small metric instances. Values come from tiny discrete sets so ties
// and repeated n-grams are common.

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace curator::testing {

struct TaggingCase {
  std::map<std::string, double> scores;
  std::set<std::string> relevant;  // nonempty; may include unranked labels
};

TaggingCase random_tagging(std::mt19937_64& rng, std::size_t max_labels = 6);

struct RetrievalCase {
  std::vector<std::string> query_ids;
  std::vector<std::string> video_ids;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> truth;  // column per query
};

RetrievalCase random_retrieval(std::mt19937_64& rng, std::size_t max_items = 6);

using TokenList = std::vector<std::string>;

struct CaptionCase {
  std::vector<TokenList> hyps;
  std::vector<TokenList> refs;
};

// items in [min_items, max_items], 1..max_tokens tokens per caption.
CaptionCase random_captions(std::mt19937_64& rng, std::size_t min_items = 1,
                            std::size_t max_items = 6, std::size_t max_tokens = 8);

}  // namespace curator::testing
