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

// Synthetic corpora with planted violations of each cleaning rule.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curator/model.hpp"

namespace curator::testing {

struct PlantedCorpus {
  std::vector<VideoRecord> videos;
  SidecarBundle sidecars;
  std::map<std::string, std::optional<RemovalCategory>> expected;
};

// total videos, of which per_category violate exactly one rule each. Clean
// videos sit just on the keep side of the frame-fraction boundaries.
PlantedCorpus make_planted_corpus(std::size_t total = 200, std::size_t per_category = 20,
                                  std::uint64_t seed = 7);

// Writes manifest.jsonl plus the sidecar directory under root.
void write_corpus(const PlantedCorpus& corpus, const std::filesystem::path& root);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace curator::testing
