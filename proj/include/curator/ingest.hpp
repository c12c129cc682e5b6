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

// Line-delimited file forms for the corpus manifest, sidecar annotations and
// ground truth. Every encoder writes one canonical line per record (sorted
// keys, shortest round-trip numbers), so decode followed by encode
// reproduces the input bytes.

#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "curator/model.hpp"

namespace curator::ingest {

namespace fs = std::filesystem;

// Sidecar file names inside a sidecar directory.
inline constexpr const char* kFramesFile = "frames.jsonl";
inline constexpr const char* kFeaturesFile = "features.jsonl";
inline constexpr const char* kTitleTokensFile = "title_tokens.jsonl";
inline constexpr const char* kLabelSimFile = "label_sim.jsonl";
std::string labels_file(Dimension d);  // labels.<dimension>.jsonl

// Per-record codecs. Decoders throw DataError("field <name>: ...").
Json encode(const VideoRecord& r);
VideoRecord decode_video(const Json& j);
Json encode(const FrameRecord& f);
FrameRecord decode_frame(const Json& j);
Json encode(const LabelScoreSet& s);  // dimension is implied by the file
LabelScoreSet decode_label_scores(const Json& j, Dimension d);
Json encode(const FeatureVector& v);
FeatureVector decode_feature(const Json& j);
Json encode(const TitleTokenization& t);
TitleTokenization decode_title_tokens(const Json& j);
Json encode(const GroundTruth& g);
GroundTruth decode_groundtruth(const Json& j);
Json encode(const CleaningVerdict& v);
CleaningVerdict decode_verdict(const Json& j);

std::string canonical_line(const Json& j);

// Calls fn(line_number, json) for every nonblank line. Parse failures and
// exceptions thrown by fn surface as DataError("line N: ...").
void for_each_line(std::istream& in, const std::function<void(std::size_t, const Json&)>& fn);
void for_each_line(const fs::path& path,
                   const std::function<void(std::size_t, const Json&)>& fn);

std::vector<VideoRecord> read_manifest(std::istream& in);
// Throws IoError if the file cannot be opened, DataError on malformed lines
// or duplicate ids.
std::vector<VideoRecord> load_manifest(const fs::path& path);
void write_manifest(std::ostream& out, const std::vector<VideoRecord>& records);

// Missing files leave the matching maps empty. Cross-references are checked
// against the manifest; unknown ids and frame invariant violations throw.
SidecarBundle load_sidecars(const fs::path& dir, const std::vector<VideoRecord>& manifest);
void save_sidecars(const fs::path& dir, const SidecarBundle& bundle);

std::vector<GroundTruth> load_groundtruth(const fs::path& path);
std::vector<CleaningVerdict> load_verdicts(const fs::path& path);

std::ifstream open_input(const fs::path& path);
std::ofstream open_output(const fs::path& path);

}  // namespace curator::ingest
