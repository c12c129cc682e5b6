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

// Layered settings: built-in defaults, then a JSON config file, then
// individual `section.key=value` overrides.

#include <filesystem>
#include <string>

#include "curator/clean.hpp"
#include "curator/model.hpp"
#include "curator/preselect.hpp"

namespace curator {

struct EvalConfig {
  Language lang = Language::zh;
  bool bleu_smoothing = false;
  std::size_t transfer_top_k = 5;

  Json to_json() const;
  void apply(const Json& j);
};

struct ServeConfig {
  double lease_minutes = 30.0;
  std::size_t snapshot_every = 100;

  Json to_json() const;
  void apply(const Json& j);
};

struct Settings {
  clean::CleanConfig clean;
  preselect::PreselectConfig preselect;
  EvalConfig eval;
  ServeConfig serve;

  // {"clean": {...}, "preselect": {...}, "eval": {...}, "serve": {...}}
  void apply(const Json& j);
  void apply_file(const std::filesystem::path& path);
  // "clean.ocr_char_threshold=10". Values parse as JSON, else as strings.
  void apply_override(const std::string& assignment);

  Json to_json() const;
  std::string digest() const;
};

}  // namespace curator
