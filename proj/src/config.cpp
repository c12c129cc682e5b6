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

#include "curator/config.hpp"

#include "curator/digest.hpp"
#include "curator/error.hpp"
#include "curator/ingest.hpp"

namespace curator {

Json EvalConfig::to_json() const {
  return {{"lang", to_string(lang)},
          {"bleu_smoothing", bleu_smoothing},
          {"transfer_top_k", transfer_top_k}};
}

void EvalConfig::apply(const Json& j) {
  if (!j.is_object()) throw DataError("eval config must be an object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "lang") lang = parse_language(v.get<std::string>());
      else if (key == "bleu_smoothing") bleu_smoothing = v.get<bool>();
      else if (key == "transfer_top_k") transfer_top_k = v.get<std::size_t>();
      else throw DataError("unknown eval option '" + key + "'");
    } catch (const Json::exception&) {
      throw DataError("eval option '" + key + "' has the wrong type");
    }
  }
}

Json ServeConfig::to_json() const {
  return {{"lease_minutes", lease_minutes}, {"snapshot_every", snapshot_every}};
}

void ServeConfig::apply(const Json& j) {
  if (!j.is_object()) throw DataError("serve config must be an object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "lease_minutes") lease_minutes = v.get<double>();
      else if (key == "snapshot_every") snapshot_every = v.get<std::size_t>();
      else throw DataError("unknown serve option '" + key + "'");
    } catch (const Json::exception&) {
      throw DataError("serve option '" + key + "' has the wrong type");
    }
  }
  if (!(lease_minutes > 0.0)) throw DataError("lease_minutes must be positive");
}

void Settings::apply(const Json& j) {
  if (!j.is_object()) throw DataError("config must be a JSON object");
  for (const auto& [section, body] : j.items()) {
    if (section == "clean") clean.apply(body);
    else if (section == "preselect") preselect.apply(body);
    else if (section == "eval") eval.apply(body);
    else if (section == "serve") serve.apply(body);
    else throw DataError("unknown config section '" + section + "'");
  }
}

void Settings::apply_file(const std::filesystem::path& path) {
  auto in = ingest::open_input(path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  apply(j);
}

void Settings::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw DataError("override '" + assignment + "' is not section.key=value");
  }
  const auto section = assignment.substr(0, dot);
  const auto key = assignment.substr(dot + 1, eq - dot - 1);
  const auto raw = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(raw);
  } catch (const Json::exception&) {
    value = raw;
  }
  apply({{section, {{key, value}}}});
}

Json Settings::to_json() const {
  return {{"clean", clean.to_json()},
          {"preselect", preselect.to_json()},
          {"eval", eval.to_json()},
          {"serve", serve.to_json()}};
}

std::string Settings::digest() const { return sha256_hex(ingest::canonical_line(to_json())); }

}  // namespace curator
