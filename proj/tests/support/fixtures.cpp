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

#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <random>

#include "curator/ingest.hpp"

namespace curator::testing {
namespace {

constexpr std::int64_t kW = 1280, kH = 720;
constexpr int kFrames = 8;

const std::map<Dimension, std::vector<std::string>> kLabels = {
    {Dimension::object, {"猫", "狗", "蛋糕", "汽车", "花", "手机"}},
    {Dimension::action, {"跳舞", "做饭", "跑步", "唱歌", "游泳", "画画"}},
    {Dimension::scene, {"厨房", "公园", "街道", "海边", "教室", "山顶"}},
};

TitleToken tok(std::string s, PartOfSpeech pos, std::optional<std::size_t> head = std::nullopt,
               std::optional<DepRelation> rel = std::nullopt) {
  return {std::move(s), pos, head, rel};
}

std::vector<TitleToken> good_title(std::mt19937_64& rng) {
  switch (rng() % 4) {
    case 0:
      return {tok("吃", PartOfSpeech::verb), tok("火锅", PartOfSpeech::noun)};
    case 1:
      return {tok("我", PartOfSpeech::other, 1, DepRelation::subject_verb),
              tok("做", PartOfSpeech::verb),
              tok("蛋糕", PartOfSpeech::noun, 1, DepRelation::verb_object)};
    case 2:
      return {tok("可爱", PartOfSpeech::adjective, 1, DepRelation::modifier_head),
              tok("小猫", PartOfSpeech::noun), tok("！", PartOfSpeech::other)};
    default:
      return {tok("名场面", PartOfSpeech::noun), tok("遛", PartOfSpeech::verb),
              tok("狗", PartOfSpeech::noun, 1, DepRelation::verb_object)};
  }
}

std::vector<TitleToken> empty_title(std::mt19937_64& rng) {
  switch (rng() % 3) {
    case 0:
      return {tok("名场面", PartOfSpeech::noun)};
    case 1:
      return {tok("觉得", PartOfSpeech::mental_verb), tok("好", PartOfSpeech::adjective)};
    default:
      return {tok("😂", PartOfSpeech::other), tok("！！", PartOfSpeech::other)};
  }
}

FaceBox small_face(std::mt19937_64& rng) {
  const std::int64_t x = static_cast<std::int64_t>(rng() % 1000);
  const std::int64_t y = static_cast<std::int64_t>(rng() % 500);
  return {x, y, 80, 100};
}

// n_heavy of kFrames frames get a large face (or many chars); the rest get
// ordinary content.
std::vector<FrameRecord> frames_for(const std::string& id, std::mt19937_64& rng, int talking,
                                    int mosaic_faces, int heavy_text) {
  std::vector<int> order(kFrames);
  for (int i = 0; i < kFrames; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<FrameRecord> out(kFrames);
  for (int i = 0; i < kFrames; ++i) {
    auto& f = out[i];
    f.video_id = id;
    f.frame_index = i * 30;
    f.frame_w = kW;
    f.frame_h = kH;
    f.ocr_char_count = static_cast<std::int64_t>(rng() % 51);
    const std::size_t faces = rng() % 4;
    for (std::size_t j = 0; j < faces; ++j) f.face_boxes.push_back(small_face(rng));
  }
  for (int j = 0; j < talking; ++j) {
    auto& f = out[order[j]];
    f.face_boxes = {{100, 50, 1000, 600}};
  }
  for (int j = 0; j < heavy_text; ++j) {
    out[order[j]].ocr_char_count = 51 + static_cast<std::int64_t>(rng() % 150);
  }
  if (mosaic_faces > 0) {
    auto& f = out[order[0]];
    f.face_boxes.clear();
    for (int j = 0; j < mosaic_faces; ++j) f.face_boxes.push_back(small_face(rng));
  }
  return out;
}

}  // namespace

PlantedCorpus make_planted_corpus(std::size_t total, std::size_t per_category,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::optional<RemovalCategory>> plan(total);
  const RemovalCategory cats[] = {RemovalCategory::empty_title, RemovalCategory::face_only,
                                  RemovalCategory::text_heavy, RemovalCategory::content_less};
  std::size_t slot = 0;
  for (auto c : cats) {
    for (std::size_t i = 0; i < per_category && slot < total; ++i) plan[slot++] = c;
  }
  std::shuffle(plan.begin(), plan.end(), rng);

  std::uniform_real_distribution<double> normal_score(0.0, 0.9);
  std::uniform_real_distribution<double> tiny_score(0.0, 0.01);
  std::uniform_real_distribution<double> strong_score(0.95, 1.0);
  PlantedCorpus pc;
  for (std::size_t i = 0; i < total; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "v%04zu", i);
    const std::string id = buf;
    const auto planted = plan[i];
    pc.expected[id] = planted;

    VideoRecord v;
    v.id = id;
    v.duration_s = 5.0 + static_cast<double>(rng() % 80);
    v.file_size_bytes = 1000000 + rng() % 1000000;
    v.title = "title " + id;
    v.user_tags = {kLabels.at(Dimension::object)[rng() % 6], "vlog"};
    pc.videos.push_back(v);

    if (planted == RemovalCategory::empty_title) {
      if (rng() % 4 != 0) pc.sidecars.title_tokens[id] = {id, empty_title(rng)};
    } else {
      pc.sidecars.title_tokens[id] = {id, good_title(rng)};
    }

    int talking = static_cast<int>(rng() % 7), mosaic = 0;
    int heavy = static_cast<int>(rng() % 7);
    if (planted == RemovalCategory::face_only) {
      if (rng() % 2) {
        talking = 7 + static_cast<int>(rng() % 2);
      } else {
        mosaic = 9 + static_cast<int>(rng() % 4);
      }
    }
    if (planted == RemovalCategory::text_heavy) heavy = 7 + static_cast<int>(rng() % 2);
    pc.sidecars.frames[id] = frames_for(id, rng, talking, mosaic, heavy);

    for (const auto& [dim, labels] : kLabels) {
      LabelScoreSet s{id, dim, {}};
      const std::size_t strong = rng() % labels.size();
      for (std::size_t j = 0; j < labels.size(); ++j) {
        if (planted == RemovalCategory::content_less) {
          s.scores[labels[j]] = tiny_score(rng);
        } else {
          s.scores[labels[j]] = j == strong ? strong_score(rng) : normal_score(rng);
        }
      }
      pc.sidecars.label_scores[{id, dim}] = s;
    }

    FeatureVector fv{id, {}};
    for (int j = 0; j < 8; ++j) fv.values.push_back(normal_score(rng) - 0.45);
    pc.sidecars.features[id] = fv;
  }
  return pc;
}

void write_corpus(const PlantedCorpus& corpus, const std::filesystem::path& root) {
  std::filesystem::create_directories(root / "sidecars");
  std::ofstream m(root / "manifest.jsonl");
  ingest::write_manifest(m, corpus.videos);
  ingest::save_sidecars(root / "sidecars", corpus.sidecars);
}

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("curator-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace curator::testing
