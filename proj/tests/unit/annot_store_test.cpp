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

#include <fstream>
#include <set>

#include "annot_sim.hpp"
#include "curator/annot/store.hpp"
#include "fixtures.hpp"

namespace curator::annot {
namespace {

using curator::testing::TempDir;

struct ManualClock {
  std::shared_ptr<std::int64_t> now = std::make_shared<std::int64_t>(1000);
  AnnotationStore::Clock fn() const {
    auto n = now;
    return [n] { return *n; };
  }
  void advance(std::int64_t ms) { *now += ms; }
};

AnnotationStore::Options options(const ManualClock& c, std::chrono::milliseconds lease = std::chrono::minutes(30)) {
  AnnotationStore::Options o;
  o.lease = lease;
  o.clock = c.fn();
  return o;
}

const Json kLabels = {{"objects", {"猫"}}, {"actions", {"玩"}}, {"scenes", {"家"}}};

void annotate(AnnotationStore& s, const std::string& who, const std::string& id, Json labels = kLabels,
              Json usertags = {{"relevant", {"萌宠"}}}) {
  s.submit_step(who, id, Step::title_verdict, {{"relevant", true}});
  s.submit_step(who, id, Step::caption_set, {{"caption", "小猫在家里玩"}});
  s.submit_step(who, id, Step::labels_set, labels);
  s.submit_step(who, id, Step::usertags_verified, usertags);
  s.submit_step(who, id, Step::finalize, Json::object());
}

TEST(Queue, DistinctItemsForTwoAnnotators) {
  ManualClock c;
  AnnotationStore s(options(c));
  EXPECT_EQ(s.enqueue({"v1", "v2"}), 2u);
  const auto a = s.next_item("alice");
  const auto b = s.next_item("bob");
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->video_id, "v1");
  EXPECT_EQ(b->video_id, "v2");
  EXPECT_FALSE(s.next_item("carol").has_value());
}

TEST(Queue, EmptyQueue) {
  ManualClock c;
  AnnotationStore s(options(c));
  EXPECT_FALSE(s.next_item("alice").has_value());
  EXPECT_THROW(s.next_item(""), DataError);
}

TEST(Queue, EnqueueOrderNotIdOrder) {
  ManualClock c;
  AnnotationStore s(options(c));
  s.enqueue({"z", "a"});
  EXPECT_EQ(s.next_item("x")->video_id, "z");
  EXPECT_EQ(s.enqueue({"a", "b"}), 1u);
}

TEST(Queue, OwnClaimReServed) {
  ManualClock c;
  AnnotationStore s(options(c));
  s.enqueue({"v1", "v2"});
  EXPECT_EQ(s.next_item("alice")->video_id, "v1");
  EXPECT_EQ(s.next_item("alice")->video_id, "v1");
}

TEST(Lease, ExpiryMakesItemReservable) {
  ManualClock c;
  AnnotationStore s(options(c, std::chrono::milliseconds(100)));
  s.enqueue({"v1"});
  ASSERT_TRUE(s.next_item("alice"));
  s.submit_step("alice", "v1", Step::title_verdict, {{"relevant", true}});
  c.advance(99);
  EXPECT_FALSE(s.next_item("bob").has_value());
  c.advance(1);
  const auto b = s.next_item("bob");
  ASSERT_TRUE(b);
  EXPECT_EQ(b->video_id, "v1");
  EXPECT_EQ(b->steps_done, 0u);  // fresh draft for the new holder
  EXPECT_THROW(s.submit_step("alice", "v1", Step::caption_set, {{"caption", "x"}}), Conflict);
}

TEST(Lease, StepsRenewTheLease) {
  ManualClock c;
  AnnotationStore s(options(c, std::chrono::milliseconds(100)));
  s.enqueue({"v1"});
  s.next_item("alice");
  c.advance(80);
  s.submit_step("alice", "v1", Step::title_verdict, {{"relevant", true}});
  c.advance(80);
  EXPECT_NO_THROW(s.submit_step("alice", "v1", Step::caption_set, {{"caption", "x"}}));
}

TEST(Lease, DefaultIsThirtyMinutes) {
  AnnotationStore::Options o;
  EXPECT_EQ(o.lease, std::chrono::minutes(30));
}

TEST(Steps, TitleRejectSkipsVideo) {
  ManualClock c;
  AnnotationStore s(options(c));
  s.enqueue({"v1"});
  s.next_item("alice");
  const auto r = s.submit_step("alice", "v1", Step::title_verdict, {{"relevant", false}});
  EXPECT_EQ(r.item.state, ItemState::title_rejected);
  EXPECT_THROW(s.submit_step("alice", "v1", Step::caption_set, {{"caption", "x"}}), Conflict);
  EXPECT_FALSE(s.next_item("alice").has_value());
}

TEST(Steps, EmptySceneDiscards) {
  ManualClock c;
  AnnotationStore s(options(c));
  s.enqueue({"v1"});
  s.next_item("alice");
  annotate(s, "alice", "v1", {{"objects", {"猫"}}, {"actions", {"玩"}}, {"scenes", Json::array()}});
  EXPECT_EQ(s.item("v1")->state, ItemState::discarded);
  EXPECT_THROW(s.review("rev", "v1", Json::object(), Json::object()), Conflict);
}

TEST(Steps, EmptyUserTagsDiscard) {
  ManualClock c;
  AnnotationStore s(options(c));
  s.enqueue({"v1"});
  s.next_item("alice");
  annotate(s, "alice", "v1", kLabels, {{"relevant", Json::array()}});
  EXPECT_EQ(s.item("v1")->state, ItemState::discarded);
}

TEST(Steps, FullSequenceAnnotates) {
  ManualClock c;
  AnnotationStore s(options(c));
  s.enqueue({"v1"});
  s.next_item("alice");
  annotate(s, "alice", "v1");
  const auto it = s.item("v1");
  EXPECT_EQ(it->state, ItemState::annotated);
  EXPECT_FALSE(it->claim.has_value());
  EXPECT_TRUE(check(it->draft).empty());
  EXPECT_TRUE(it->draft.title_relevant);
  EXPECT_EQ(it->draft.caption.at(Language::zh), "小猫在家里玩");
}

TEST(Steps, OrderAndClaimEnforced) {
  ManualClock c;
  AnnotationStore s(options(c));
  s.enqueue({"v1", "v2"});
  s.next_item("alice");
  EXPECT_THROW(s.submit_step("alice", "v1", Step::caption_set, {{"caption", "x"}}), Conflict);
  EXPECT_THROW(s.submit_step("bob", "v1", Step::title_verdict, {{"relevant", true}}), Conflict);
  EXPECT_THROW(s.submit_step("alice", "v2", Step::title_verdict, {{"relevant", true}}), Conflict);
  EXPECT_THROW(s.submit_step("alice", "nope", Step::title_verdict, {{"relevant", true}}), NotFound);
  EXPECT_THROW(s.submit_step("alice", "v1", Step::title_verdict, {{"relevant", "yes"}}), DataError);
  EXPECT_NO_THROW(s.submit_step("alice", "v1", Step::title_verdict, {{"relevant", true}}));
  EXPECT_THROW(s.submit_step("alice", "v1", Step::title_verdict, {{"relevant", true}}), Conflict);
}

TEST(Steps, LongCaptionWarnsButIsAccepted) {
  ManualClock c;
  AnnotationStore s(options(c));
  s.enqueue({"v1"});
  s.next_item("alice");
  s.submit_step("alice", "v1", Step::title_verdict, {{"relevant", true}});
  std::string longer;
  for (int i = 0; i < 81; ++i) longer += "猫";
  const auto r = s.submit_step("alice", "v1", Step::caption_set, {{"caption", longer}});
  EXPECT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.item.draft.caption.at(Language::zh), longer);
  std::string exact;
  for (int i = 0; i < 80; ++i) exact += "猫";
  s.enqueue({"v2"});
  s.submit_step("alice", "v1", Step::labels_set, kLabels);
  s.submit_step("alice", "v1", Step::usertags_verified, {{"relevant", {"x"}}});
  s.submit_step("alice", "v1", Step::finalize, Json::object());
  s.next_item("alice");
  s.submit_step("alice", "v2", Step::title_verdict, {{"relevant", true}});
  EXPECT_TRUE(s.submit_step("alice", "v2", Step::caption_set, {{"caption", exact}}).warnings.empty());
}

TEST(Review, FixAndTranslate) {
  ManualClock c;
  AnnotationStore s(options(c));
  s.enqueue({"v1"});
  s.next_item("alice");
  annotate(s, "alice", "v1");
  const auto before = s.events().size();
  const auto r = s.review("rev", "v1", {{"labels", {{"object", {"小猫"}}}}},
                          {{"caption", "a kitten plays at home"},
                           {"labels", {{"object", {"kitten"}}, {"scene", {"home"}}}}});
  EXPECT_EQ(s.events().size(), before + 1);
  EXPECT_EQ(s.events().back().kind, EventKind::review_fix);
  EXPECT_EQ(r.state, ItemState::reviewed);
  EXPECT_EQ(r.draft.labels_for(Aspect::object, Language::zh), std::vector<std::string>{"小猫"});
  EXPECT_EQ(r.draft.labels_for(Aspect::object, Language::en), std::vector<std::string>{"kitten"});
  EXPECT_EQ(r.draft.caption.at(Language::en), "a kitten plays at home");
  EXPECT_EQ(r.draft.caption.at(Language::zh), "小猫在家里玩");
  EXPECT_THROW(s.review("rev", "v1", Json::object(), Json::object()), Conflict);
}

TEST(Review, CannotEmptyAnAspect) {
  ManualClock c;
  AnnotationStore s(options(c));
  s.enqueue({"v1", "v2"});
  s.next_item("alice");
  annotate(s, "alice", "v1");
  EXPECT_THROW(s.review("rev", "v1", {{"labels", {{"scene", Json::array()}}}}, Json::object()), Conflict);
  EXPECT_EQ(s.item("v1")->state, ItemState::annotated);
  EXPECT_THROW(s.review("rev", "v2", Json::object(), Json::object()), Conflict);
  EXPECT_THROW(s.review("rev", "v9", Json::object(), Json::object()), NotFound);
}

TEST(Export, OnlyReviewedSortedWithTrailer) {
  ManualClock c;
  AnnotationStore s(options(c));
  EXPECT_TRUE(s.export_groundtruth().records.empty());
  EXPECT_EQ(s.export_groundtruth().trailer.count, 0u);
  s.enqueue({"v3", "v1", "v2", "v4"});
  for (int i = 0; i < 4; ++i) {
    const auto it = s.next_item("alice");
    annotate(s, "alice", it->video_id, {{"objects", {"猫", "o" + std::to_string(i)}}, {"actions", {"玩"}}, {"scenes", {"家"}}});
  }
  for (const std::string id : {"v2", "v3", "v1"}) s.review("rev", id, Json::object(), {{"labels", {{"action", {"play"}}}}});
  const auto ex = s.export_groundtruth();
  ASSERT_EQ(ex.records.size(), 3u);
  EXPECT_EQ(ex.records[0].video_id, "v1");
  EXPECT_EQ(ex.records[1].video_id, "v2");
  EXPECT_EQ(ex.records[2].video_id, "v3");
  // Independent set-union scan over the exported records.
  std::map<std::pair<Aspect, Language>, std::set<std::string>> seen;
  for (const auto& g : ex.records) {
    EXPECT_TRUE(check(g).empty());
    for (Aspect a : kAspects) {
      for (Language l : {Language::zh, Language::en}) {
        for (const auto& x : g.labels_for(a, l)) seen[{a, l}].insert(x);
      }
    }
  }
  for (Aspect a : kAspects) {
    for (Language l : {Language::zh, Language::en}) {
      EXPECT_EQ(ex.trailer.vocab.at(a).at(l), (seen[{a, l}].size()));
    }
  }
  EXPECT_EQ(ex.trailer.vocab.at(Aspect::object).at(Language::zh), 4u);
  const auto j = ex.trailer.to_json();
  EXPECT_EQ(j["trailer"]["count"], 3);
}

TEST(Stats, CountsAndRecentLabels) {
  ManualClock c;
  AnnotationStore s(options(c));
  s.enqueue({"v1", "v2", "v3"});
  s.next_item("alice");
  annotate(s, "alice", "v1");
  s.next_item("bob");
  const auto st = s.stats();
  EXPECT_EQ(st.states.at(ItemState::annotated), 1u);
  EXPECT_EQ(st.states.at(ItemState::pending), 2u);
  EXPECT_EQ(st.claimed, 1u);
  EXPECT_EQ(st.available, 1u);
  EXPECT_EQ(st.recent_labels.at(Aspect::object), std::vector<std::string>{"猫"});
  EXPECT_EQ(st.recent_labels.at(Aspect::user_tag), std::vector<std::string>{"萌宠"});
  EXPECT_EQ(st.last_seq, s.events().back().seq);
}

TEST(Persistence, LogReplayRestoresState) {
  TempDir dir;
  ManualClock c;
  auto o = options(c);
  o.log_path = dir.path() / "events.jsonl";
  {
    AnnotationStore s(o);
    s.enqueue({"v1", "v2"});
    s.next_item("alice");
    annotate(s, "alice", "v1");
    s.next_item("bob");
    s.submit_step("bob", "v2", Step::title_verdict, {{"relevant", true}});
  }
  AnnotationStore again(o);
  const auto items = again.items();
  EXPECT_EQ(items.at("v1").state, ItemState::annotated);
  EXPECT_EQ(items.at("v2").steps_done, 1u);
  EXPECT_EQ(items.at("v2").claim->annotator, "bob");
  EXPECT_EQ(replay(read_event_log(*o.log_path)), items);
  // New events continue the sequence.
  again.submit_step("bob", "v2", Step::caption_set, {{"caption", "x"}});
  const auto ev = read_event_log(*o.log_path);
  for (std::size_t i = 1; i < ev.size(); ++i) EXPECT_EQ(ev[i].seq, ev[i - 1].seq + 1);
}

TEST(Persistence, SnapshotPlusTailEqualsFullReplay) {
  TempDir dir;
  ManualClock c;
  auto o = options(c);
  o.log_path = dir.path() / "events.jsonl";
  o.snapshot_every = 4;
  ItemMap live;
  {
    AnnotationStore s(o);
    s.enqueue({"v1", "v2", "v3"});
    s.next_item("alice");
    annotate(s, "alice", "v1");
    s.next_item("alice");
    s.submit_step("alice", "v2", Step::title_verdict, {{"relevant", false}});
    live = s.items();
  }
  ASSERT_TRUE(std::filesystem::exists(AnnotationStore::snapshot_path(*o.log_path)));
  AnnotationStore again(o);
  EXPECT_EQ(again.items(), live);
  EXPECT_EQ(replay(read_event_log(*o.log_path)), live);
}

TEST(Persistence, CorruptLogIsDataError) {
  TempDir dir;
  const auto log = dir.path() / "events.jsonl";
  {
    std::ofstream out(log);
    out << R"({"seq":2,"ts":1,"annotator":"","video_id":"v1","kind":"enqueue","payload":{}})" "\n"
        << R"({"seq":1,"ts":1,"annotator":"","video_id":"v2","kind":"enqueue","payload":{}})" "\n";
  }
  ManualClock c;
  auto o = options(c);
  o.log_path = log;
  EXPECT_THROW(AnnotationStore s(o), DataError);
}

TEST(Events, JsonRoundTrip) {
  AnnotationEvent e{7, 123, "alice", "v1", EventKind::labels_set, {{"objects", {"猫"}}}};
  EXPECT_EQ(AnnotationEvent::from_json(e.to_json()), e);
  EXPECT_THROW(AnnotationEvent::from_json(Json{{"seq", 1}}), DataError);
  for (auto k : {EventKind::enqueue, EventKind::claim, EventKind::review_fix, EventKind::finalize}) {
    EXPECT_EQ(parse_event_kind(to_string(k)), k);
  }
}

TEST(Concurrency, RandomInterleavingsReplayExactly) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    TempDir dir;
    auto clock = std::make_shared<curator::testing::TickClock>();
    AnnotationStore::Options o;
    o.lease = std::chrono::milliseconds(400);
    o.log_path = dir.path() / "events.jsonl";
    o.snapshot_every = 37;
    o.clock = [clock] { return (*clock)(); };
    ItemMap live;
    {
      AnnotationStore s(o);
      std::vector<std::string> ids;
      for (int i = 0; i < 50; ++i) ids.push_back("v" + std::to_string(100 + i));
      s.enqueue(ids);
      const auto stats = curator::testing::simulate_annotators(s, 4, seed);
      EXPECT_GT(stats.steps, 50u);
      live = s.items();
      EXPECT_EQ(replay(s.events()), live);
      const auto audit = curator::testing::audit_event_log(s.events());
      EXPECT_TRUE(audit.empty()) << audit.front();
      for (const auto& g : s.export_groundtruth().records) EXPECT_TRUE(check(g).empty());
      for (const auto& [id, it] : live) EXPECT_NE(it.state, ItemState::pending) << id;
    }
    EXPECT_EQ(replay(read_event_log(*o.log_path)), live);
    AnnotationStore restored(o);
    EXPECT_EQ(restored.items(), live);
  }
}

}  // namespace
}  // namespace curator::annot
