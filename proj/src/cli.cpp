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

#include "curator/cli.hpp"

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "curator/annot/server.hpp"
#include "curator/annot/store.hpp"
#include "curator/clean.hpp"
#include "curator/config.hpp"
#include "curator/error.hpp"
#include "curator/ingest.hpp"
#include "curator/metrics.hpp"
#include "curator/preselect.hpp"
#include "curator/text.hpp"

namespace curator::cli {

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config;
  std::vector<std::string> overrides;
};

Settings resolve_settings(const CommonArgs& args) {
  Settings s;
  std::string path = args.config;
  if (path.empty()) {
    if (const char* env = std::getenv("CURATOR_CONFIG"); env != nullptr) path = env;
  }
  if (!path.empty()) s.apply_file(path);
  for (const auto& o : args.overrides) s.apply_override(o);
  return s;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "JSON config file (default: $CURATOR_CONFIG)");
  cmd->add_option("--set", args.overrides, "Override one setting, e.g. clean.ocr_char_threshold=10");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void write_json(const fs::path& path, const Json& j) {
  auto out = ingest::open_output(path);
  out << j.dump(2, ' ', false, Json::error_handler_t::replace) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// Raised when inputs disagree on ids; lists every offender.
[[noreturn]] void id_mismatch(const std::string& what, const std::set<std::string>& offenders) {
  std::string msg = what + ":";
  std::size_t shown = 0;
  for (const auto& id : offenders) {
    if (shown++ == 50) {
      msg += " ... (" + std::to_string(offenders.size()) + " total)";
      break;
    }
    msg += " " + id;
  }
  throw DataError(msg);
}

// ---- clean -----------------------------------------------------------------

struct CleanArgs {
  CommonArgs common;
  std::string manifest, sidecars, out;
  unsigned threads = 0;
};

int command_clean(const CleanArgs& a, std::ostream& out, std::ostream& err) {
  auto settings = resolve_settings(a.common);
  if (a.threads != 0) settings.clean.threads = a.threads;
  settings.clean.validate();

  const auto corpus = ingest::load_manifest(a.manifest);
  const auto sidecars = ingest::load_sidecars(a.sidecars, corpus);
  const auto report = validate_corpus(corpus, sidecars);
  ensure_dir(a.out);
  write_json(fs::path(a.out) / "validation.json", report.to_json());
  if (!report.ok()) {
    for (const auto& i : report.issues) {
      if (i.severity == Severity::error) err << "invalid: " << i.video_id << ": " << i.message << '\n';
    }
    return kDomainError;
  }

  const auto result = clean::run_pipeline(corpus, sidecars, settings.clean);
  {
    auto vout = ingest::open_output(fs::path(a.out) / "verdicts.jsonl");
    for (const auto& v : result.verdicts) vout << ingest::canonical_line(ingest::encode(v)) << '\n';
    if (!vout) throw IoError("write failed: verdicts.jsonl");
  }
  auto summary = result.summary.to_json();
  summary["config_digest"] = settings.digest();
  write_json(fs::path(a.out) / "summary.json", summary);

  const auto& s = result.summary;
  out << "clean: " << s.input << " in, " << s.kept << " kept";
  for (const auto& [c, n] : s.removed) out << ", " << to_string(c) << " " << n;
  out << '\n';
  return kOk;
}

// ---- preselect -------------------------------------------------------------

struct PreselectArgs {
  CommonArgs common;
  std::string manifest, sidecars, verdicts, out;
  std::optional<std::uint64_t> seed;
};

int command_preselect(const PreselectArgs& a, std::ostream& out, std::ostream&) {
  auto settings = resolve_settings(a.common);
  if (a.seed) settings.preselect.seed = *a.seed;

  auto corpus = ingest::load_manifest(a.manifest);
  const auto sidecars = ingest::load_sidecars(a.sidecars, corpus);
  if (!a.verdicts.empty()) {
    std::set<std::string> kept;
    for (const auto& v : ingest::load_verdicts(a.verdicts)) {
      if (v.kept()) kept.insert(v.video_id);
    }
    std::erase_if(corpus, [&](const VideoRecord& r) { return !kept.count(r.id); });
  }
  const auto result = preselect::preselect_candidates(corpus, sidecars.features, settings.preselect);

  ensure_dir(a.out);
  {
    auto cout_ = ingest::open_output(fs::path(a.out) / "candidates.jsonl");
    for (const auto& c : result.candidates) {
      cout_ << ingest::canonical_line({{"video_id", c.video_id}, {"voted_tags", c.voted_tags}}) << '\n';
    }
  }
  auto summary = result.summary();
  summary["config"] = settings.preselect.to_json();
  summary["config_digest"] = settings.digest();
  write_json(fs::path(a.out) / "preselect_summary.json", summary);
  out << "preselect: " << result.scanned << " scanned, " << result.eligible << " eligible, "
      << result.candidates.size() << " candidates\n";
  return kOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  CommonArgs common;
  std::string task;
  std::string predictions, groundtruth, sim, sim_matrix, truth, captions, manifest, out;
  std::string track = "content";
  std::string lang;
};

metrics::MetricReport eval_tagging(const EvalArgs& a, const Settings& s) {
  if (a.predictions.empty() || a.groundtruth.empty()) {
    throw DataError("tagging needs --predictions and --groundtruth");
  }
  const auto gt = ingest::load_groundtruth(a.groundtruth);
  std::map<std::string, const GroundTruth*> gt_by_id;
  for (const auto& g : gt) gt_by_id[g.video_id] = &g;

  std::map<Aspect, std::map<std::string, std::vector<RankedItem>>> preds;
  ingest::for_each_line(fs::path(a.predictions), [&](std::size_t, const Json& j) {
    const auto id = j.at("video_id").get<std::string>();
    const auto aspect = parse_aspect(j.at("dimension").get<std::string>());
    std::vector<RankedItem> items;
    for (const auto& pair : j.at("ranking")) {
      items.push_back({pair.at(0).get<std::string>(), pair.at(1).get<double>()});
    }
    if (!preds[aspect].emplace(id, std::move(items)).second) {
      throw DataError("duplicate prediction for " + id + " / " + std::string(to_string(aspect)));
    }
  });

  std::set<std::string> offenders;
  for (const auto& [aspect, by_id] : preds) {
    for (const auto& [id, _] : by_id) {
      if (!gt_by_id.count(id)) offenders.insert(id);
    }
    for (const auto& g : gt) {
      if (!by_id.count(g.video_id)) offenders.insert(g.video_id);
    }
  }
  if (!offenders.empty()) id_mismatch("prediction/ground-truth id mismatch", offenders);

  std::optional<SimilarityTable> sim;
  if (!a.sim.empty()) {
    SimilarityTable t;
    ingest::for_each_line(fs::path(a.sim), [&](std::size_t, const Json& j) {
      t.set(j.at("source").get<std::string>(), j.at("target").get<std::string>(),
            j.at("sim").get<double>());
    });
    sim = std::move(t);
  }

  metrics::MetricReport report;
  report.task = metrics::Task::tagging;
  Json per = Json::object();
  double sum = 0.0;
  for (const auto& [aspect, by_id] : preds) {
    std::vector<std::string> vocab;
    if (sim) {
      std::set<std::string> v;
      for (const auto& g : gt) {
        const auto& l = g.labels_for(aspect, s.eval.lang);
        v.insert(l.begin(), l.end());
      }
      vocab.assign(v.begin(), v.end());
    }
    std::vector<metrics::TaggingInstance> inst;
    std::size_t skipped = 0, missing_pairs = 0;
    for (const auto& g : gt) {
      const auto& labels = g.labels_for(aspect, s.eval.lang);
      if (labels.empty()) {
        ++skipped;
        continue;
      }
      const auto& items = by_id.at(g.video_id);
      RankedPrediction pred;
      if (sim) {
        RankedPrediction closed(g.video_id, items);
        std::vector<RankedItem> top(closed.ranking().begin(),
                                    closed.ranking().begin() +
                                        static_cast<std::ptrdiff_t>(std::min(s.eval.transfer_top_k, closed.size())));
        auto t = metrics::transfer_scores(g.video_id, top, vocab, *sim);
        missing_pairs += t.missing_pairs;
        pred = std::move(t.ranking);
      } else {
        pred = RankedPrediction(g.video_id, items);
      }
      inst.push_back({std::move(pred), std::set<std::string>(labels.begin(), labels.end())});
    }
    if (inst.empty()) throw DataError("no ground-truth labels for " + std::string(to_string(aspect)));
    const double map = metrics::mean_ap(inst);
    const std::string name(to_string(aspect));
    report.scores[name] = 100.0 * map;
    report.raw_scores[name] = map;
    per[name] = {{"videos", inst.size()}, {"skipped_no_labels", skipped}, {"missing_sim_pairs", missing_pairs}};
    sum += 100.0 * map;
  }
  if (preds.empty()) throw DataError("no predictions");
  report.overall = sum / static_cast<double>(preds.size());
  report.extra = {{"lang", to_string(s.eval.lang)}, {"transfer", sim.has_value()}, {"dimensions", per}};
  return report;
}

metrics::MetricReport eval_retrieval(const EvalArgs& a) {
  if (a.sim_matrix.empty()) throw DataError("retrieval needs --sim-matrix");
  metrics::SimMatrix m;
  {
    auto in = ingest::open_input(a.sim_matrix);
    try {
      const auto j = Json::parse(in);
      m.query_ids = j.at("query_ids").get<std::vector<std::string>>();
      m.video_ids = j.at("video_ids").get<std::vector<std::string>>();
      m.rows = j.at("rows").get<std::vector<std::vector<double>>>();
    } catch (const Json::exception& e) {
      throw DataError(a.sim_matrix + ": " + e.what());
    }
  }
  m.validate();
  std::map<std::string, std::string> truth;
  if (!a.truth.empty()) {
    ingest::for_each_line(fs::path(a.truth), [&](std::size_t, const Json& j) {
      truth[j.at("query_id").get<std::string>()] = j.at("video_id").get<std::string>();
    });
  } else {
    for (const auto& q : m.query_ids) truth[q] = q;  // query i describes video i
  }
  const std::set<std::string> queries(m.query_ids.begin(), m.query_ids.end());
  const std::set<std::string> videos(m.video_ids.begin(), m.video_ids.end());
  std::set<std::string> offenders;
  for (const auto& [q, v] : truth) {
    if (!queries.count(q)) offenders.insert(q);
    if (!videos.count(v)) offenders.insert(v);
  }
  if (!offenders.empty()) id_mismatch("retrieval truth/matrix id mismatch", offenders);

  const auto r = metrics::recall_at(m, truth);
  metrics::MetricReport report;
  report.task = metrics::Task::retrieval;
  for (const auto& [n, v] : r.recall) report.scores["R@" + std::to_string(n)] = v;
  report.scores["SumR"] = r.sum;
  report.overall = r.sum;
  report.extra = {{"track", a.track}, {"queries", r.queries}, {"videos", m.video_ids.size()}};
  return report;
}

metrics::MetricReport eval_caption(const EvalArgs& a, const Settings& s) {
  if (a.captions.empty()) throw DataError("caption needs --captions");
  struct Row {
    std::string id;
    metrics::SegmentedCaption hyp;
    std::optional<metrics::SegmentedCaption> ref;
  };
  auto caption_of = [](const Json& j, const char* text_key, const char* tokens_key) {
    auto raw = j.at(text_key).get<std::string>();
    if (j.contains(tokens_key)) {
      return metrics::SegmentedCaption::from_tokens(
          std::move(raw), j.at(tokens_key).get<std::vector<std::string>>());
    }
    return metrics::SegmentedCaption::from_raw(std::move(raw));
  };
  std::vector<Row> rows;
  std::set<std::string> ids;
  ingest::for_each_line(fs::path(a.captions), [&](std::size_t, const Json& j) {
    Row r;
    r.id = j.at("video_id").get<std::string>();
    if (!ids.insert(r.id).second) throw DataError("duplicate caption row for " + r.id);
    r.hyp = caption_of(j, "hyp", "hyp_tokens");
    if (j.contains("ref")) r.ref = caption_of(j, "ref", "ref_tokens");
    rows.push_back(std::move(r));
  });

  // References from annotation outputs override the file's "ref" field.
  std::map<std::string, std::string> external;
  std::string ref_source = "captions_file";
  if (a.track == "content" && !a.groundtruth.empty()) {
    for (const auto& g : ingest::load_groundtruth(a.groundtruth)) {
      if (auto it = g.caption.find(s.eval.lang); it != g.caption.end()) external[g.video_id] = it->second;
    }
    ref_source = "groundtruth_caption";
  } else if (a.track == "beyond" && !a.manifest.empty()) {
    for (const auto& v : ingest::load_manifest(a.manifest)) external[v.id] = v.title;
    ref_source = "user_title";
  }
  std::set<std::string> offenders;
  if (ref_source != "captions_file") {
    for (auto& r : rows) {
      auto it = external.find(r.id);
      if (it == external.end()) {
        offenders.insert(r.id);
        continue;
      }
      r.ref = metrics::SegmentedCaption::from_raw(it->second);
    }
    if (ref_source == "groundtruth_caption") {
      for (const auto& [id, _] : external) {
        if (!ids.count(id)) offenders.insert(id);
      }
    }
  } else {
    for (const auto& r : rows) {
      if (!r.ref) offenders.insert(r.id);
    }
  }
  if (!offenders.empty()) id_mismatch("caption/reference id mismatch", offenders);

  std::vector<metrics::SegmentedCaption> hyps, refs;
  for (auto& r : rows) {
    hyps.push_back(r.hyp);
    refs.push_back(*r.ref);
  }
  const double b = metrics::bleu4(hyps, refs, {s.eval.bleu_smoothing});
  const double m = metrics::meteor_exact(hyps, refs);
  const double c = metrics::cider(hyps, refs);

  metrics::MetricReport report;
  report.task = metrics::Task::caption;
  report.raw_scores = {{"BLEU4", b}, {"METEOR", m}, {"CIDEr", c}};
  report.scores = {{"BLEU4", 100.0 * b}, {"METEOR", 100.0 * m}, {"CIDEr", 10.0 * c}};
  report.overall = metrics::caption_overall(100.0 * b, 100.0 * m, 10.0 * c);
  report.extra = {{"track", a.track},
                  {"items", rows.size()},
                  {"references", ref_source},
                  {"meteor_variant", "exact"},
                  {"cider_variant", "vanilla"},
                  {"bleu_smoothing", s.eval.bleu_smoothing}};
  return report;
}

int command_eval(const EvalArgs& a, std::ostream& out, std::ostream&) {
  auto settings = resolve_settings(a.common);
  if (!a.lang.empty()) settings.eval.lang = parse_language(a.lang);
  if (a.track != "content" && a.track != "beyond") throw DataError("--track must be content or beyond");

  metrics::MetricReport report;
  if (a.task == "tagging") report = eval_tagging(a, settings);
  else if (a.task == "retrieval") report = eval_retrieval(a);
  else if (a.task == "caption") report = eval_caption(a, settings);
  else throw DataError("unknown eval task '" + a.task + "'");

  auto j = report.to_json();
  j["config_digest"] = settings.digest();
  if (!a.out.empty()) {
    ensure_dir(a.out);
    write_json(fs::path(a.out) / "report.json", j);
  }
  out << a.task << ":";
  for (const auto& [k, v] : report.scores) out << " " << k << "=" << fixed(v);
  out << " overall=" << fixed(report.overall) << '\n';
  return kOk;
}

// ---- stats -----------------------------------------------------------------

struct StatsArgs {
  std::string manifest, groundtruth, out;
};

int command_stats(const StatsArgs& a, std::ostream& out, std::ostream&) {
  const auto corpus = ingest::load_manifest(a.manifest);
  if (corpus.empty()) throw DataError("manifest is empty");
  std::vector<double> durations, sizes, title_chars;
  for (const auto& v : corpus) {
    durations.push_back(v.duration_s);
    sizes.push_back(static_cast<double>(v.file_size_bytes));
    title_chars.push_back(static_cast<double>(text::codepoint_count(v.title)));
  }
  Json j{{"videos", corpus.size()},
         {"duration_s", metrics::describe(durations).to_json()},
         {"file_size_bytes", metrics::describe(sizes).to_json()},
         {"title_chars", metrics::describe(title_chars).to_json()}};
  double total_s = 0.0, total_bytes = 0.0;
  for (double d : durations) total_s += d;
  for (double b : sizes) total_bytes += b;
  j["total_hours"] = total_s / 3600.0;
  j["total_bytes"] = total_bytes;

  if (!a.groundtruth.empty()) {
    const auto gt = ingest::load_groundtruth(a.groundtruth);
    Json g = Json::object();
    if (!gt.empty()) {
      for (Aspect asp : kAspects) {
        std::vector<double> counts;
        for (const auto& r : gt) counts.push_back(static_cast<double>(r.labels_for(asp, Language::zh).size()));
        g[std::string(to_string(asp)) + "_labels_per_video"] = metrics::describe(counts).to_json();
      }
      std::vector<double> cap;
      for (const auto& r : gt) {
        if (auto it = r.caption.find(Language::zh); it != r.caption.end()) {
          cap.push_back(static_cast<double>(text::codepoint_count(it->second)));
        }
      }
      if (!cap.empty()) g["caption_chars"] = metrics::describe(cap).to_json();
    }
    g["vocabulary"] = annot::vocabulary_trailer(gt).to_json()["trailer"]["vocab"];
    g["videos"] = gt.size();
    j["groundtruth"] = std::move(g);
  }
  if (!a.out.empty()) {
    ensure_dir(a.out);
    write_json(fs::path(a.out) / "stats.json", j);
  }
  out << j.dump(2, ' ', false, Json::error_handler_t::replace) << '\n';
  return kOk;
}

// ---- serve / export ----------------------------------------------------------

struct ServeArgs {
  CommonArgs common;
  std::string candidates, manifest, log, host = "127.0.0.1", media_url;
  int port = 8080;
  std::optional<double> lease_minutes;
};

std::atomic<annot::AnnotationServer*> g_server{nullptr};

extern "C" void on_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

int command_serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
  auto settings = resolve_settings(a.common);
  if (a.lease_minutes) settings.serve.lease_minutes = *a.lease_minutes;
  if (!(settings.serve.lease_minutes > 0.0)) throw DataError("lease must be positive");

  annot::AnnotationStore::Options opts;
  opts.lease = std::chrono::milliseconds(static_cast<std::int64_t>(settings.serve.lease_minutes * 60000.0));
  opts.log_path = a.log;
  opts.snapshot_every = settings.serve.snapshot_every;
  annot::AnnotationStore store(std::move(opts));

  if (!a.candidates.empty()) {
    std::vector<std::string> ids;
    ingest::for_each_line(fs::path(a.candidates), [&](std::size_t, const Json& j) {
      ids.push_back(j.at("video_id").get<std::string>());
    });
    out << "queued " << store.enqueue(ids) << " new items\n";
  }
  annot::ServerOptions sopts;
  sopts.media_url_prefix = a.media_url;
  if (!a.manifest.empty()) {
    for (auto& v : ingest::load_manifest(a.manifest)) sopts.videos.emplace(v.id, std::move(v));
  }
  annot::AnnotationServer server(store, std::move(sopts));
  g_server.store(&server);
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  out << "serving on " << a.host << ":" << a.port << std::endl;
  const bool ok = server.listen(a.host, a.port);
  g_server.store(nullptr);
  if (!ok) {
    err << "cannot listen on " << a.host << ":" << a.port << '\n';
    return kIoError;
  }
  return kOk;
}

struct ExportArgs {
  std::string log, out;
};

int command_export(const ExportArgs& a, std::ostream& out, std::ostream&) {
  const auto items = annot::replay(annot::read_event_log(a.log));
  const auto ex = annot::export_reviewed(items);
  const auto body = annot::export_lines(ex);
  if (a.out.empty()) {
    out << body;
  } else {
    auto f = ingest::open_output(a.out);
    f << body;
    out << "exported " << ex.records.size() << " records\n";
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curation and evaluation engine for webly-annotated short-video corpora", "curator"};
  app.require_subcommand(1);

  CleanArgs clean_args;
  auto* clean = app.add_subcommand("clean", "Run the four-stage cleaning pipeline");
  add_common(clean, clean_args.common);
  clean->add_option("--manifest", clean_args.manifest, "manifest.jsonl")->required();
  clean->add_option("--sidecars", clean_args.sidecars, "Sidecar directory")->required();
  clean->add_option("--out", clean_args.out, "Output directory")->required();
  clean->add_option("--threads", clean_args.threads, "Worker threads (0 = all cores)");

  PreselectArgs pre_args;
  auto* pre = app.add_subcommand("preselect", "Neighbor-voting candidate preselection");
  add_common(pre, pre_args.common);
  pre->add_option("--manifest", pre_args.manifest)->required();
  pre->add_option("--sidecars", pre_args.sidecars, "Directory holding features.jsonl")->required();
  pre->add_option("--verdicts", pre_args.verdicts, "verdicts.jsonl; restricts to kept videos");
  pre->add_option("--out", pre_args.out)->required();
  pre->add_option("--seed", pre_args.seed);

  EvalArgs eval_args;
  auto* ev = app.add_subcommand("eval", "Evaluate tagging, retrieval or captioning outputs");
  add_common(ev, eval_args.common);
  ev->add_option("task", eval_args.task, "tagging | retrieval | caption")
      ->required()
      ->check(CLI::IsMember({"tagging", "retrieval", "caption"}));
  ev->add_option("--predictions", eval_args.predictions, "predictions.tagging.jsonl");
  ev->add_option("--groundtruth", eval_args.groundtruth, "Exported ground truth");
  ev->add_option("--sim", eval_args.sim, "label_sim.jsonl for closed-vocabulary transfer");
  ev->add_option("--sim-matrix", eval_args.sim_matrix, "Query x video similarity matrix");
  ev->add_option("--truth", eval_args.truth, "Lines of {query_id, video_id}; default identity");
  ev->add_option("--captions", eval_args.captions, "captions.jsonl");
  ev->add_option("--manifest", eval_args.manifest, "Manifest for beyond-content references");
  ev->add_option("--track", eval_args.track, "content | beyond");
  ev->add_option("--lang", eval_args.lang, "zh | en");
  ev->add_option("--out", eval_args.out, "Directory for report.json");

  StatsArgs stats_args;
  auto* st = app.add_subcommand("stats", "Describe a manifest (and ground truth)");
  st->add_option("--manifest", stats_args.manifest)->required();
  st->add_option("--groundtruth", stats_args.groundtruth);
  st->add_option("--out", stats_args.out, "Directory for stats.json");

  ServeArgs serve_args;
  auto* sv = app.add_subcommand("serve", "Run the annotation service");
  add_common(sv, serve_args.common);
  sv->add_option("--log", serve_args.log, "Event log path")->required();
  sv->add_option("--candidates", serve_args.candidates, "candidates.jsonl to enqueue");
  sv->add_option("--manifest", serve_args.manifest, "Video metadata for display");
  sv->add_option("--port", serve_args.port);
  sv->add_option("--host", serve_args.host);
  sv->add_option("--media-url", serve_args.media_url, "Prefix joined with video_id");
  sv->add_option("--lease-minutes", serve_args.lease_minutes);

  ExportArgs export_args;
  auto* ex = app.add_subcommand("export", "Export reviewed ground truth from an event log");
  ex->add_option("--log", export_args.log)->required();
  ex->add_option("--out", export_args.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "curator: " << e.what() << '\n';
    return kDomainError;
  }

  try {
    if (*clean) return command_clean(clean_args, out, err);
    if (*pre) return command_preselect(pre_args, out, err);
    if (*ev) return command_eval(eval_args, out, err);
    if (*st) return command_stats(stats_args, out, err);
    if (*sv) return command_serve(serve_args, out, err);
    if (*ex) return command_export(export_args, out, err);
  } catch (const IoError& e) {
    err << "curator: " << e.what() << '\n';
    return kIoError;
  } catch (const DataError& e) {
    err << "curator: " << e.what() << '\n';
    return kDomainError;
  } catch (const Json::exception& e) {
    err << "curator: " << e.what() << '\n';
    return kDomainError;
  } catch (const fs::filesystem_error& e) {
    err << "curator: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "curator: internal error: " << e.what() << '\n';
    return kDomainError;
  }
  return kDomainError;
}

}  // namespace curator::cli
