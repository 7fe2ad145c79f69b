// tools/voxmeta.cpp

// Copyright 2026 The VoxMeta Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Single binary exposing the pipeline as subcommands. Machine-readable
// summaries go to stdout, logs to stderr. Exit codes: 0 success,
// 1 validation error, 2 I/O error, 3 numeric failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "voxmeta/age.hpp"
#include "voxmeta/baselines.hpp"
#include "voxmeta/common.hpp"
#include "voxmeta/connector.hpp"
#include "voxmeta/consensus.hpp"
#include "voxmeta/csv.hpp"
#include "voxmeta/datasets.hpp"
#include "voxmeta/experiment.hpp"
#include "voxmeta/ingest.hpp"
#include "voxmeta/metrics.hpp"
#include "voxmeta/regression.hpp"
#include "voxmeta/text.hpp"

using nlohmann::ordered_json;
using namespace voxmeta;

namespace {

struct Global {
  std::uint64_t seed = 0;
  int jobs = 0;
  bool force = false;
  bool verbose = false;
  std::string config_path;
  nlohmann::json config;  // flags > config > defaults

  CLI::Option* seed_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;

  bool seed_given = false;

  void log(const std::string& msg) const {
    if (verbose) std::cerr << "[voxmeta] " << msg << "\n";
  }
  std::uint64_t require_seed(const char* subcommand) const {
    if (!seed_given)
      throw ValidationError(std::string(subcommand) +
                            " draws randomness: --seed is required");
    return seed;
  }
};

// Precedence: explicit flag > config file value > built-in default.
template <typename T>
void config_fill(const Global& g, const char* subcommand, const char* key,
                 const CLI::Option* opt, T& value) {
  if (opt && opt->count() > 0) return;
  if (!g.config.is_object()) return;
  const auto sub = g.config.find(subcommand);
  if (sub != g.config.end() && sub->is_object() && sub->contains(key)) {
    value = sub->at(key).get<T>();
    return;
  }
  if (g.config.contains(key)) value = g.config.at(key).get<T>();
}

void apply_global_config(Global& g) {
  if (!g.config_path.empty()) {
    std::ifstream in(g.config_path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + g.config_path);
    g.config = nlohmann::json::parse(in, nullptr, false);
    if (g.config.is_discarded())
      throw ValidationError("malformed config file " + g.config_path);
  }
  if (g.seed_opt->count() == 0 && g.config.is_object() &&
      g.config.contains("seed")) {
    g.seed = g.config["seed"].get<std::uint64_t>();
    g.seed_given = true;
  } else {
    g.seed_given = g.seed_opt->count() > 0;
  }
  config_fill(g, "", "jobs", g.jobs_opt, g.jobs);
#ifdef _OPENMP
  if (g.jobs > 0) omp_set_num_threads(g.jobs);
#endif
}

void emit(const ordered_json& summary) { std::cout << summary.dump() << "\n"; }

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  return in;
}

void write_file(const std::string& path, const std::string& text, bool force) {
  if (!force) {
    std::ifstream probe(path);
    if (probe.good())
      throw ValidationError("refusing to overwrite " + path +
                            " (pass --force to allow)");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path);
  out << text;
  if (!out.flush()) throw IoError("failed writing " + path);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ValidationError("bad numeric list entry '" + item + "'");
    }
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

// ---------------------------------------------------------------- ingest --

struct IngestArgs {
  std::string gkg, dbpedia, wikidata, videos, labels, embeddings;
  std::string rejects_out;
  std::string fetch_names, fetch_source, connector_dir, cache_dir, fetch_out;
};

void run_ingest(const Global& g, const IngestArgs& a) {
  ordered_json summary;
  std::vector<RejectEntry> rejects;
  const ingest::ParseOptions opts;

  const auto note = [&](const std::string& file, std::size_t records,
                        std::size_t rejected) {
    summary["inputs"][file] = {{"records", records}, {"rejects", rejected}};
    g.log(file + ": " + std::to_string(records) + " records, " +
          std::to_string(rejected) + " rejects");
  };

  const auto parse_dump = [&](const std::string& path, SourceId source) {
    if (path.empty()) return;
    auto in = open_input(path);
    auto res = ingest::parse_source_dump(in, source, path, opts);
    rejects.insert(rejects.end(), res.rejects.begin(), res.rejects.end());
    note(path, res.items.size(), res.rejects.size());
  };
  parse_dump(a.gkg, SourceId::GKG);
  parse_dump(a.dbpedia, SourceId::DBPedia);
  parse_dump(a.wikidata, SourceId::Wikidata);

  if (!a.videos.empty()) {
    auto in = open_input(a.videos);
    auto res = ingest::parse_video_meta(in, a.videos, opts);
    rejects.insert(rejects.end(), res.rejects.begin(), res.rejects.end());
    note(a.videos, res.items.size(), res.rejects.size());
  }
  if (!a.labels.empty()) {
    auto in = open_input(a.labels);
    auto res = ingest::parse_original_labels(in, a.labels, opts);
    rejects.insert(rejects.end(), res.rejects.begin(), res.rejects.end());
    note(a.labels, res.items.size(), res.rejects.size());
  }
  if (!a.embeddings.empty()) {
    auto in = open_input(a.embeddings);
    const auto recs = ingest::parse_embeddings(in, a.embeddings);
    note(a.embeddings, recs.size(), 0);
  }

  bool any_input = !a.gkg.empty() || !a.dbpedia.empty() || !a.wikidata.empty() ||
                   !a.videos.empty() || !a.labels.empty() || !a.embeddings.empty();

  if (!a.fetch_names.empty()) {
    any_input = true;
    if (a.connector_dir.empty())
      throw ValidationError("--fetch-names needs --connector-dir");
    if (a.cache_dir.empty())
      throw ValidationError(
          "--fetch-names needs --cache-dir (or VOXMETA_CACHE_DIR)");
    SourceId source;
    if (a.fetch_source == "gkg") source = SourceId::GKG;
    else if (a.fetch_source == "dbpedia") source = SourceId::DBPedia;
    else if (a.fetch_source == "wikidata") source = SourceId::Wikidata;
    else throw ValidationError("--fetch-source must be gkg|dbpedia|wikidata");

    ingest::FileConnector connector(a.connector_dir, source);
    ingest::CachedFetcher fetcher(a.cache_dir, connector);
    std::size_t found = 0, absent = 0, unavailable = 0, cached = 0;
    std::ostringstream fetched;
    auto in = open_input(a.fetch_names);
    std::string line;
    while (std::getline(in, line)) {
      const auto key = text::normalize_person_key(line);
      if (key.empty()) continue;
      const auto res = fetcher.fetch(key);
      cached += res.from_cache ? 1 : 0;
      switch (res.status) {
        case ingest::FetchResult::Status::Found:
          ++found;
          fetched << ingest::source_record_to_jsonl(*res.record, line) << "\n";
          break;
        case ingest::FetchResult::Status::Absent: ++absent; break;
        case ingest::FetchResult::Status::Unavailable: ++unavailable; break;
      }
    }
    if (!a.fetch_out.empty()) write_file(a.fetch_out, fetched.str(), g.force);
    summary["fetch"] = {{"source", a.fetch_source},
                        {"found", found},
                        {"absent", absent},
                        {"unavailable", unavailable},
                        {"served_from_cache", cached}};
  }

  if (!any_input)
    throw ValidationError("ingest needs at least one input (see --help)");

  if (!a.rejects_out.empty()) {
    std::ostringstream buf;
    jsonl::write_rejects(buf, rejects);
    write_file(a.rejects_out, buf.str(), g.force);
  }
  summary["total_rejects"] = rejects.size();
  emit(summary);
}

// ------------------------------------------------------------- consensus --

struct ConsensusArgs {
  std::string gkg, dbpedia, wikidata, labels;
  std::string out, divergence_csv, divergence_text, rejects_out;
};

void run_consensus(const Global& g, const ConsensusArgs& a) {
  const ingest::ParseOptions opts;
  std::vector<RejectEntry> rejects;
  std::vector<SourceRecord> records;
  const auto parse_dump = [&](const std::string& path, SourceId source) {
    auto in = open_input(path);
    auto res = ingest::parse_source_dump(in, source, path, opts);
    rejects.insert(rejects.end(), res.rejects.begin(), res.rejects.end());
    records.insert(records.end(), res.items.begin(), res.items.end());
  };
  parse_dump(a.gkg, SourceId::GKG);
  parse_dump(a.dbpedia, SourceId::DBPedia);
  parse_dump(a.wikidata, SourceId::Wikidata);

  auto labels_in = open_input(a.labels);
  auto labels = ingest::parse_original_labels(labels_in, a.labels, opts);
  rejects.insert(rejects.end(), labels.rejects.begin(), labels.rejects.end());

  const auto people = consensus::build_consensus(labels.items, records);
  consensus::write_consensus_csv(a.out, people, g.force);

  const auto report = consensus::compare_with_original(people, labels.items);
  if (!a.divergence_csv.empty())
    consensus::write_divergence_csv(a.divergence_csv, report, g.force);
  const auto text = consensus::format_divergence_text(report);
  if (!a.divergence_text.empty()) write_file(a.divergence_text, text, g.force);
  std::cerr << text;
  if (!a.rejects_out.empty()) {
    std::ostringstream buf;
    jsonl::write_rejects(buf, rejects);
    write_file(a.rejects_out, buf.str(), g.force);
  }

  std::size_t gender_ok = 0, year_ok = 0;
  for (const auto& p : people) {
    gender_ok += p.gender.has_value();
    year_ok += p.birth_year.has_value();
  }
  ordered_json summary;
  summary["persons"] = people.size();
  summary["gender_accepted"] = gender_ok;
  summary["birth_year_accepted"] = year_ok;
  summary["agreed_with_original"] = report.agreed_count;
  summary["relabeled"] = report.relabeled.size();
  summary["m_to_f"] = report.m_to_f;
  summary["f_to_m"] = report.f_to_m;
  summary["trans_vs_binary"] = report.trans_vs_binary;
  summary["reject_lines"] = rejects.size();
  summary["out"] = a.out;
  emit(summary);
}

// ------------------------------------------------------------ derive-age --

struct DeriveAgeArgs {
  std::string videos, consensus_csv;
  std::string out, pairs_out, rejects_out;
};

void run_derive_age(const Global& g, const DeriveAgeArgs& a) {
  const std::uint64_t seed = g.require_seed("derive-age");
  const ingest::ParseOptions opts;
  auto videos_in = open_input(a.videos);
  auto videos = ingest::parse_video_meta(videos_in, a.videos, opts);
  const auto people = consensus::read_consensus_csv(a.consensus_csv);

  const auto build = age::build_triplets(people, videos.items);
  age::write_triplets_csv(a.out, build.triplets, g.force);

  std::size_t pairs_count = 0;
  if (!a.pairs_out.empty()) {
    const auto pairs = age::select_all_single_ages(build.triplets, seed);
    age::write_pairs_csv(a.pairs_out, pairs, g.force);
    pairs_count = pairs.size();
  }
  if (!a.rejects_out.empty()) {
    std::ostringstream buf;
    jsonl::write_rejects(buf, videos.rejects);
    write_file(a.rejects_out, buf.str(), g.force);
  }

  const auto& s = build.summary;
  ordered_json summary;
  summary["videos"] = {{"total", s.videos_total},
                       {"strict", s.videos_strict},
                       {"title_only", s.videos_title_only},
                       {"unconfirmed", s.videos_unconfirmed}};
  summary["candidates"] = s.candidates;
  summary["filtered"] = {{"no_birth_year", s.no_birth_year},
                         {"implausible_chronology", s.implausible_chronology},
                         {"implausible_age", s.implausible_age},
                         {"duplicates_collapsed", s.duplicates_collapsed}};
  summary["triplets"] = s.triplets;
  summary["pairs"] = pairs_count;
  summary["out"] = a.out;
  emit(summary);
}

// ------------------------------------------------------------- histogram --

struct HistogramArgs {
  std::string pairs, out, text_out, edges;
};

void run_histogram(const Global& g, const HistogramArgs& a) {
  const auto pairs = age::read_pairs_csv(a.pairs);
  const auto edges =
      a.edges.empty() ? age::default_bin_edges() : parse_int_list(a.edges);
  const auto hist = age::age_histogram(pairs, edges);
  if (!a.out.empty()) age::write_histogram_csv(a.out, hist, g.force);
  const auto text = age::format_histogram_text(hist);
  if (!a.text_out.empty()) write_file(a.text_out, text, g.force);
  std::cerr << text;

  ordered_json bins = ordered_json::array();
  for (std::size_t i = 0; i < hist.counts.size(); ++i)
    bins.push_back({{"low", hist.edges[i]},
                    {"high", hist.edges[i + 1]},
                    {"count", hist.counts[i]}});
  ordered_json summary;
  summary["bins"] = std::move(bins);
  summary["total"] = pairs.size();
  emit(summary);
}

// ----------------------------------------------------------------- split --

struct SplitArgs {
  std::string embeddings, pairs, out;
  double ratio = 0.6;
  int k = 5;
  std::string require_label = "none";
};

void run_split(const Global& g, const SplitArgs& a) {
  const std::uint64_t seed = g.require_seed("split");
  auto in = open_input(a.embeddings);
  auto records = ingest::parse_embeddings(in, a.embeddings);

  std::map<std::string, ReliabilityTier> tier_by_speaker;
  std::set<std::string> paired_speakers;
  if (!a.pairs.empty()) {
    for (const auto& p : age::read_pairs_csv(a.pairs)) {
      tier_by_speaker[p.speaker_id] = p.tier;
      paired_speakers.insert(p.speaker_id);
    }
  }

  std::set<std::string> eligible, pinned;
  for (const auto& rec : records) {
    if (a.require_label == "age") {
      if (!rec.age && !paired_speakers.count(rec.speaker_id)) continue;
    } else if (a.require_label == "gender") {
      if (!rec.gender ||
          (*rec.gender != Gender::Male && *rec.gender != Gender::Female))
        continue;
    } else if (a.require_label != "none") {
      throw ValidationError("--require-label must be age|gender|none");
    }
    const auto it = tier_by_speaker.find(rec.speaker_id);
    if (it != tier_by_speaker.end() && it->second == ReliabilityTier::TitleOnly)
      pinned.insert(rec.speaker_id);
    else
      eligible.insert(rec.speaker_id);
  }

  const auto split = datasets::make_split({eligible.begin(), eligible.end()},
                                          {pinned.begin(), pinned.end()},
                                          a.ratio, a.k, seed);
  datasets::write_split_json(a.out, split, g.force);

  ordered_json summary;
  summary["train"] = split.train.size();
  summary["test"] = split.test.size();
  summary["k"] = split.k;
  summary["pinned_train_only"] = pinned.size();
  summary["out"] = a.out;
  emit(summary);
}

// ------------------------------------------------------ train / evaluate --

struct MlArgs {
  std::string task, model, embeddings, split, pairs;
  std::string lambda = "cv";
  std::string lambda_grid;
  std::string equalize = "auto";
  bool balance = false;
  std::uint64_t repetitions = 100000;
};

experiment::ExperimentConfig to_config(const Global& g, const MlArgs& a,
                                       experiment::Task task,
                                       regression::ModelKind model) {
  experiment::ExperimentConfig c;
  c.task = task;
  c.model = model;
  c.embeddings = a.embeddings;
  c.pairs = a.pairs;
  c.split = a.split;
  c.seed = g.seed;
  c.baseline_repetitions = a.repetitions;
  c.balance_gender = a.balance || task == experiment::Task::Gender;
  if (a.lambda == "cv") {
    c.lambda_cv = true;
  } else {
    c.lambda_cv = false;
    try {
      c.lambda = std::stod(a.lambda);
    } catch (const std::exception&) {
      throw ValidationError("--lambda must be a number or 'cv'");
    }
  }
  if (!a.lambda_grid.empty()) c.lambda_grid = parse_double_list(a.lambda_grid);
  if (a.equalize == "auto") {
    c.equalize = true;
  } else if (a.equalize == "off") {
    c.equalize = false;
  } else {
    c.equalize = true;
    try {
      c.equalize_n = std::stoi(a.equalize);
    } catch (const std::exception&) {
      throw ValidationError("--equalize must be auto|off|<count>");
    }
  }
  return c;
}

void run_train(const Global& g, const MlArgs& a, const std::string& out) {
  g.require_seed("train");
  const auto task = experiment::task_from_token(a.task);
  const auto model = regression::model_kind_from_token(a.model);
  const auto config = to_config(g, a, task, model);

  const auto prep = experiment::prepare_data(config);
  std::optional<experiment::CvSelection> cv;
  double lambda = config.lambda;
  if (model != regression::ModelKind::OLS && config.lambda_cv) {
    cv = experiment::select_lambda(config, prep.train, prep.split.folds);
    lambda = cv->selected;
  }
  const auto coefs = experiment::fit_model(config, prep.train, lambda);
  regression::save_model(out, coefs, g.seed, "train", g.force);

  ordered_json summary;
  summary["model"] = regression::to_token(model);
  summary["lambda"] = lambda;
  summary["converged"] = coefs.converged;
  summary["train_utterances"] = prep.info.train_utterances;
  summary["train_speakers"] = prep.info.train_speakers;
  summary["dropped_speakers_train"] = prep.info.dropped_train;
  if (cv) {
    summary["cv"] = {{"lambda_grid", cv->grid},
                     {"mean_scores", cv->mean_scores},
                     {"selected_lambda", cv->selected}};
  }
  if (!coefs.warnings.empty()) summary["warnings"] = coefs.warnings;
  summary["out"] = out;
  emit(summary);
}

struct EvaluateArgs {
  MlArgs ml;
  std::string model_file, out, curve_out, baselines_out;
};

void run_evaluate(const Global& g, const EvaluateArgs& a) {
  const auto coefs = regression::load_model(a.model_file);
  const auto task = coefs.model_kind == regression::ModelKind::Logistic
                        ? experiment::Task::Gender
                        : experiment::Task::Age;
  auto ml = a.ml;
  ml.lambda = "0";  // only scoring; no fit happens here
  const auto config = to_config(g, ml, task, coefs.model_kind);
  const auto prep = experiment::prepare_data(config);

  ordered_json summary;
  summary["task"] = experiment::to_token(task);
  summary["model"] = regression::to_token(coefs.model_kind);
  summary["test_utterances"] = prep.info.test_utterances;
  summary["test_speakers"] = prep.info.test_speakers;

  if (task == experiment::Task::Gender) {
    const auto pred =
        regression::classify(coefs, prep.test.rows, prep.test.n, prep.test.d);
    const auto f1 = eval::f1_score(pred, prep.test.y_gender);
    summary["metrics"] = {{"f1", f1.f1},
                          {"precision", f1.precision},
                          {"recall", f1.recall},
                          {"confusion",
                           {{"tp", f1.counts.tp},
                            {"fp", f1.counts.fp},
                            {"fn", f1.counts.fn},
                            {"tn", f1.counts.tn}}}};
  } else {
    const auto pred =
        regression::predict(coefs, prep.test.rows, prep.test.n, prep.test.d);
    summary["metrics"] = {{"mae", eval::mae(pred, prep.test.y_age)}};
    if (!a.curve_out.empty()) {
      const auto curve = eval::mae_by_age(pred, prep.test.labels_int);
      eval::write_curve_csv(a.curve_out, curve, g.force);
      summary["curve"] = a.curve_out;
    }
    if (!a.baselines_out.empty()) {
      const std::uint64_t seed = g.require_seed("evaluate --baselines");
      ordered_json b;
      b["empirical"] = ordered_json::parse(eval::baseline_to_json(
          eval::baseline_empirical(prep.test.labels_int, a.ml.repetitions, seed)));
      b["uniform"] = ordered_json::parse(eval::baseline_to_json(
          eval::baseline_uniform(prep.test.labels_int, a.ml.repetitions, seed)));
      b["fixed"] = ordered_json::parse(eval::baseline_to_json(
          eval::baseline_fixed(prep.test.labels_int)));
      write_file(a.baselines_out, b.dump(2) + "\n", g.force);
      summary["baselines"] = a.baselines_out;
    }
  }
  write_file(a.out, summary.dump(2) + "\n", g.force);
  emit(summary);
}

// -------------------------------------------------------------- baseline --

struct BaselineArgs {
  std::string kind, ages, out;
  std::uint64_t repetitions = 100000;
};

void run_baseline(const Global& g, const BaselineArgs& a) {
  auto in = open_input(a.ages);
  const auto table = csv::read_table(in, a.ages);
  const int age_col = table.column("age");
  if (age_col < 0) throw ValidationError(a.ages + ": no 'age' column");
  std::vector<int> ages;
  ages.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (static_cast<std::size_t>(age_col) >= row.size())
      throw ValidationError(a.ages + ": short row");
    try {
      ages.push_back(std::stoi(row[static_cast<std::size_t>(age_col)]));
    } catch (const std::exception&) {
      throw ValidationError(a.ages + ": bad age value '" +
                            row[static_cast<std::size_t>(age_col)] + "'");
    }
  }

  const auto kind = eval::baseline_kind_from_token(a.kind);
  eval::BaselineResult result;
  if (kind == eval::BaselineKind::FixedValue) {
    result = eval::baseline_fixed(ages);
  } else {
    const std::uint64_t seed = g.require_seed("baseline");
    result = kind == eval::BaselineKind::EmpiricalResample
                 ? eval::baseline_empirical(ages, a.repetitions, seed)
                 : eval::baseline_uniform(ages, a.repetitions, seed);
  }
  const auto text = eval::baseline_to_json(result);
  if (!a.out.empty()) write_file(a.out, text + "\n", g.force);
  std::cout << text << "\n";
}

// ---------------------------------------------------------------- report --

struct ReportArgs {
  std::string experiment, out_dir;
};

void run_report(const Global& g, const ReportArgs& a) {
  auto config = experiment::load_config(a.experiment);
  if (g.seed_given) config.seed = g.seed;
  const auto outcome = experiment::run_experiment(config, a.out_dir, g.force);
  ordered_json summary;
  summary["report_dir"] = outcome.report_dir;
  summary["metric"] = outcome.primary_metric;
  summary["config_hash"] = experiment::config_hash(config);
  emit(summary);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VoxMeta: speaker metadata enrichment and age/gender modeling"};
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  g.seed_opt =
      app.add_option("--seed", g.seed, "seed for all randomized subcommands");
  g.jobs_opt =
      app.add_option("--jobs", g.jobs, "worker thread cap (default: all cores)");
  app.add_flag("--force", g.force, "allow overwriting existing outputs");
  app.add_flag("--verbose", g.verbose, "chatty logging on stderr");
  app.add_option("--config", g.config_path,
                 "JSON config file; explicit flags take precedence");

  IngestArgs ingest_args;
  auto* ingest_cmd = app.add_subcommand("ingest", "parse and validate raw inputs");
  ingest_cmd->add_option("--gkg", ingest_args.gkg, "GKG dump (JSON Lines)");
  ingest_cmd->add_option("--dbpedia", ingest_args.dbpedia, "DBpedia dump");
  ingest_cmd->add_option("--wikidata", ingest_args.wikidata, "Wikidata dump");
  ingest_cmd->add_option("--videos", ingest_args.videos,
                         "video metadata (JSON Lines)");
  ingest_cmd->add_option("--labels", ingest_args.labels,
                         "original corpus labels CSV (speaker_id,name,gender)");
  ingest_cmd->add_option("--embeddings", ingest_args.embeddings, "embeddings CSV");
  ingest_cmd->add_option("--rejects", ingest_args.rejects_out,
                         "write rejects report (JSON Lines)");
  ingest_cmd->add_option("--fetch-names", ingest_args.fetch_names,
                         "query these names (one per line) through a connector");
  ingest_cmd->add_option("--fetch-source", ingest_args.fetch_source,
                         "connector source: gkg|dbpedia|wikidata");
  ingest_cmd->add_option("--connector-dir", ingest_args.connector_dir,
                         "directory of canned connector responses");
  ingest_cmd
      ->add_option("--cache-dir", ingest_args.cache_dir, "fetch cache directory")
      ->envname("VOXMETA_CACHE_DIR");
  ingest_cmd->add_option("--fetch-out", ingest_args.fetch_out,
                         "write fetched records as a source dump");

  ConsensusArgs consensus_args;
  auto* consensus_cmd = app.add_subcommand(
      "consensus", "cross-source gender/birth-year consensus labels");
  consensus_cmd->add_option("--gkg", consensus_args.gkg, "GKG dump")->required();
  consensus_cmd->add_option("--dbpedia", consensus_args.dbpedia, "DBpedia dump")
      ->required();
  consensus_cmd->add_option("--wikidata", consensus_args.wikidata, "Wikidata dump")
      ->required();
  consensus_cmd->add_option("--labels", consensus_args.labels,
                            "original corpus labels CSV")
      ->required();
  consensus_cmd->add_option("--out", consensus_args.out, "consensus CSV")
      ->required();
  consensus_cmd->add_option("--divergence", consensus_args.divergence_csv,
                            "divergence report CSV");
  consensus_cmd->add_option("--divergence-text", consensus_args.divergence_text,
                            "divergence report, human readable");
  consensus_cmd->add_option("--rejects", consensus_args.rejects_out,
                            "rejects report (JSON Lines)");

  DeriveAgeArgs derive_args;
  auto* derive_cmd = app.add_subcommand(
      "derive-age", "confirm recording years and derive age triplets");
  derive_cmd->add_option("--videos", derive_args.videos, "video metadata")
      ->required();
  derive_cmd->add_option("--consensus", derive_args.consensus_csv,
                         "consensus CSV")
      ->required();
  derive_cmd->add_option("--out", derive_args.out, "triplet CSV")->required();
  derive_cmd->add_option("--pairs", derive_args.pairs_out,
                         "single-age-per-speaker CSV (seeded choice)");
  derive_cmd->add_option("--rejects", derive_args.rejects_out,
                         "rejects report (JSON Lines)");

  HistogramArgs hist_args;
  auto* hist_cmd =
      app.add_subcommand("histogram", "age distribution over speaker pairs");
  hist_cmd->add_option("--pairs", hist_args.pairs, "pairs CSV")->required();
  hist_cmd->add_option("--out", hist_args.out, "histogram CSV");
  hist_cmd->add_option("--text", hist_args.text_out, "aligned text table");
  hist_cmd->add_option("--edges", hist_args.edges,
                       "bin edges, default 0,10,...,80,92");

  SplitArgs split_args;
  auto* split_cmd =
      app.add_subcommand("split", "speaker-disjoint holdout split with CV folds");
  split_cmd->add_option("--embeddings", split_args.embeddings, "embeddings CSV")
      ->required();
  split_cmd->add_option("--pairs", split_args.pairs,
                        "pairs CSV carrying reliability tiers");
  split_cmd->add_option("--ratio", split_args.ratio, "train fraction");
  split_cmd->add_option("--k", split_args.k, "number of CV folds");
  split_cmd->add_option("--require-label", split_args.require_label,
                        "age|gender|none: restrict to labeled speakers");
  split_cmd->add_option("--out", split_args.out, "split manifest JSON")
      ->required();

  MlArgs train_args;
  std::string train_out;
  auto* train_cmd = app.add_subcommand("train", "fit a back-end model");
  train_cmd->add_option("--task", train_args.task, "gender|age")->required();
  train_cmd
      ->add_option("--model", train_args.model, "ols|linear|ridge|lasso|logistic")
      ->required();
  train_cmd->add_option("--embeddings", train_args.embeddings, "embeddings CSV")
      ->required();
  train_cmd->add_option("--split", train_args.split, "split manifest JSON")
      ->required();
  train_cmd->add_option("--pairs", train_args.pairs,
                        "pairs CSV (ages + reliability tiers)");
  train_cmd->add_option("--lambda", train_args.lambda, "number or 'cv'");
  train_cmd->add_option("--lambda-grid", train_args.lambda_grid,
                        "comma-separated CV grid");
  train_cmd->add_flag("--balance", train_args.balance,
                      "balance gender counts (always on for gender task)");
  train_cmd->add_option("--equalize", train_args.equalize, "auto|off|<count>");
  train_cmd->add_option("--out", train_out, "model JSON")->required();

  EvaluateArgs eval_args;
  auto* eval_cmd =
      app.add_subcommand("evaluate", "score a trained model on the test side");
  eval_cmd->add_option("--model", eval_args.model_file, "model JSON")->required();
  eval_cmd->add_option("--embeddings", eval_args.ml.embeddings, "embeddings CSV")
      ->required();
  eval_cmd->add_option("--split", eval_args.ml.split, "split manifest JSON")
      ->required();
  eval_cmd->add_option("--pairs", eval_args.ml.pairs,
                       "pairs CSV (ages + reliability tiers)");
  eval_cmd->add_flag("--balance", eval_args.ml.balance,
                     "balance gender counts (always on for gender task)");
  eval_cmd->add_option("--equalize", eval_args.ml.equalize, "auto|off|<count>");
  eval_cmd->add_option("--out", eval_args.out, "metrics JSON")->required();
  eval_cmd->add_option("--curve", eval_args.curve_out, "per-age MAE CSV");
  eval_cmd->add_option("--baselines", eval_args.baselines_out,
                       "guessing baselines JSON");
  eval_cmd->add_option("--repetitions", eval_args.ml.repetitions,
                       "Monte Carlo repetitions for baselines");

  BaselineArgs baseline_args;
  auto* baseline_cmd =
      app.add_subcommand("baseline", "guessing references for MAE");
  baseline_cmd
      ->add_option("--kind", baseline_args.kind, "empirical|uniform|fixed")
      ->required();
  baseline_cmd->add_option("--ages", baseline_args.ages, "CSV with an 'age' column")
      ->required();
  baseline_cmd->add_option("--repetitions", baseline_args.repetitions,
                           "Monte Carlo repetitions");
  baseline_cmd->add_option("--out", baseline_args.out, "also write JSON here");

  ReportArgs report_args;
  auto* report_cmd = app.add_subcommand(
      "report", "run a full experiment and archive a report directory");
  report_cmd
      ->add_option("--experiment", report_args.experiment,
                   "experiment config JSON")
      ->required();
  report_cmd->add_option("--out-dir", report_args.out_dir, "report root")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help() << "\n";
    return 1;
  }

  try {
    apply_global_config(g);
    config_fill(g, "split", "ratio", split_cmd->get_option("--ratio"),
                split_args.ratio);
    config_fill(g, "split", "k", split_cmd->get_option("--k"), split_args.k);
    config_fill(g, "train", "lambda", train_cmd->get_option("--lambda"),
                train_args.lambda);
    config_fill(g, "train", "equalize", train_cmd->get_option("--equalize"),
                train_args.equalize);
    config_fill(g, "evaluate", "equalize", eval_cmd->get_option("--equalize"),
                eval_args.ml.equalize);
    config_fill(g, "baseline", "repetitions",
                baseline_cmd->get_option("--repetitions"),
                baseline_args.repetitions);

    if (ingest_cmd->parsed()) run_ingest(g, ingest_args);
    if (consensus_cmd->parsed()) run_consensus(g, consensus_args);
    if (derive_cmd->parsed()) run_derive_age(g, derive_args);
    if (hist_cmd->parsed()) run_histogram(g, hist_args);
    if (split_cmd->parsed()) run_split(g, split_args);
    if (train_cmd->parsed()) run_train(g, train_args, train_out);
    if (eval_cmd->parsed()) run_evaluate(g, eval_args);
    if (baseline_cmd->parsed()) run_baseline(g, baseline_args);
    if (report_cmd->parsed()) run_report(g, report_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
