// src/experiment.cpp

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

#include "voxmeta/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "voxmeta/age.hpp"
#include "voxmeta/baselines.hpp"
#include "voxmeta/common.hpp"
#include "voxmeta/ingest.hpp"
#include "voxmeta/metrics.hpp"
#include "voxmeta/rng.hpp"

namespace voxmeta::experiment {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const char* to_token(Task t) { return t == Task::Gender ? "gender" : "age"; }

Task task_from_token(const std::string& token) {
  if (token == "gender") return Task::Gender;
  if (token == "age") return Task::Age;
  throw ValidationError("unknown task: " + token);
}

namespace {

void validate(const ExperimentConfig& c) {
  const bool regression_model = c.model != regression::ModelKind::Logistic;
  if (c.task == Task::Gender && regression_model)
    throw ValidationError("gender task requires the logistic back-end");
  if (c.task == Task::Age && !regression_model)
    throw ValidationError("age task requires a regression back-end");
  if (c.embeddings.empty())
    throw ValidationError("config missing embeddings path");
  if (!(c.ratio > 0.0 && c.ratio < 1.0))
    throw ValidationError("ratio must be in (0, 1)");
  if (c.folds < 2) throw ValidationError("folds must be >= 2");
  if (!c.lambda_cv && c.lambda < 0.0)
    throw ValidationError("lambda must be >= 0");
  if (c.equalize_n && *c.equalize_n < 1)
    throw ValidationError("equalize_utterances must be >= 1");
}

PreparedSide collect(const std::vector<EmbeddingRecord>& records,
                     const std::vector<std::size_t>& indices, Task task) {
  PreparedSide data;
  if (indices.empty()) return data;
  data.d = records[indices.front()].vector.size();
  data.n = indices.size();
  data.rows.reserve(data.n * data.d);
  for (std::size_t idx : indices) {
    const auto& rec = records[idx];
    data.rows.insert(data.rows.end(), rec.vector.begin(), rec.vector.end());
    data.speakers.push_back(rec.speaker_id);
    if (task == Task::Age) {
      data.labels_int.push_back(*rec.age);
      data.y_age.push_back(static_cast<double>(*rec.age));
    } else {
      data.y_gender.push_back(*rec.gender == Gender::Male ? 1 : 0);
    }
  }
  return data;
}

std::size_t distinct_speakers(const PreparedSide& side) {
  return std::set<std::string>(side.speakers.begin(), side.speakers.end()).size();
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << text;
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text,
                                       const std::string& origin) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw ValidationError("malformed experiment config " + origin);
  ExperimentConfig c;
  try {
    c.task = task_from_token(j.at("task").get<std::string>());
    c.model = regression::model_kind_from_token(j.at("model").get<std::string>());
    c.embeddings = j.at("embeddings").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("pairs")) c.pairs = j["pairs"].get<std::string>();
    if (j.contains("split")) c.split = j["split"].get<std::string>();
    if (j.contains("ratio")) c.ratio = j["ratio"].get<double>();
    if (j.contains("folds")) c.folds = j["folds"].get<int>();
    if (j.contains("lambda")) {
      if (j["lambda"].is_string()) {
        if (j["lambda"].get<std::string>() != "cv")
          throw ValidationError("lambda must be a number or \"cv\"");
        c.lambda_cv = true;
      } else {
        c.lambda_cv = false;
        c.lambda = j["lambda"].get<double>();
      }
    }
    if (j.contains("lambda_grid"))
      c.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
    if (j.contains("balance_gender"))
      c.balance_gender = j["balance_gender"].get<bool>();
    if (j.contains("equalize_utterances")) {
      const auto& e = j["equalize_utterances"];
      if (e.is_string()) {
        const auto s = e.get<std::string>();
        if (s == "auto") {
          c.equalize = true;
        } else if (s == "off") {
          c.equalize = false;
        } else {
          throw ValidationError(
              "equalize_utterances must be \"auto\", \"off\" or a number");
        }
      } else {
        c.equalize = true;
        c.equalize_n = e.get<int>();
      }
    }
    if (j.contains("baseline_repetitions"))
      c.baseline_repetitions = j["baseline_repetitions"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("experiment config " + origin + ": " + e.what());
  }
  if (c.task == Task::Gender) c.balance_gender = true;
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read experiment config " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return config_from_json_text(text, path);
}

std::string config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["task"] = to_token(c.task);
  j["model"] = regression::to_token(c.model);
  j["embeddings"] = c.embeddings;
  if (!c.pairs.empty()) j["pairs"] = c.pairs;
  if (!c.split.empty()) j["split"] = c.split;
  j["ratio"] = c.ratio;
  j["folds"] = c.folds;
  if (c.lambda_cv) {
    j["lambda"] = "cv";
  } else {
    j["lambda"] = c.lambda;
  }
  if (!c.lambda_grid.empty()) j["lambda_grid"] = c.lambda_grid;
  j["balance_gender"] = c.balance_gender;
  if (!c.equalize) {
    j["equalize_utterances"] = "off";
  } else if (c.equalize_n) {
    j["equalize_utterances"] = *c.equalize_n;
  } else {
    j["equalize_utterances"] = "auto";
  }
  j["seed"] = c.seed;
  j["baseline_repetitions"] = c.baseline_repetitions;
  return j.dump(2);
}

std::string config_hash(const ExperimentConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(config_to_json(config))));
  return buf;
}

PreparedExperiment prepare_data(const ExperimentConfig& config) {
  validate(config);

  std::ifstream emb_in(config.embeddings, std::ios::binary);
  auto records = ingest::parse_embeddings(emb_in, config.embeddings);
  if (records.empty())
    throw ValidationError("no embedding records in " + config.embeddings);

  std::unordered_map<std::string, SpeakerAgePair> pair_by_speaker;
  if (!config.pairs.empty()) {
    for (auto& p : age::read_pairs_csv(config.pairs)) {
      if (!pair_by_speaker.emplace(p.speaker_id, p).second)
        throw ValidationError(config.pairs + ": duplicate speaker " + p.speaker_id);
    }
    for (auto& rec : records) {
      const auto it = pair_by_speaker.find(rec.speaker_id);
      if (it != pair_by_speaker.end()) rec.age = it->second.age;
    }
  }

  std::vector<std::size_t> labeled;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (config.task == Task::Age) {
      if (rec.age.has_value()) labeled.push_back(i);
    } else {
      if (rec.gender &&
          (*rec.gender == Gender::Male || *rec.gender == Gender::Female))
        labeled.push_back(i);
    }
  }
  if (labeled.empty())
    throw ValidationError("no records carry a " +
                          std::string(to_token(config.task)) + " label");

  std::set<std::string> eligible_set, train_only_set;
  for (std::size_t i : labeled) {
    const auto& rec = records[i];
    const auto it = pair_by_speaker.find(rec.speaker_id);
    const bool title_only = it != pair_by_speaker.end() &&
                            it->second.tier == ReliabilityTier::TitleOnly;
    (title_only ? train_only_set : eligible_set).insert(rec.speaker_id);
  }

  PreparedExperiment prep;
  if (!config.split.empty()) {
    prep.split = datasets::read_split_json(config.split);
    // An externally supplied split must still honor the tier rule.
    for (const auto& s : prep.split.test)
      if (train_only_set.count(s))
        throw ValidationError("split manifest places TitleOnly-tier speaker " +
                              s + " on the test side");
  } else {
    prep.split = datasets::make_split(
        {eligible_set.begin(), eligible_set.end()},
        {train_only_set.begin(), train_only_set.end()}, config.ratio,
        config.folds, config.seed);
  }
  const std::unordered_set<std::string> train_speakers(prep.split.train.begin(),
                                                       prep.split.train.end());
  const std::unordered_set<std::string> test_speakers(prep.split.test.begin(),
                                                      prep.split.test.end());

  std::vector<std::size_t> train_idx, test_idx;
  for (std::size_t i : labeled) {
    if (train_speakers.count(records[i].speaker_id)) train_idx.push_back(i);
    else if (test_speakers.count(records[i].speaker_id)) test_idx.push_back(i);
  }
  if (train_idx.empty() || test_idx.empty())
    throw ValidationError("split leaves train or test side empty");

  const auto subset = [](const std::vector<std::size_t>& base,
                         const std::vector<std::size_t>& rel) {
    std::vector<std::size_t> out;
    out.reserve(rel.size());
    for (std::size_t r : rel) out.push_back(base[r]);
    return out;
  };
  const auto view = [&records](const std::vector<std::size_t>& idx) {
    std::vector<EmbeddingRecord> v;
    v.reserve(idx.size());
    for (std::size_t i : idx) v.push_back(records[i]);
    return v;
  };

  // Balance first, then equalize: the canonical preparation order.
  if (config.balance_gender) {
    train_idx = subset(train_idx,
                       datasets::balance_gender(view(train_idx), config.seed));
    test_idx = subset(test_idx,
                      datasets::balance_gender(view(test_idx), config.seed));
  }

  if (config.equalize) {
    int n_per = 0;
    if (config.equalize_n) {
      n_per = *config.equalize_n;
    } else {
      // Default: minimum utterance count across test-side speakers.
      std::map<std::string, int> counts;
      for (std::size_t i : test_idx) ++counts[records[i].speaker_id];
      for (const auto& [_, c] : counts)
        n_per = n_per == 0 ? c : std::min(n_per, c);
      if (n_per < 1)
        throw ValidationError("cannot derive equalization count: empty test side");
    }
    prep.info.equalize_n = n_per;
    auto eq_train = datasets::equalize_utterances(
        view(train_idx), static_cast<std::size_t>(n_per), config.seed);
    auto eq_test = datasets::equalize_utterances(
        view(test_idx), static_cast<std::size_t>(n_per), config.seed);
    prep.info.dropped_train = eq_train.dropped_speakers;
    prep.info.dropped_test = eq_test.dropped_speakers;
    train_idx = subset(train_idx, eq_train.kept);
    test_idx = subset(test_idx, eq_test.kept);
  }
  if (train_idx.empty() || test_idx.empty())
    throw ValidationError("dataset preparation left train or test side empty");

  prep.train = collect(records, train_idx, config.task);
  prep.test = collect(records, test_idx, config.task);
  prep.info.train_utterances = prep.train.n;
  prep.info.test_utterances = prep.test.n;
  prep.info.train_speakers = distinct_speakers(prep.train);
  prep.info.test_speakers = distinct_speakers(prep.test);
  return prep;
}

regression::Coefficients fit_model(const ExperimentConfig& config,
                                   const PreparedSide& train, double lambda) {
  using regression::ModelKind;
  const auto design =
      regression::DesignMatrix::build(train.rows, train.n, train.d);
  switch (config.model) {
    case ModelKind::OLS: return regression::fit_ols(design, train.y_age);
    case ModelKind::Ridge:
      return regression::fit_ridge(design, train.y_age, lambda);
    case ModelKind::Lasso:
      return regression::fit_lasso(design, train.y_age, lambda);
    case ModelKind::Logistic:
      return regression::fit_logistic(design, train.y_gender, lambda);
  }
  throw ValidationError("unreachable model kind");
}

namespace {

double score_cell(const ExperimentConfig& config, const PreparedSide& cell_train,
                  const PreparedSide& cell_val, double lambda) {
  const auto coefs = fit_model(config, cell_train, lambda);
  if (config.task == Task::Age) {
    const auto pred =
        regression::predict(coefs, cell_val.rows, cell_val.n, cell_val.d);
    return eval::mae(pred, cell_val.y_age);
  }
  const auto pred =
      regression::classify(coefs, cell_val.rows, cell_val.n, cell_val.d);
  return eval::f1_score(pred, cell_val.y_gender).f1;
}

PreparedSide side_subset(const PreparedSide& side,
                         const std::vector<std::size_t>& idx, Task task) {
  PreparedSide out;
  out.d = side.d;
  out.n = idx.size();
  out.rows.reserve(out.n * out.d);
  for (std::size_t i : idx) {
    const double* row = side.rows.data() + i * side.d;
    out.rows.insert(out.rows.end(), row, row + side.d);
    out.speakers.push_back(side.speakers[i]);
    if (task == Task::Age) {
      out.y_age.push_back(side.y_age[i]);
      out.labels_int.push_back(side.labels_int[i]);
    } else {
      out.y_gender.push_back(side.y_gender[i]);
    }
  }
  return out;
}

}  // namespace

CvSelection select_lambda(const ExperimentConfig& config,
                          const PreparedSide& train,
                          const std::map<std::string, int>& folds) {
  CvSelection sel;
  sel.grid = config.lambda_grid.empty() ? regression::default_lambda_grid()
                                        : config.lambda_grid;
  std::vector<int> row_fold(train.n, -1);
  std::set<int> fold_ids;
  for (std::size_t i = 0; i < train.n; ++i) {
    const auto it = folds.find(train.speakers[i]);
    if (it == folds.end())
      throw ValidationError("speaker " + train.speakers[i] +
                            " missing from fold assignment");
    row_fold[i] = it->second;
    fold_ids.insert(it->second);
  }
  if (fold_ids.size() < 2)
    throw ValidationError("cross-validation needs at least 2 non-empty folds");

  sel.mean_scores.assign(sel.grid.size(), 0.0);
  std::size_t scored_folds = 0;
  for (int fold : fold_ids) {
    std::vector<std::size_t> tr_idx, va_idx;
    for (std::size_t i = 0; i < train.n; ++i)
      (row_fold[i] == fold ? va_idx : tr_idx).push_back(i);
    if (tr_idx.empty() || va_idx.empty()) continue;
    const auto cell_train = side_subset(train, tr_idx, config.task);
    const auto cell_val = side_subset(train, va_idx, config.task);
    if (config.task == Task::Gender) {
      const auto has_both = [](const std::vector<int>& y) {
        bool pos = false, neg = false;
        for (int v : y) (v ? pos : neg) = true;
        return pos && neg;
      };
      if (!has_both(cell_train.y_gender) || !has_both(cell_val.y_gender))
        continue;
    }
    ++scored_folds;
    for (std::size_t li = 0; li < sel.grid.size(); ++li)
      sel.mean_scores[li] += score_cell(config, cell_train, cell_val, sel.grid[li]);
  }
  if (scored_folds == 0)
    throw ValidationError("no usable cross-validation folds");
  for (double& s : sel.mean_scores) s /= static_cast<double>(scored_folds);

  std::size_t best = 0;
  for (std::size_t li = 1; li < sel.grid.size(); ++li) {
    const bool better = config.task == Task::Age
                            ? sel.mean_scores[li] <= sel.mean_scores[best]
                            : sel.mean_scores[li] >= sel.mean_scores[best];
    if (better) best = li;  // ascending grid: ties land on the larger lambda
  }
  sel.selected = sel.grid[best];
  return sel;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const std::string& out_root, bool force) {
  PreparedExperiment prep = prepare_data(config);

  std::optional<CvSelection> cv;
  double lambda = config.lambda;
  if (config.model != regression::ModelKind::OLS && config.lambda_cv) {
    cv = select_lambda(config, prep.train, prep.split.folds);
    lambda = cv->selected;
  }
  const auto coefs = fit_model(config, prep.train, lambda);

  const std::string hash = config_hash(config);
  const fs::path report_dir = fs::path(out_root) / hash;
  if (fs::exists(report_dir)) {
    if (!force)
      throw ValidationError("report directory exists: " + report_dir.string() +
                            " (pass force to allow)");
    fs::remove_all(report_dir);
  }
  std::error_code ec;
  fs::create_directories(report_dir, ec);
  if (ec) throw IoError("cannot create report directory " + report_dir.string());

  write_text_file(report_dir / "config.json", config_to_json(config) + "\n");
  datasets::write_split_json((report_dir / "split.json").string(), prep.split,
                             true);
  regression::save_model((report_dir / "model.json").string(), coefs,
                         config.seed, "experiment", true);

  ordered_json metrics;
  metrics["task"] = to_token(config.task);
  metrics["model"] = regression::to_token(config.model);
  metrics["lambda"] = lambda;
  metrics["converged"] = coefs.converged;
  ordered_json prep_meta;
  prep_meta["train_utterances"] = prep.info.train_utterances;
  prep_meta["test_utterances"] = prep.info.test_utterances;
  prep_meta["train_speakers"] = prep.info.train_speakers;
  prep_meta["test_speakers"] = prep.info.test_speakers;
  prep_meta["balance_gender"] = config.balance_gender;
  if (prep.info.equalize_n) {
    prep_meta["equalize_n"] = *prep.info.equalize_n;
  } else {
    prep_meta["equalize_n"] = nullptr;
  }
  prep_meta["dropped_speakers_train"] = prep.info.dropped_train;
  prep_meta["dropped_speakers_test"] = prep.info.dropped_test;
  metrics["prep"] = std::move(prep_meta);
  if (cv) {
    ordered_json cj;
    cj["lambda_grid"] = cv->grid;
    cj["mean_scores"] = cv->mean_scores;
    cj["selected_lambda"] = cv->selected;
    metrics["cv"] = std::move(cj);
  } else {
    metrics["cv"] = nullptr;
  }

  double primary = 0.0;
  if (config.task == Task::Gender) {
    const auto pred =
        regression::classify(coefs, prep.test.rows, prep.test.n, prep.test.d);
    const auto f1 = eval::f1_score(pred, prep.test.y_gender);
    ordered_json m;
    m["f1"] = f1.f1;
    m["precision"] = f1.precision;
    m["recall"] = f1.recall;
    m["confusion"] = {{"tp", f1.counts.tp},
                      {"fp", f1.counts.fp},
                      {"fn", f1.counts.fn},
                      {"tn", f1.counts.tn}};
    metrics["metrics"] = std::move(m);
    primary = f1.f1;
  } else {
    const auto pred =
        regression::predict(coefs, prep.test.rows, prep.test.n, prep.test.d);
    const double test_mae = eval::mae(pred, prep.test.y_age);
    ordered_json m;
    m["mae"] = test_mae;
    metrics["metrics"] = std::move(m);
    primary = test_mae;

    const auto curve = eval::mae_by_age(pred, prep.test.labels_int);
    eval::write_curve_csv((report_dir / "curve.csv").string(), curve, true);

    ordered_json baselines;
    const auto emp = eval::baseline_empirical(
        prep.test.labels_int, config.baseline_repetitions, config.seed);
    const auto uni = eval::baseline_uniform(
        prep.test.labels_int, config.baseline_repetitions, config.seed);
    const auto fix = eval::baseline_fixed(prep.test.labels_int);
    baselines["empirical"] = ordered_json::parse(baseline_to_json(emp));
    baselines["uniform"] = ordered_json::parse(baseline_to_json(uni));
    baselines["fixed"] = ordered_json::parse(baseline_to_json(fix));
    write_text_file(report_dir / "baselines.json", baselines.dump(2) + "\n");
  }

  const std::string metrics_text = metrics.dump(2) + "\n";
  write_text_file(report_dir / "metrics.json", metrics_text);

  ExperimentOutcome outcome;
  outcome.report_dir = report_dir.string();
  outcome.primary_metric = primary;
  outcome.metrics_json = metrics_text;
  return outcome;
}

}  // namespace voxmeta::experiment
