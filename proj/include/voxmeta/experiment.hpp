// include/voxmeta/experiment.hpp

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

#ifndef VOXMETA_EXPERIMENT_HPP
#define VOXMETA_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "voxmeta/datasets.hpp"
#include "voxmeta/regression.hpp"

namespace voxmeta::experiment {

enum class Task { Gender, Age };

const char* to_token(Task t);
Task task_from_token(const std::string& token);

// Resolved experiment description. Serialized as config.json inside the
// report directory; the report directory name is a content hash of this.
struct ExperimentConfig {
  Task task = Task::Age;
  regression::ModelKind model = regression::ModelKind::Ridge;
  std::string embeddings;               // feature CSV path
  std::string pairs;                    // optional speaker-age pairs CSV
  std::string split;                    // optional existing split manifest
  double ratio = 0.6;
  int folds = 5;
  bool lambda_cv = true;                // false -> fixed lambda below
  double lambda = 0.0;
  std::vector<double> lambda_grid;      // empty -> default grid
  bool balance_gender = false;          // forced on for the gender task
  bool equalize = true;                 // false reproduces the unbalanced regime
  std::optional<int> equalize_n;        // empty -> min count over test side
  std::uint64_t seed = 0;
  std::uint64_t baseline_repetitions = 100000;
};

// Parses and validates a config JSON file. Inconsistencies (gender task with
// a regression back-end, missing paths) are fatal before any compute.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text,
                                       const std::string& origin);

std::string config_to_json(const ExperimentConfig& config);

// 16-hex-digit content hash of the resolved config; names the report dir.
std::string config_hash(const ExperimentConfig& config);

// One side of the prepared dataset, flattened for the solvers.
struct PreparedSide {
  std::vector<double> rows;  // row-major n x d
  std::size_t n = 0, d = 0;
  std::vector<double> y_age;
  std::vector<int> y_gender;            // 1 = male (positive class)
  std::vector<int> labels_int;          // integer ages, for curves/baselines
  std::vector<std::string> speakers;    // per row
};

struct PrepInfo {
  std::size_t train_utterances = 0, test_utterances = 0;
  std::size_t train_speakers = 0, test_speakers = 0;
  std::optional<int> equalize_n;
  std::vector<std::string> dropped_train, dropped_test;
};

// Loads embeddings (+ optional pairs), resolves labels, splits, balances and
// equalizes. The split comes from config.split when set, otherwise it is
// computed here with TitleOnly speakers pinned to the train side.
struct PreparedExperiment {
  datasets::Split split;
  PreparedSide train, test;
  PrepInfo info;
};

PreparedExperiment prepare_data(const ExperimentConfig& config);

struct CvSelection {
  std::vector<double> grid;
  std::vector<double> mean_scores;  // mean MAE (age) or mean F1 (gender)
  double selected = 0.0;
};

// 5-fold CV over the split's speaker-level folds: age minimizes mean MAE,
// gender maximizes mean F1; ties go to the larger lambda.
CvSelection select_lambda(const ExperimentConfig& config,
                          const PreparedSide& train,
                          const std::map<std::string, int>& folds);

// Fits the configured back-end on the prepared train side.
regression::Coefficients fit_model(const ExperimentConfig& config,
                                   const PreparedSide& train, double lambda);

struct ExperimentOutcome {
  std::string report_dir;
  double primary_metric = 0.0;  // F1 or MAE
  std::string metrics_json;     // contents of metrics.json
};

// split -> (balance/equalize) -> CV lambda selection -> final fit -> test
// metrics (+ guessing baselines for the age task). Archives config.json,
// split.json, model.json, metrics.json and, for age, baselines.json and
// curve.csv under out_root/<config hash>/.
ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const std::string& out_root,
                                 bool force = false);

}  // namespace voxmeta::experiment

#endif  // VOXMETA_EXPERIMENT_HPP
