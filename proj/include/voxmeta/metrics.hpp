// include/voxmeta/metrics.hpp

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

#ifndef VOXMETA_METRICS_HPP
#define VOXMETA_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace voxmeta::eval {

struct ConfusionCounts {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::uint64_t total() const { return tp + fp + fn + tn; }
};

// Positive class is male throughout (fixed convention).
struct F1Result {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  ConfusionCounts counts;
};

// predictions/labels are 0/1 with 1 = positive. F1 = 0 by convention when
// precision + recall = 0. Throws ValidationError on empty or mismatched input.
F1Result f1_score(const std::vector<int>& predictions,
                  const std::vector<int>& labels);

// Mean absolute error; predictions are used as-is (no rounding).
double mae(const std::vector<double>& predictions,
           const std::vector<double>& labels);

struct AgeCurvePoint {
  int age = 0;
  double mae = 0.0;
  std::uint64_t count = 0;
};

// Groups trials by true age; one point per age, sorted by age.
std::vector<AgeCurvePoint> mae_by_age(const std::vector<double>& predictions,
                                      const std::vector<int>& labels);

// Plot-ready CSV: header "age,mae,count".
void write_curve_csv(const std::string& path,
                     const std::vector<AgeCurvePoint>& curve,
                     bool force = false);

}  // namespace voxmeta::eval

#endif  // VOXMETA_METRICS_HPP
