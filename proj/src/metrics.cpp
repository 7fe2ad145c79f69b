// src/metrics.cpp

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

#include "voxmeta/metrics.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include "voxmeta/common.hpp"
#include "voxmeta/csv.hpp"
#include "voxmeta/kernels.hpp"

namespace voxmeta::eval {

F1Result f1_score(const std::vector<int>& predictions,
                  const std::vector<int>& labels) {
  if (predictions.empty()) throw ValidationError("f1_score: empty input");
  if (predictions.size() != labels.size())
    throw ValidationError("f1_score: prediction/label length mismatch");
  F1Result r;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool p = predictions[i] != 0;
    const bool l = labels[i] != 0;
    if (p && l) ++r.counts.tp;
    else if (p && !l) ++r.counts.fp;
    else if (!p && l) ++r.counts.fn;
    else ++r.counts.tn;
  }
  const auto& c = r.counts;
  r.precision = (c.tp + c.fp) ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  r.recall = (c.tp + c.fn) ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  r.f1 = (r.precision + r.recall > 0.0)
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

double mae(const std::vector<double>& predictions,
           const std::vector<double>& labels) {
  if (predictions.size() != labels.size())
    throw ValidationError("mae: prediction/label length mismatch");
  if (predictions.empty()) throw ValidationError("mae: empty input");
  const double total = kernels::sum_abs_diff(predictions.data(), labels.data(),
                                             predictions.size());
  return total / static_cast<double>(predictions.size());
}

std::vector<AgeCurvePoint> mae_by_age(const std::vector<double>& predictions,
                                      const std::vector<int>& labels) {
  if (predictions.size() != labels.size())
    throw ValidationError("mae_by_age: prediction/label length mismatch");
  std::map<int, std::pair<double, std::uint64_t>> acc;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& slot = acc[labels[i]];
    slot.first += std::fabs(predictions[i] - static_cast<double>(labels[i]));
    slot.second += 1;
  }
  std::vector<AgeCurvePoint> curve;
  curve.reserve(acc.size());
  for (const auto& [age, slot] : acc)
    curve.push_back({age, slot.first / static_cast<double>(slot.second), slot.second});
  return curve;
}

void write_curve_csv(const std::string& path,
                     const std::vector<AgeCurvePoint>& curve, bool force) {
  if (!force) {
    std::ifstream probe(path);
    if (probe.good())
      throw ValidationError("refusing to overwrite " + path + " (pass force to allow)");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open curve file " + path);
  out << "age,mae,count\n";
  for (const auto& p : curve)
    out << p.age << ',' << csv::format_double(p.mae) << ',' << p.count << '\n';
  if (!out.flush()) throw IoError("failed writing curve file " + path);
}

}  // namespace voxmeta::eval
