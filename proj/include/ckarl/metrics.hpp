// Copyright 2026 The ckarl Authors
//
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

#pragma once

// Continual-learning metrics over recorded evaluation curves: average
// performance P(t), per-task area under the curve, forward transfer against a
// from-scratch reference, and forgetting.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ckarl/run_record.hpp"

namespace ckarl::metrics {

/// p_i(t) for task `index` of a run whose tasks each train for `delta` steps:
/// 0 before the task starts, the latest sample <= t inside its window, the
/// end-of-task rate afterwards, and the post-sequence re-evaluation from the
/// end of the run on.
double task_performance(std::span<const TaskRecord> tasks, std::size_t index, long long t,
                        long long delta);

/// P(t) = mean over tasks of p_i(t).
double average_performance(std::span<const TaskRecord> tasks, long long t, long long delta);

/// Normalized area under a uniformly sampled curve (left Riemann sum).
double auc(const Curve& curve);

/// (AUC - AUC_b) / (1 - AUC_b). Throws ArgumentError("degenerate baseline")
/// when AUC_b == 1.
double forward_transfer(double auc_value, double baseline_auc);
double forward_transfer(const Curve& curve, const Curve& baseline);

double average_ft(std::span<const double> per_task);

/// Mean over all but the last task of (end-of-task rate - final rate).
double forgetting(std::span<const TaskRecord> tasks);

struct RunMetrics {
  std::string method;
  std::uint64_t seed = 0;
  double perf = 0.0;
  double fwt = 0.0;
  double forgetting = 0.0;
  std::vector<double> per_task_ft;
};

/// Metrics of `run` with forward transfer measured against `baseline`
/// (a from-scratch run over the same task sequence).
RunMetrics evaluate_run(const RunRecord& run, const RunRecord& baseline);

struct Aggregate {
  std::string method;
  std::size_t runs = 0;
  double perf_mean = 0, perf_std = 0;
  double fwt_mean = 0, fwt_std = 0;
  double forgetting_mean = 0, forgetting_std = 0;
};

/// Mean and sample standard deviation per method, in first-seen method order.
std::vector<Aggregate> aggregate(std::span<const RunMetrics> runs);

/// `method,seed,PERF,FWT,FORGETTING` rows, then per-method mean and std rows.
std::string summary_csv(std::span<const RunMetrics> runs);
/// Table-style text: one row per method with mean +- std.
std::string summary_table(std::span<const RunMetrics> runs);

}  // namespace ckarl::metrics
