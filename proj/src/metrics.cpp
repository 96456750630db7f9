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

#include "ckarl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ckarl/errors.hpp"
#include "ckarl/pool_io.hpp"

namespace ckarl::metrics {
namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

std::string fixed4(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", x);
  return buf;
}

}  // namespace

double task_performance(std::span<const TaskRecord> tasks, std::size_t index, long long t,
                        long long delta) {
  const long long start = static_cast<long long>(index) * delta;
  const long long end = start + delta;
  const long long total = static_cast<long long>(tasks.size()) * delta;
  const TaskRecord& task = tasks[index];
  if (t >= total) return task.final_rate;
  if (t < start) return 0.0;
  if (t >= end) return task.end_of_task_rate;
  double value = 0.0;
  for (const auto& p : task.curve) {
    if (p.step > t) break;
    value = p.value;
  }
  return value;
}

double average_performance(std::span<const TaskRecord> tasks, long long t, long long delta) {
  if (tasks.empty()) throw ArgumentError("empty record");
  double sum = 0.0;
  for (std::size_t i = 0; i < tasks.size(); ++i) sum += task_performance(tasks, i, t, delta);
  return sum / static_cast<double>(tasks.size());
}

double auc(const Curve& curve) {
  if (curve.empty()) throw ArgumentError("empty curve");
  double sum = 0.0;
  for (const auto& p : curve) sum += p.value;
  return sum / static_cast<double>(curve.size());
}

double forward_transfer(double auc_value, double baseline_auc) {
  if (baseline_auc >= 1.0) throw ArgumentError("degenerate baseline");
  return (auc_value - baseline_auc) / (1.0 - baseline_auc);
}

double forward_transfer(const Curve& curve, const Curve& baseline) {
  return forward_transfer(auc(curve), auc(baseline));
}

double average_ft(std::span<const double> per_task) {
  if (per_task.empty()) throw ArgumentError("empty transfer list");
  double sum = 0.0;
  for (double x : per_task) sum += x;
  return sum / static_cast<double>(per_task.size());
}

double forgetting(std::span<const TaskRecord> tasks) {
  if (tasks.empty()) throw ArgumentError("missing re-evaluations");
  if (tasks.size() == 1) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < tasks.size(); ++i) {
    sum += tasks[i].end_of_task_rate - tasks[i].final_rate;
  }
  return sum / static_cast<double>(tasks.size() - 1);
}

RunMetrics evaluate_run(const RunRecord& run, const RunRecord& baseline) {
  if (run.tasks.empty()) throw ArgumentError("empty record");
  if (run.modes != baseline.modes) {
    throw ArgumentError("baseline task sequence differs from the measured run");
  }
  RunMetrics out;
  out.method = std::string(method_name(run.method));
  out.seed = run.seed;
  const long long delta = run.config.steps_per_task;
  out.perf = average_performance(run.tasks, static_cast<long long>(run.tasks.size()) * delta, delta);
  for (std::size_t i = 0; i < run.tasks.size(); ++i) {
    if (run.tasks[i].curve.size() != baseline.tasks[i].curve.size()) {
      throw ArgumentError("baseline eval schedule differs from the measured run");
    }
    out.per_task_ft.push_back(forward_transfer(run.tasks[i].curve, baseline.tasks[i].curve));
  }
  out.fwt = average_ft(out.per_task_ft);
  out.forgetting = forgetting(run.tasks);
  return out;
}

std::vector<Aggregate> aggregate(std::span<const RunMetrics> runs) {
  std::vector<std::string> order;
  for (const auto& r : runs) {
    if (std::find(order.begin(), order.end(), r.method) == order.end()) order.push_back(r.method);
  }
  std::vector<Aggregate> out;
  for (const auto& method : order) {
    std::vector<double> perf, fwt, forget;
    for (const auto& r : runs) {
      if (r.method != method) continue;
      perf.push_back(r.perf);
      fwt.push_back(r.fwt);
      forget.push_back(r.forgetting);
    }
    Aggregate a;
    a.method = method;
    a.runs = perf.size();
    const auto p = mean_std(perf), f = mean_std(fwt), g = mean_std(forget);
    a.perf_mean = p.mean;
    a.perf_std = p.std;
    a.fwt_mean = f.mean;
    a.fwt_std = f.std;
    a.forgetting_mean = g.mean;
    a.forgetting_std = g.std;
    out.push_back(a);
  }
  return out;
}

std::string summary_csv(std::span<const RunMetrics> runs) {
  std::ostringstream out;
  out << "method,seed,PERF,FWT,FORGETTING\n";
  for (const auto& r : runs) {
    out << r.method << ',' << r.seed << ',' << format_double(r.perf) << ','
        << format_double(r.fwt) << ',' << format_double(r.forgetting) << '\n';
  }
  for (const auto& a : aggregate(runs)) {
    out << a.method << ",mean," << format_double(a.perf_mean) << ',' << format_double(a.fwt_mean)
        << ',' << format_double(a.forgetting_mean) << '\n';
    out << a.method << ",std," << format_double(a.perf_std) << ',' << format_double(a.fwt_std)
        << ',' << format_double(a.forgetting_std) << '\n';
  }
  return out.str();
}

std::string summary_table(std::span<const RunMetrics> runs) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-10s %5s  %-16s %-16s %s\n", "Method", "runs", "PERF",
                "FWT", "FORGETTING");
  out << line;
  for (const auto& a : aggregate(runs)) {
    std::snprintf(line, sizeof(line), "%-10s %5zu  %-16s %-16s %s\n", a.method.c_str(), a.runs,
                  (fixed4(a.perf_mean) + "+-" + fixed4(a.perf_std)).c_str(),
                  (fixed4(a.fwt_mean) + "+-" + fixed4(a.fwt_std)).c_str(),
                  (fixed4(a.forgetting_mean) + "+-" + fixed4(a.forgetting_std)).c_str());
    out << line;
  }
  return out.str();
}

}  // namespace ckarl::metrics
