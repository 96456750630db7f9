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

#include <doctest.h>

#include <cmath>

#include "ckarl/errors.hpp"
#include "ckarl/metrics.hpp"

using namespace ckarl;
using namespace ckarl::metrics;

namespace {

TaskRecord task(std::vector<double> values, double end, double final, long long offset, long long every = 10) {
  TaskRecord t;
  for (std::size_t i = 0; i < values.size(); ++i) t.curve.push_back({offset + long(i) * every, values[i]});
  t.end_of_task_rate = end;
  t.final_rate = final;
  return t;
}

RunRecord record(Method m, std::uint64_t seed, std::vector<TaskRecord> tasks) {
  RunRecord r;
  r.method = m;
  r.seed = seed;
  r.config.steps_per_task = 40;
  r.config.eval_every = 10;
  r.tasks = std::move(tasks);
  for (std::size_t i = 0; i < r.tasks.size(); ++i) r.modes.push_back(int(i));
  return r;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("average_performance examples") {
  const std::vector<TaskRecord> two{task({1, 1, 1, 1}, 1, 1, 0), task({0, 0, 0, 0}, 0, 0, 40)};
  CHECK(average_performance(two, 80, 40) == 0.5);
  const std::vector<TaskRecord> ones{task({1, 1, 1, 1}, 1, 1, 0), task({1, 1, 1, 1}, 1, 1, 40)};
  CHECK(average_performance(ones, 80, 40) == 1.0);
  CHECK_THROWS_WITH_AS(average_performance(std::vector<TaskRecord>{}, 0, 40), "empty record", ArgumentError);
}

TEST_CASE("P(t) conventions on a three-task record") {
  // Delta = 40, eval every 10. Hand values:
  //   t = 25: task 0 at its sample for step 20 (0.5), tasks 1 and 2 not started.
  //   t = 55: task 0 held at end-of-task 0.9, task 1 at its step-50 sample 0.4, task 2 at 0.
  //   t = 120 (= T): re-evaluations 0.8, 0.6, 0.3.
  const std::vector<TaskRecord> three{task({0.0, 0.25, 0.5, 0.75}, 0.9, 0.8, 0),
                                      task({0.2, 0.4, 0.6, 0.8}, 0.7, 0.6, 40),
                                      task({0.1, 0.1, 0.2, 0.2}, 0.3, 0.3, 80)};
  CHECK(task_performance(three, 0, 25, 40) == 0.5);
  CHECK(task_performance(three, 1, 25, 40) == 0.0);
  CHECK(average_performance(three, 25, 40) == doctest::Approx(0.5 / 3));
  CHECK(average_performance(three, 55, 40) == doctest::Approx((0.9 + 0.4 + 0.0) / 3));
  CHECK(average_performance(three, 120, 40) == doctest::Approx((0.8 + 0.6 + 0.3) / 3));
  CHECK(average_performance(three, 119, 40) == doctest::Approx((0.9 + 0.7 + 0.2) / 3));
}

TEST_CASE("P(t) is monotone under pointwise domination") {
  const std::vector<TaskRecord> lo{task({0.1, 0.2, 0.3, 0.3}, 0.4, 0.2, 0), task({0.0, 0.1, 0.1, 0.2}, 0.3, 0.3, 40)};
  const std::vector<TaskRecord> hi{task({0.2, 0.2, 0.5, 0.6}, 0.5, 0.4, 0), task({0.1, 0.1, 0.2, 0.3}, 0.3, 0.9, 40)};
  for (long long t = 0; t <= 80; t += 5) {
    const double a = average_performance(lo, t, 40), b = average_performance(hi, t, 40);
    CHECK(a <= b);
    CHECK(a >= 0.0);
    CHECK(b <= 1.0);
  }
}

TEST_CASE("auc") {
  CHECK(auc(task({1, 1, 1}, 1, 1, 0).curve) == 1.0);
  CHECK(auc(task({0.5, 0.5}, 1, 1, 0).curve) == 0.5);
  CHECK_THROWS_WITH_AS(auc(Curve{}), "empty curve", ArgumentError);

  for (int k : {4, 10, 50, 200}) {
    std::vector<double> ramp(k);
    for (int i = 0; i < k; ++i) ramp[i] = double(i) / k;  // samples of t / Delta at the left edges
    // Trapezoid rule over [0, 1] with the ramp extended to its right end.
    double trap = 0;
    for (int i = 0; i < k; ++i) trap += 0.5 * (double(i) / k + double(i + 1) / k) / k;
    CHECK(std::abs(auc(task(ramp, 1, 1, 0).curve) - trap) <= 1.0 / (2 * k) + 1e-15);
  }
}

TEST_CASE("auc ignores step labels") {
  auto a = task({0.1, 0.7, 0.4}, 0, 0, 0);
  auto b = task({0.1, 0.7, 0.4}, 0, 0, 1000, 333);
  CHECK(auc(a.curve) == auc(b.curve));
  CHECK(forward_transfer(a.curve, task({0, 0.2, 0.1}, 0, 0, 0).curve) ==
        forward_transfer(b.curve, task({0, 0.2, 0.1}, 0, 0, 7).curve));
}

TEST_CASE("forward_transfer examples") {
  CHECK(forward_transfer(0.3, 0.3) == 0.0);
  CHECK(forward_transfer(1.0, 0.5) == 1.0);
  CHECK(forward_transfer(0.25, 0.5) == -0.5);
  CHECK_THROWS_WITH_AS(forward_transfer(1.0, 1.0), "degenerate baseline", ArgumentError);
  for (double a = 0; a <= 1.0; a += 0.125) CHECK(forward_transfer(a, 0.3) <= 1.0);
}

TEST_CASE("average_ft examples") {
  CHECK(average_ft(std::vector<double>{1, 0}) == 0.5);
  CHECK(average_ft(std::vector<double>{0, 0, 0}) == 0.0);
  CHECK_THROWS_AS(average_ft(std::vector<double>{}), ArgumentError);
}

TEST_CASE("forgetting examples") {
  CHECK(forgetting(std::vector<TaskRecord>{task({0}, 0.7, 0.7, 0), task({0}, 0.2, 0.2, 40)}) == 0.0);
  CHECK(forgetting(std::vector<TaskRecord>{task({0}, 0.9, 0.5, 0), task({0}, 0.8, 0.2, 40), task({0}, 1, 0, 80)}) ==
        doctest::Approx(0.5));
  CHECK(forgetting(std::vector<TaskRecord>{task({0}, 0.2, 0.6, 0), task({0}, 1, 1, 40)}) == doctest::Approx(-0.4));
  CHECK(forgetting(std::vector<TaskRecord>{task({0}, 0.2, 0.6, 0)}) == 0.0);
  CHECK_THROWS_WITH_AS(forgetting(std::vector<TaskRecord>{}), "missing re-evaluations", ArgumentError);
}

TEST_CASE("evaluate_run identities") {
  const auto scratch = record(Method::kScratch, 3, {task({0.1, 0.3, 0.5, 0.6}, 0.7, 0.2, 0),
                                                     task({0.0, 0.2, 0.4, 0.9}, 0.9, 0.9, 40)});
  const auto self = evaluate_run(scratch, scratch);
  CHECK(self.fwt == 0.0);
  for (double ft : self.per_task_ft) CHECK(ft == 0.0);
  CHECK(self.method == "SCRATCH");
  CHECK(self.seed == 3);
  CHECK(self.perf == doctest::Approx((0.2 + 0.9) / 2));
  CHECK(self.forgetting == doctest::Approx(0.5));

  const auto ftn = record(Method::kFtn, 3, {task({0.5, 0.6, 0.7, 0.8}, 0.8, 0.8, 0),
                                             task({0.6, 0.7, 0.9, 1.0}, 1.0, 1.0, 40)});
  const auto m = evaluate_run(ftn, scratch);
  CHECK(m.forgetting == 0.0);
  CHECK(m.per_task_ft[0] == doctest::Approx((0.65 - 0.375) / (1 - 0.375)));
  CHECK(m.per_task_ft[1] == doctest::Approx((0.8 - 0.375) / (1 - 0.375)));
  CHECK(m.fwt == doctest::Approx((m.per_task_ft[0] + m.per_task_ft[1]) / 2));

  auto other = scratch;
  other.modes = {4, 5};
  CHECK_THROWS_AS(evaluate_run(ftn, other), ArgumentError);
  auto shorter = scratch;
  shorter.tasks[1].curve.pop_back();
  CHECK_THROWS_AS(evaluate_run(ftn, shorter), ArgumentError);
}

TEST_CASE("aggregate and summary outputs") {
  std::vector<RunMetrics> runs{{"CKA", 0, 0.5, 0.2, 0.1, {}},
                               {"SCRATCH", 0, 0.25, 0.0, 0.0, {}},
                               {"CKA", 1, 0.75, 0.4, -0.1, {}}};
  const auto agg = aggregate(runs);
  REQUIRE(agg.size() == 2);
  CHECK(agg[0].method == "CKA");
  CHECK(agg[0].runs == 2);
  CHECK(agg[0].perf_mean == 0.625);
  CHECK(agg[0].perf_std == doctest::Approx(std::sqrt(2 * 0.125 * 0.125)));
  CHECK(agg[1].perf_std == 0.0);

  const auto csv = summary_csv(runs);
  CHECK(csv ==
        "method,seed,PERF,FWT,FORGETTING\n"
        "CKA,0,0.5,0.2,0.1\n"
        "SCRATCH,0,0.25,0,0\n"
        "CKA,1,0.75,0.4,-0.1\n"
        "CKA,mean,0.625,0.30000000000000004,0\n"
        "CKA,std,0.1767766952966369,0.14142135623730953,0.14142135623730953\n"
        "SCRATCH,mean,0.25,0,0\n"
        "SCRATCH,std,0,0,0\n");
  const auto table = summary_table(runs);
  CHECK(table.find("PERF") != std::string::npos);
  CHECK(table.find("0.6250+-0.1768") != std::string::npos);
  CHECK(table.find("SCRATCH") != std::string::npos);
}

}  // TEST_SUITE
