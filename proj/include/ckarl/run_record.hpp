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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ckarl/envs.hpp"
#include "ckarl/param_vector.hpp"
#include "ckarl/pool_io.hpp"

namespace ckarl {

enum class Method { kCka, kCkaAvg, kFt1, kFtn, kScratch };

/// How evaluation episodes pick actions.
enum class EvalMode { kSampled, kGreedy };

std::string_view method_name(Method m);
/// Throws ConfigError listing valid names.
Method parse_method(std::string_view name);
std::string valid_method_names();

struct TrainConfig {
  long long steps_per_task = 20000;  // env steps per task
  int batch_episodes = 16;
  double lr_actor = 3e-3;
  double lr_critic = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double entropy_coef = 0.01;
  double gamma = 0.99;
  double max_grad_norm = 0.5;
  long long eval_every = 1000;
  int eval_episodes = 20;
  EvalMode eval_mode = EvalMode::kSampled;
  int episode_limit = 80;
  std::size_t k_max = 3;
  std::uint64_t seed = 0;
  Method method = Method::kCka;
  std::vector<std::size_t> actor_hidden{32, 32};
  std::vector<std::size_t> critic_hidden{32};

  /// Throws ConfigError on the first violated constraint.
  void validate() const;
};

struct CurvePoint {
  long long step = 0;
  double value = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

using Curve = std::vector<CurvePoint>;

struct TaskRecord {
  int mode_id = 0;
  Curve curve;                  // global steps: task i spans [i*delta, (i+1)*delta)
  double end_of_task_rate = 0;  // policy at the end of this task's training
  double final_rate = 0;        // re-evaluation after the whole sequence
  ParamVector final_theta;
  std::optional<ParamVector> knowledge_vector;    // pool methods, tasks >= 2
  std::vector<std::vector<double>> alpha_history;  // each eval point, then end of task
  std::size_t merges = 0;
  double wall_seconds = 0;
};

struct RunRecord {
  Method method = Method::kCka;
  std::uint64_t seed = 0;
  TrainConfig config;
  std::vector<int> modes;
  std::vector<TaskRecord> tasks;
  std::optional<ParamVector> theta_base;
  std::vector<VectorSnapshot> pool_snapshots;  // after each task, pool methods only
};

}  // namespace ckarl
