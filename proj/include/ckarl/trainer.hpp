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

// Policy-gradient training over a task sequence: base policy learning,
// knowledge-vector adaptation with a frozen base, knowledge preservation and
// capacity enforcement, plus the fine-tuning and from-scratch baselines.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ckarl/adam.hpp"
#include "ckarl/envs.hpp"
#include "ckarl/kernels.hpp"
#include "ckarl/policy_net.hpp"
#include "ckarl/run_record.hpp"
#include "ckarl/vector_pool.hpp"

namespace ckarl {

// ---- seeding -------------------------------------------------------------

/// Per-episode training seed: experiment ^ task * 10007 ^ episode.
std::uint64_t episode_seed(std::uint64_t experiment_seed, std::uint64_t task_index,
                           std::uint64_t episode_index);
/// Base seed for evaluation episodes; disjoint from training seeds.
std::uint64_t eval_seed(std::uint64_t experiment_seed, std::uint64_t task_index);

enum class RngPurpose : std::uint64_t { kActorInit = 1, kCriticInit = 2, kLogitInit = 3 };
std::mt19937_64 make_rng(std::uint64_t experiment_seed, std::uint64_t task_index, RngPurpose purpose);

// ---- experience ----------------------------------------------------------

struct Trajectory {
  std::vector<env::Observation> observations;
  std::vector<std::size_t> actions;
  std::vector<double> rewards;
  std::vector<double> returns;  // discounted return-to-go

  std::size_t size() const noexcept { return actions.size(); }
};

using Batch = std::vector<Trajectory>;

std::vector<double> returns_to_go(std::span<const double> rewards, double gamma);

std::size_t sample_action(std::span<const double> probs, std::mt19937_64& rng);
std::size_t greedy_action(std::span<const double> logits);

/// Rolls out `episodes` sampled episodes; episode e uses
/// episode_seed(experiment_seed, task_index, first_episode + e).
Batch collect_batch(std::span<const double> theta, const NetShape& shape, const env::TaskSpec& spec,
                    std::uint64_t experiment_seed, std::uint64_t task_index,
                    std::uint64_t first_episode, int episodes, double gamma);

std::size_t batch_steps(const Batch& batch);

/// Fraction of episodes that reach the goal. Episode e is seeded with
/// seed ^ e; sampled actions draw from a generator derived from that seed.
double evaluate(std::span<const double> theta, const NetShape& shape, const env::TaskSpec& spec,
                int episodes, std::uint64_t seed, EvalMode mode = EvalMode::kSampled);

// ---- losses --------------------------------------------------------------

struct LossGrad {
  double loss = 0.0;
  ParamVector grad;
};

/// -mean[(G_t - b_t) log pi(a_t|s_t)] - entropy_coef * mean H(pi(.|s_t)).
/// `baselines[i][t]` is the critic value for step t of trajectory i.
LossGrad actor_loss_grad(std::span<const double> theta, const NetShape& shape, const Batch& batch,
                         const std::vector<std::vector<double>>& baselines, double entropy_coef,
                         kernels::Exec exec = kernels::Exec::kParallel);

/// mean 0.5 * (V(s_t) - G_t)^2.
LossGrad critic_loss_grad(std::span<const double> theta_v, const NetShape& shape_v,
                          const Batch& batch, kernels::Exec exec = kernels::Exec::kParallel);

std::vector<std::vector<double>> critic_values(std::span<const double> theta_v,
                                               const NetShape& shape_v, const Batch& batch);

// ---- learners ------------------------------------------------------------

/// What the actor optimizer actually updates.
class ActorLearner {
 public:
  virtual ~ActorLearner() = default;
  /// Parameters used for acting.
  virtual const ParamVector& theta() const = 0;
  /// Clips and applies a gradient of the actor loss with respect to theta().
  virtual void apply_gradient(const ParamVector& grad_theta) = 0;
  virtual std::vector<double> adaptation_weights() const { return {}; }
};

/// Trains every parameter directly (base learning and fine-tuning baselines).
class DirectLearner final : public ActorLearner {
 public:
  DirectLearner(ParamVector theta, double lr, AdamConfig adam, double max_grad_norm);
  const ParamVector& theta() const override { return theta_; }
  void apply_gradient(const ParamVector& grad_theta) override;

 private:
  ParamVector theta_;
  AdamState state_;
  double lr_;
  AdamConfig adam_;
  double max_grad_norm_;
};

/// theta = base + sum_j softmax(logits)_j v_j + current. Only `current` and,
/// when trainable, the logits receive updates; the pool is never modified.
class AdaptiveLearner final : public ActorLearner {
 public:
  AdaptiveLearner(const KnowledgePool& pool, std::vector<double> logits, bool train_logits,
                  double lr, AdamConfig adam, double max_grad_norm);
  const ParamVector& theta() const override { return theta_; }
  void apply_gradient(const ParamVector& grad_theta) override;
  std::vector<double> adaptation_weights() const override;

  const ParamVector& current() const noexcept { return current_; }
  const AdaptationState& state() const noexcept { return state_; }

 private:
  void recompose();

  const KnowledgePool& pool_;
  ParamVector current_;
  AdaptationState state_;
  bool train_logits_;
  ParamVector theta_;
  AdamState current_adam_;
  AdamState logit_adam_;
  double lr_;
  AdamConfig adam_;
  double max_grad_norm_;
};

struct UpdateStats {
  double actor_loss = 0.0;
  double critic_loss = 0.0;
};

/// One REINFORCE-with-baseline update of the actor learner and the critic.
UpdateStats reinforce_update(const Batch& batch, ActorLearner& actor, const NetShape& actor_shape,
                             ParamVector& critic, AdamState& critic_adam,
                             const NetShape& critic_shape, const TrainConfig& config);

// ---- task and sequence drivers --------------------------------------------

struct TaskOutcome {
  Curve curve;
  double end_of_task_rate = 0.0;
  // Adaptation weights at each eval point, then once more at the end of the task.
  std::vector<std::vector<double>> alpha_history;
};

/// Trains `actor` on one task for config.steps_per_task env steps with a
/// freshly initialized critic. `stream` selects the seed stream and
/// `step_offset` shifts the recorded steps.
TaskOutcome train_on_task(ActorLearner& actor, const env::TaskSpec& spec, const TrainConfig& config,
                          std::uint64_t stream, long long step_offset);

NetShape actor_shape(const TrainConfig& config);
NetShape critic_shape(const TrainConfig& config);
env::TaskSpec task_for(int mode_id, const TrainConfig& config);

struct BaseResult {
  ParamVector theta_base;
  TaskOutcome outcome;
};

/// Trains a randomly initialized actor on the first task.
BaseResult train_base(const env::TaskSpec& spec, const TrainConfig& config);

struct AdaptResult {
  ParamVector knowledge_vector;
  std::vector<double> logits;
  ParamVector theta;
  TaskOutcome outcome;
};

/// Learns a knowledge vector (zero-initialized) and adaptation logits drawn
/// from N(0, 1) against a fixed pool. With train_logits = false the logits
/// stay at zero, i.e. uniform weights.
AdaptResult train_task(std::size_t task_index, const KnowledgePool& pool,
                       const env::TaskSpec& spec, const TrainConfig& config, bool train_logits = true);

/// Runs the configured method over the task sequence. `on_task_done`, when
/// set, sees the partial record after every task (before the post-sequence
/// re-evaluation).
RunRecord run_sequence(const std::vector<int>& modes, const TrainConfig& config,
                       const std::function<void(const RunRecord&)>& on_task_done = {});

}  // namespace ckarl
