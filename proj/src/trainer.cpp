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

#include "ckarl/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <cmath>

#include "ckarl/errors.hpp"

namespace ckarl {
namespace {

constexpr std::uint64_t kTaskStride = 10007;
constexpr std::uint64_t kEvalSalt = std::uint64_t{1} << 62;
constexpr std::uint64_t kSamplingSalt = std::uint64_t{1} << 61;

bool uses_pool(Method m) { return m == Method::kCka || m == Method::kCkaAvg; }

// log pi(.|s) with the shifted log-sum-exp.
std::vector<double> log_softmax(std::span<const double> logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - top);
  const double lse = top + std::log(sum);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
  return out;
}

void check_logits(std::span<const double> logits) {
  for (double z : logits) {
    if (!std::isfinite(z)) throw NumericError("gradient blow-up: non-finite policy logits");
  }
}

Trajectory run_episode(std::span<const double> theta, const NetShape& shape,
                       const env::TaskSpec& spec, std::uint64_t seed, double gamma) {
  Trajectory traj;
  env::EnvState state = env::reset(spec, seed);
  std::mt19937_64 policy_rng(seed ^ kSamplingSalt);
  env::Observation obs = env::observe(state);
  while (!state.done) {
    const auto trace = mlp_forward(theta, shape, obs);
    check_logits(trace.logits);
    const auto probs = action_distribution(trace.logits);
    const std::size_t a = sample_action(probs, policy_rng);
    traj.observations.push_back(obs);
    traj.actions.push_back(a);
    const auto result = env::step(state, spec, static_cast<env::Action>(a));
    traj.rewards.push_back(result.reward);
    obs = result.observation;
  }
  traj.returns = returns_to_go(traj.rewards, gamma);
  return traj;
}

// Shape checks for code about to enter a parallel region, where an
// exception would terminate the process.
void check_net(std::span<const double> theta, const NetShape& shape, std::size_t outputs) {
  require_same_length(theta.size(), shape.param_count());
  require_same_length(shape.input_dim, env::kObsDim);
  require_same_length(shape.output_dim, outputs);
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kCka: return "CKA";
    case Method::kCkaAvg: return "CKA_AVG";
    case Method::kFt1: return "FT1";
    case Method::kFtn: return "FTN";
    case Method::kScratch: return "SCRATCH";
  }
  return "?";
}

std::string valid_method_names() { return "CKA, CKA_AVG, FT1, FTN, SCRATCH"; }

Method parse_method(std::string_view name) {
  for (Method m : {Method::kCka, Method::kCkaAvg, Method::kFt1, Method::kFtn, Method::kScratch}) {
    if (method_name(m) == name) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "' (valid: " + valid_method_names() + ")");
}

void TrainConfig::validate() const {
  if (steps_per_task < 0) throw ConfigError("steps_per_task must be non-negative");
  if (eval_every <= 0) throw ConfigError("eval_every must be positive");
  if (steps_per_task % eval_every != 0) {
    throw ConfigError("steps_per_task must be divisible by eval_every");
  }
  if (batch_episodes < 1) throw ConfigError("batch_episodes must be positive");
  if (eval_episodes < 1) throw ConfigError("eval_episodes must be positive");
  if (episode_limit < 1) throw ConfigError("episode_limit must be positive");
  if (!(lr_actor > 0) || !(lr_critic > 0)) throw ConfigError("learning rates must be positive");
  if (!(adam_eps > 0)) throw ConfigError("adam_eps must be positive");
  if (!(max_grad_norm > 0)) throw ConfigError("max_grad_norm must be positive");
  if (!(gamma >= 0 && gamma <= 1)) throw ConfigError("gamma must lie in [0, 1]");
  if (entropy_coef < 0) throw ConfigError("entropy_coef must be non-negative");
  if (k_max < 1) throw ConfigError("k_max must be at least 1");
  if (uses_pool(method) && k_max < 2) {
    throw ConfigError("k_max must be at least 2 when the null vector is pinned");
  }
}

// ---- seeding ---------------------------------------------------------------

std::uint64_t episode_seed(std::uint64_t experiment_seed, std::uint64_t task_index,
                           std::uint64_t episode_index) {
  return experiment_seed ^ (task_index * kTaskStride) ^ episode_index;
}

std::uint64_t eval_seed(std::uint64_t experiment_seed, std::uint64_t task_index) {
  return (experiment_seed ^ (task_index * kTaskStride)) ^ kEvalSalt;
}

std::mt19937_64 make_rng(std::uint64_t experiment_seed, std::uint64_t task_index,
                         RngPurpose purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(experiment_seed),
                    static_cast<std::uint32_t>(experiment_seed >> 32),
                    static_cast<std::uint32_t>(task_index),
                    static_cast<std::uint32_t>(purpose)};
  return std::mt19937_64(seq);
}

// ---- experience ------------------------------------------------------------

std::vector<double> returns_to_go(std::span<const double> rewards, double gamma) {
  std::vector<double> out(rewards.size());
  double acc = 0.0;
  for (std::size_t t = rewards.size(); t-- > 0;) {
    acc = rewards[t] + gamma * acc;
    out[t] = acc;
  }
  return out;
}

std::size_t sample_action(std::span<const double> probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = u(rng);
  double cum = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    cum += probs[a];
    if (r < cum) return a;
  }
  return probs.size() - 1;
}

std::size_t greedy_action(std::span<const double> logits) {
  return static_cast<std::size_t>(std::max_element(logits.begin(), logits.end()) - logits.begin());
}

Batch collect_batch(std::span<const double> theta, const NetShape& shape, const env::TaskSpec& spec,
                    std::uint64_t experiment_seed, std::uint64_t task_index,
                    std::uint64_t first_episode, int episodes, double gamma) {
  check_net(theta, shape, env::kNumActions);
  Batch batch(static_cast<std::size_t>(std::max(episodes, 0)));
  kernels::parallel_for(batch.size(), [&](std::size_t e) {
    batch[e] = run_episode(theta, shape, spec,
                           episode_seed(experiment_seed, task_index, first_episode + e), gamma);
  });
  return batch;
}

std::size_t batch_steps(const Batch& batch) {
  std::size_t n = 0;
  for (const auto& t : batch) n += t.size();
  return n;
}

double evaluate(std::span<const double> theta, const NetShape& shape, const env::TaskSpec& spec,
                int episodes, std::uint64_t seed, EvalMode mode) {
  if (episodes < 1) throw ArgumentError("evaluate needs at least one episode");
  check_net(theta, shape, env::kNumActions);
  std::vector<char> success(static_cast<std::size_t>(episodes), 0);
  kernels::parallel_for(success.size(), [&](std::size_t e) {
    const std::uint64_t episode = seed ^ static_cast<std::uint64_t>(e);
    env::EnvState state = env::reset(spec, episode);
    std::mt19937_64 policy_rng(episode ^ kSamplingSalt);
    env::Observation obs = env::observe(state);
    while (!state.done) {
      const auto trace = mlp_forward(theta, shape, obs);
      check_logits(trace.logits);
      const std::size_t a = mode == EvalMode::kGreedy
                                ? greedy_action(trace.logits)
                                : sample_action(action_distribution(trace.logits), policy_rng);
      const auto result = env::step(state, spec, static_cast<env::Action>(a));
      if (result.reward > 0.0) success[e] = 1;
      obs = result.observation;
    }
  });
  const auto successes = std::count(success.begin(), success.end(), char{1});
  return static_cast<double>(successes) / episodes;
}

// ---- losses ----------------------------------------------------------------

LossGrad actor_loss_grad(std::span<const double> theta, const NetShape& shape, const Batch& batch,
                         const std::vector<std::vector<double>>& baselines, double entropy_coef,
                         kernels::Exec exec) {
  if (batch.empty()) throw ArgumentError("empty batch");
  check_net(theta, shape, shape.output_dim);
  require_same_length(baselines.size(), batch.size());
  const double n = static_cast<double>(batch_steps(batch));
  if (n == 0) throw ArgumentError("empty batch");

  for (std::size_t i = 0; i < batch.size(); ++i) {
    require_same_length(baselines[i].size(), batch[i].size());
  }

  LossGrad out;
  out.grad = ParamVector(theta.size());
  std::vector<double> partial(batch.size(), 0.0);
  kernels::ordered_sum(exec, batch.size(), out.grad.span(), [&](std::size_t i, std::span<double> g) {
    const Trajectory& traj = batch[i];
    std::vector<double> dlogits(shape.output_dim);
    double loss = 0.0;
    for (std::size_t t = 0; t < traj.size(); ++t) {
      const auto trace = mlp_forward(theta, shape, traj.observations[t]);
      const auto logp = log_softmax(trace.logits);
      double entropy = 0.0;
      for (double lp : logp) entropy -= std::exp(lp) * lp;
      const double advantage = traj.returns[t] - baselines[i][t];
      const std::size_t a = traj.actions[t];
      loss += -advantage * logp[a] - entropy_coef * entropy;
      for (std::size_t k = 0; k < dlogits.size(); ++k) {
        const double p = std::exp(logp[k]);
        dlogits[k] = -advantage * ((k == a ? 1.0 : 0.0) - p) + entropy_coef * p * (logp[k] + entropy);
      }
      mlp_backward(theta, shape, trace, dlogits, 1.0 / n, g);
    }
    partial[i] = loss;
  });
  for (double l : partial) out.loss += l;
  out.loss /= n;
  return out;
}

LossGrad critic_loss_grad(std::span<const double> theta_v, const NetShape& shape_v,
                          const Batch& batch, kernels::Exec exec) {
  if (batch.empty()) throw ArgumentError("empty batch");
  check_net(theta_v, shape_v, 1);
  const double n = static_cast<double>(batch_steps(batch));
  if (n == 0) throw ArgumentError("empty batch");

  LossGrad out;
  out.grad = ParamVector(theta_v.size());
  std::vector<double> partial(batch.size(), 0.0);
  kernels::ordered_sum(exec, batch.size(), out.grad.span(), [&](std::size_t i, std::span<double> g) {
    const Trajectory& traj = batch[i];
    double loss = 0.0;
    for (std::size_t t = 0; t < traj.size(); ++t) {
      const auto trace = mlp_forward(theta_v, shape_v, traj.observations[t]);
      const double residual = trace.logits[0] - traj.returns[t];
      loss += 0.5 * residual * residual;
      mlp_backward(theta_v, shape_v, trace, std::span<const double>(&residual, 1), 1.0 / n, g);
    }
    partial[i] = loss;
  });
  for (double l : partial) out.loss += l;
  out.loss /= n;
  return out;
}

std::vector<std::vector<double>> critic_values(std::span<const double> theta_v,
                                               const NetShape& shape_v, const Batch& batch) {
  check_net(theta_v, shape_v, 1);
  std::vector<std::vector<double>> values(batch.size());
  kernels::parallel_for(batch.size(), [&](std::size_t i) {
    const Trajectory& traj = batch[i];
    values[i].resize(traj.size());
    for (std::size_t t = 0; t < traj.size(); ++t) {
      values[i][t] = value_forward(theta_v, shape_v, traj.observations[t]);
    }
  });
  return values;
}

// ---- learners --------------------------------------------------------------

DirectLearner::DirectLearner(ParamVector theta, double lr, AdamConfig adam, double max_grad_norm)
    : theta_(std::move(theta)),
      state_(theta_.size()),
      lr_(lr),
      adam_(adam),
      max_grad_norm_(max_grad_norm) {}

void DirectLearner::apply_gradient(const ParamVector& grad_theta) {
  ParamVector g = grad_theta;
  const std::span<double> blocks[] = {g.span()};
  clip_global_norm(blocks, max_grad_norm_);
  adam_step(theta_.span(), g.span(), state_, lr_, adam_);
}

AdaptiveLearner::AdaptiveLearner(const KnowledgePool& pool, std::vector<double> logits,
                                 bool train_logits, double lr, AdamConfig adam,
                                 double max_grad_norm)
    : pool_(pool),
      current_(pool.dim(), 0.0),
      state_(std::move(logits)),
      train_logits_(train_logits),
      current_adam_(pool.dim()),
      logit_adam_(pool.size()),
      lr_(lr),
      adam_(adam),
      max_grad_norm_(max_grad_norm) {
  require_same_length(state_.size(), pool.size());
  recompose();
}

void AdaptiveLearner::recompose() { theta_ = compose_params(pool_, state_.weights(), current_); }

std::vector<double> AdaptiveLearner::adaptation_weights() const {
  return {state_.weights().begin(), state_.weights().end()};
}

void AdaptiveLearner::apply_gradient(const ParamVector& grad_theta) {
  auto grads = backprop_to_adaptation(grad_theta, pool_, state_);
  if (train_logits_) {
    const std::span<double> blocks[] = {grads.grad_current.span(), std::span<double>(grads.grad_logits)};
    clip_global_norm(blocks, max_grad_norm_);
  } else {
    const std::span<double> blocks[] = {grads.grad_current.span()};
    clip_global_norm(blocks, max_grad_norm_);
  }
  adam_step(current_.span(), grads.grad_current.span(), current_adam_, lr_, adam_);
  if (train_logits_) {
    std::vector<double> logits(state_.logits().begin(), state_.logits().end());
    adam_step(logits, grads.grad_logits, logit_adam_, lr_, adam_);
    state_.set_logits(std::move(logits));
  }
  recompose();
}

UpdateStats reinforce_update(const Batch& batch, ActorLearner& actor, const NetShape& actor_shape,
                             ParamVector& critic, AdamState& critic_adam,
                             const NetShape& critic_shape, const TrainConfig& config) {
  UpdateStats stats;
  const auto baselines = critic_values(critic, critic_shape, batch);
  auto actor_grad = actor_loss_grad(actor.theta(), actor_shape, batch, baselines, config.entropy_coef);
  stats.actor_loss = actor_grad.loss;
  actor.apply_gradient(actor_grad.grad);

  auto critic_grad = critic_loss_grad(critic, critic_shape, batch);
  stats.critic_loss = critic_grad.loss;
  const std::span<double> blocks[] = {critic_grad.grad.span()};
  clip_global_norm(blocks, config.max_grad_norm);
  adam_step(critic.span(), critic_grad.grad.span(), critic_adam, config.lr_critic,
            {config.adam_beta1, config.adam_beta2, config.adam_eps});
  return stats;
}

// ---- drivers ---------------------------------------------------------------

NetShape actor_shape(const TrainConfig& config) {
  return {env::kObsDim, config.actor_hidden, env::kNumActions, Activation::kTanh};
}

NetShape critic_shape(const TrainConfig& config) {
  return {env::kObsDim, config.critic_hidden, 1, Activation::kTanh};
}

env::TaskSpec task_for(int mode_id, const TrainConfig& config) {
  env::TaskSpec spec = env::make_task(mode_id);
  spec.episode_limit = config.episode_limit;
  spec.gamma = config.gamma;
  return spec;
}

TaskOutcome train_on_task(ActorLearner& actor, const env::TaskSpec& spec, const TrainConfig& config,
                          std::uint64_t stream, long long step_offset) {
  const NetShape a_shape = actor_shape(config);
  const NetShape c_shape = critic_shape(config);
  auto critic_rng = make_rng(config.seed, stream, RngPurpose::kCriticInit);
  ParamVector critic = init_params(c_shape, critic_rng);
  AdamState critic_adam(critic.size());
  const std::uint64_t eval_base = eval_seed(config.seed, stream);

  TaskOutcome outcome;
  long long steps = 0;
  long long next_eval = 0;
  std::uint64_t episodes = 0;
  for (;;) {
    while (next_eval < config.steps_per_task && steps >= next_eval) {
      const double rate = evaluate(actor.theta(), a_shape, spec, config.eval_episodes, eval_base, config.eval_mode);
      outcome.curve.push_back({step_offset + next_eval, rate});
      auto weights = actor.adaptation_weights();
      if (!weights.empty()) outcome.alpha_history.push_back(std::move(weights));
      next_eval += config.eval_every;
    }
    if (steps >= config.steps_per_task) break;
    const Batch batch = collect_batch(actor.theta(), a_shape, spec, config.seed, stream, episodes,
                                      config.batch_episodes, config.gamma);
    episodes += static_cast<std::uint64_t>(config.batch_episodes);
    steps += static_cast<long long>(batch_steps(batch));
    reinforce_update(batch, actor, a_shape, critic, critic_adam, c_shape, config);
    if (!actor.theta().all_finite()) throw NumericError("gradient blow-up: non-finite actor parameters");
  }
  outcome.end_of_task_rate =
      evaluate(actor.theta(), a_shape, spec, config.eval_episodes, eval_base, config.eval_mode);
  if (auto weights = actor.adaptation_weights(); !weights.empty()) {
    outcome.alpha_history.push_back(std::move(weights));
  }
  return outcome;
}

BaseResult train_base(const env::TaskSpec& spec, const TrainConfig& config) {
  auto rng = make_rng(config.seed, 0, RngPurpose::kActorInit);
  DirectLearner learner(init_params(actor_shape(config), rng), config.lr_actor,
                        {config.adam_beta1, config.adam_beta2, config.adam_eps},
                        config.max_grad_norm);
  BaseResult result;
  result.outcome = train_on_task(learner, spec, config, 0, 0);
  result.theta_base = learner.theta();
  return result;
}

AdaptResult train_task(std::size_t task_index, const KnowledgePool& pool,
                       const env::TaskSpec& spec, const TrainConfig& config, bool train_logits) {
  if (task_index < 1) throw ArgumentError("train_task is for tasks after the base task");
  if (pool.size() == 0) throw ArgumentError("empty pool");
  std::vector<double> logits(pool.size(), 0.0);
  if (train_logits) {
    auto rng = make_rng(config.seed, task_index, RngPurpose::kLogitInit);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& b : logits) b = normal(rng);
  }
  AdaptiveLearner learner(pool, std::move(logits), train_logits, config.lr_actor,
                          {config.adam_beta1, config.adam_beta2, config.adam_eps},
                          config.max_grad_norm);
  AdaptResult result;
  result.outcome = train_on_task(learner, spec, config, task_index,
                                 static_cast<long long>(task_index) * config.steps_per_task);
  result.knowledge_vector = learner.current();
  result.logits.assign(learner.state().logits().begin(), learner.state().logits().end());
  result.theta = learner.theta();
  return result;
}

RunRecord run_sequence(const std::vector<int>& modes, const TrainConfig& config,
                       const std::function<void(const RunRecord&)>& on_task_done) {
  config.validate();
  if (modes.empty()) throw ConfigError("empty task sequence");
  if (uses_pool(config.method) && modes.size() < 2) {
    throw ConfigError("pool methods need at least two tasks");
  }

  RunRecord record;
  record.method = config.method;
  record.seed = config.seed;
  record.config = config;
  record.modes = modes;

  std::vector<env::TaskSpec> specs;
  for (int m : modes) specs.push_back(task_for(m, config));
  const AdamConfig adam{config.adam_beta1, config.adam_beta2, config.adam_eps};
  const NetShape a_shape = actor_shape(config);
  const long long delta = config.steps_per_task;
  using Clock = std::chrono::steady_clock;

  // From-scratch runs treat every task as the first one of a fresh
  // experiment, so their seed stream does not depend on the task position.
  auto stream_of = [&](std::size_t task) -> std::uint64_t {
    return config.method == Method::kScratch ? 0 : task;
  };

  if (uses_pool(config.method)) {
    auto start = Clock::now();
    BaseResult base = train_base(specs[0], config);
    TaskRecord first;
    first.mode_id = modes[0];
    first.curve = std::move(base.outcome.curve);
    first.end_of_task_rate = base.outcome.end_of_task_rate;
    first.final_theta = base.theta_base;
    first.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    record.tasks.push_back(std::move(first));

    KnowledgePool pool(base.theta_base, config.k_max, /*pin_null=*/true);
    record.theta_base = base.theta_base;
    record.pool_snapshots.push_back(snapshot_of(pool));
    if (on_task_done) on_task_done(record);

    for (std::size_t k = 1; k < specs.size(); ++k) {
      start = Clock::now();
      AdaptResult r = train_task(k, pool, specs[k], config, config.method == Method::kCka);
      TaskRecord task;
      task.mode_id = modes[k];
      task.curve = std::move(r.outcome.curve);
      task.end_of_task_rate = r.outcome.end_of_task_rate;
      task.alpha_history = std::move(r.outcome.alpha_history);
      task.final_theta = std::move(r.theta);
      task.knowledge_vector = r.knowledge_vector;
      pool = add_vector(std::move(pool), std::move(r.knowledge_vector));
      pool = enforce_capacity(std::move(pool), &task.merges);
      task.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
      record.pool_snapshots.push_back(snapshot_of(pool));
      record.tasks.push_back(std::move(task));
      if (on_task_done) on_task_done(record);
    }
  } else {
    ParamVector theta;
    for (std::size_t k = 0; k < specs.size(); ++k) {
      const auto start = Clock::now();
      if (k == 0 || config.method == Method::kScratch) {
        auto rng = make_rng(config.seed, stream_of(k), RngPurpose::kActorInit);
        theta = init_params(a_shape, rng);
      }
      DirectLearner learner(theta, config.lr_actor, adam, config.max_grad_norm);
      TaskOutcome outcome =
          train_on_task(learner, specs[k], config, stream_of(k), static_cast<long long>(k) * delta);
      theta = learner.theta();
      TaskRecord task;
      task.mode_id = modes[k];
      task.curve = std::move(outcome.curve);
      task.end_of_task_rate = outcome.end_of_task_rate;
      task.final_theta = theta;
      task.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
      record.tasks.push_back(std::move(task));
      if (on_task_done) on_task_done(record);
    }
  }

  // Post-sequence re-evaluation: FT-N keeps one snapshot per task, every
  // other method is judged by its final policy.
  const ParamVector& final_theta = record.tasks.back().final_theta;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const ParamVector& theta =
        config.method == Method::kFtn ? record.tasks[k].final_theta : final_theta;
    record.tasks[k].final_rate = evaluate(theta, a_shape, specs[k], config.eval_episodes,
                                          eval_seed(config.seed, stream_of(k)), config.eval_mode);
  }
  return record;
}

}  // namespace ckarl
