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

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "ckarl/param_vector.hpp"
#include "ckarl/vector_pool.hpp"

namespace ckarl {

enum class Activation { kTanh };

/// Fully connected network layout. Parameters are packed layer by layer in
/// forward order: row-major weights (out x in), then biases. Hidden layers
/// use the activation, the output layer is linear.
struct NetShape {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden_dims;
  std::size_t output_dim = 0;
  Activation activation = Activation::kTanh;

  std::size_t layer_count() const noexcept { return hidden_dims.size() + 1; }
  std::size_t layer_in(std::size_t layer) const;
  std::size_t layer_out(std::size_t layer) const;
  std::size_t param_count() const;

  static NetShape actor();   // 9 -> 32 -> 32 -> 3
  static NetShape critic();  // 9 -> 32 -> 1
};

struct ForwardTrace {
  // post_activations[0] is the input; post_activations[l + 1] is the output
  // of hidden layer l. pre_activations[l] is W_l x + b_l for every layer.
  std::vector<std::vector<double>> pre_activations;
  std::vector<std::vector<double>> post_activations;
  std::vector<double> logits;
};

ForwardTrace mlp_forward(std::span<const double> theta, const NetShape& shape,
                         std::span<const double> obs);

/// Reverse pass. Adds scale * d f / d theta to `grad`, where f is any scalar
/// function of the logits with gradient `dlogits`.
void mlp_backward(std::span<const double> theta, const NetShape& shape, const ForwardTrace& trace,
                  std::span<const double> dlogits, double scale, std::span<double> grad);

/// Categorical policy head.
std::vector<double> action_distribution(std::span<const double> logits);

struct LogProbGrad {
  double log_prob = 0.0;
  ParamVector grad;
};

LogProbGrad log_prob_grad(std::span<const double> theta, const NetShape& shape,
                          std::span<const double> obs, std::size_t action);

/// Gradient of a loss with respect to the current knowledge vector and the
/// adaptation logits, given its gradient with respect to the composed
/// parameters. The base never receives a gradient.
struct AdaptationGrad {
  ParamVector grad_current;
  std::vector<double> grad_logits;
};

AdaptationGrad backprop_to_adaptation(std::span<const double> grad_theta, const KnowledgePool& pool,
                                      const AdaptationState& state);

double value_forward(std::span<const double> theta_v, const NetShape& shape_v,
                     std::span<const double> obs);

/// Value and gradient of 0.5 * (value - target)^2.
struct ValueGrad {
  double value = 0.0;
  ParamVector grad;
};

ValueGrad value_grad(std::span<const double> theta_v, const NetShape& shape_v,
                     std::span<const double> obs, double target);

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) per layer, weights and biases.
ParamVector init_params(const NetShape& shape, std::mt19937_64& rng);

}  // namespace ckarl
