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

#include "ckarl/policy_net.hpp"

#include <algorithm>
#include <cmath>

namespace ckarl {
namespace {

void check_theta(std::span<const double> theta, const NetShape& shape) {
  require_same_length(theta.size(), shape.param_count());
}

}  // namespace

std::size_t NetShape::layer_in(std::size_t layer) const {
  return layer == 0 ? input_dim : hidden_dims.at(layer - 1);
}

std::size_t NetShape::layer_out(std::size_t layer) const {
  return layer < hidden_dims.size() ? hidden_dims[layer] : output_dim;
}

std::size_t NetShape::param_count() const {
  std::size_t d = 0;
  for (std::size_t l = 0; l < layer_count(); ++l) d += layer_in(l) * layer_out(l) + layer_out(l);
  return d;
}

NetShape NetShape::actor() { return {9, {32, 32}, 3, Activation::kTanh}; }
NetShape NetShape::critic() { return {9, {32}, 1, Activation::kTanh}; }

ForwardTrace mlp_forward(std::span<const double> theta, const NetShape& shape,
                         std::span<const double> obs) {
  check_theta(theta, shape);
  require_same_length(obs.size(), shape.input_dim);

  ForwardTrace trace;
  const std::size_t layers = shape.layer_count();
  trace.pre_activations.resize(layers);
  trace.post_activations.reserve(layers);
  trace.post_activations.emplace_back(obs.begin(), obs.end());

  std::size_t offset = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = shape.layer_in(l);
    const std::size_t out = shape.layer_out(l);
    const double* w = theta.data() + offset;
    const double* b = w + in * out;
    const std::vector<double>& x = trace.post_activations[l];
    std::vector<double>& z = trace.pre_activations[l];
    z.resize(out);
    for (std::size_t o = 0; o < out; ++o) {
      double acc = b[o];
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) acc += row[i] * x[i];
      z[o] = acc;
    }
    if (l + 1 < layers) {
      std::vector<double> h(out);
      for (std::size_t o = 0; o < out; ++o) h[o] = std::tanh(z[o]);
      trace.post_activations.push_back(std::move(h));
    }
    offset += in * out + out;
  }
  trace.logits = trace.pre_activations.back();
  return trace;
}

void mlp_backward(std::span<const double> theta, const NetShape& shape, const ForwardTrace& trace,
                  std::span<const double> dlogits, double scale, std::span<double> grad) {
  check_theta(theta, shape);
  require_same_length(grad.size(), theta.size());
  require_same_length(dlogits.size(), shape.output_dim);

  const std::size_t layers = shape.layer_count();
  std::vector<std::size_t> offsets(layers);
  for (std::size_t l = 0, off = 0; l < layers; ++l) {
    offsets[l] = off;
    off += shape.layer_in(l) * shape.layer_out(l) + shape.layer_out(l);
  }

  std::vector<double> delta(dlogits.begin(), dlogits.end());
  for (double& x : delta) x *= scale;

  for (std::size_t l = layers; l-- > 0;) {
    const std::size_t in = shape.layer_in(l);
    const std::size_t out = shape.layer_out(l);
    const double* w = theta.data() + offsets[l];
    double* gw = grad.data() + offsets[l];
    double* gb = gw + in * out;
    const std::vector<double>& x = trace.post_activations[l];
    for (std::size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      double* grow = gw + o * in;
      for (std::size_t i = 0; i < in; ++i) grow[i] += d * x[i];
      gb[o] += d;
    }
    if (l == 0) break;
    std::vector<double> prev(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) prev[i] += row[i] * d;
    }
    for (std::size_t i = 0; i < in; ++i) prev[i] *= 1.0 - x[i] * x[i];
    delta = std::move(prev);
  }
}

std::vector<double> action_distribution(std::span<const double> logits) {
  return softmax_factors(logits);
}

LogProbGrad log_prob_grad(std::span<const double> theta, const NetShape& shape,
                          std::span<const double> obs, std::size_t action) {
  if (action >= shape.output_dim) throw ArgumentError("action out of range");
  const auto trace = mlp_forward(theta, shape, obs);
  const auto probs = action_distribution(trace.logits);

  // log softmax via the shifted log-sum-exp, stable for large logits.
  double top = trace.logits[0];
  for (double z : trace.logits) top = std::max(top, z);
  double sum = 0.0;
  for (double z : trace.logits) sum += std::exp(z - top);

  LogProbGrad out;
  out.log_prob = trace.logits[action] - top - std::log(sum);
  std::vector<double> dlogits(probs.size());
  for (std::size_t a = 0; a < probs.size(); ++a) dlogits[a] = (a == action ? 1.0 : 0.0) - probs[a];
  out.grad = ParamVector(theta.size());
  mlp_backward(theta, shape, trace, dlogits, 1.0, out.grad.span());
  return out;
}

AdaptationGrad backprop_to_adaptation(std::span<const double> grad_theta, const KnowledgePool& pool,
                                      const AdaptationState& state) {
  require_same_length(grad_theta.size(), pool.dim());
  require_same_length(state.size(), pool.size());
  const auto alpha = state.weights();

  // dL/dalpha_i = grad . v_i, then through the softmax Jacobian
  // d alpha_i / d beta_j = alpha_i (delta_ij - alpha_j).
  std::vector<double> g(pool.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    g[i] = dot(grad_theta, pool[i]);
    mean += alpha[i] * g[i];
  }
  AdaptationGrad out;
  out.grad_current = ParamVector(grad_theta);
  out.grad_logits.resize(pool.size());
  for (std::size_t j = 0; j < pool.size(); ++j) out.grad_logits[j] = alpha[j] * (g[j] - mean);
  return out;
}

double value_forward(std::span<const double> theta_v, const NetShape& shape_v,
                     std::span<const double> obs) {
  if (shape_v.output_dim != 1) throw ArgumentError("value network must have a scalar output");
  return mlp_forward(theta_v, shape_v, obs).logits[0];
}

ValueGrad value_grad(std::span<const double> theta_v, const NetShape& shape_v,
                     std::span<const double> obs, double target) {
  if (shape_v.output_dim != 1) throw ArgumentError("value network must have a scalar output");
  const auto trace = mlp_forward(theta_v, shape_v, obs);
  ValueGrad out;
  out.value = trace.logits[0];
  out.grad = ParamVector(theta_v.size());
  const double residual = out.value - target;
  mlp_backward(theta_v, shape_v, trace, std::span<const double>(&residual, 1), 1.0, out.grad.span());
  return out;
}

ParamVector init_params(const NetShape& shape, std::mt19937_64& rng) {
  ParamVector theta(shape.param_count());
  std::size_t offset = 0;
  for (std::size_t l = 0; l < shape.layer_count(); ++l) {
    const std::size_t in = shape.layer_in(l);
    const std::size_t count = in * shape.layer_out(l) + shape.layer_out(l);
    const double s = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-s, s);
    for (std::size_t i = 0; i < count; ++i) theta[offset + i] = dist(rng);
    offset += count;
  }
  return theta;
}

}  // namespace ckarl
