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

#include "ckarl/adam.hpp"

#include <cmath>

#include "ckarl/errors.hpp"

namespace ckarl {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double lr,
               const AdamConfig& config) {
  require_same_length(params.size(), grads.size());
  require_same_length(params.size(), state.m.size());
  require_same_length(params.size(), state.v.size());
  for (double g : grads) {
    if (!std::isfinite(g)) throw NumericError("gradient blow-up");
  }

  ++state.t;
  const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
    state.v[i] = config.beta2 * state.v[i] + (1.0 - config.beta2) * g * g;
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + config.eps);
  }
}

double clip_global_norm(std::span<const std::span<double>> blocks, double max_norm) {
  double sq = 0.0;
  for (auto block : blocks) {
    for (double g : block) sq += g * g;
  }
  const double total = std::sqrt(sq);
  if (!std::isfinite(total)) throw NumericError("gradient blow-up");
  if (total > max_norm && total > 0.0) {
    const double scale = max_norm / total;
    for (auto block : blocks) {
      for (double& g : block) g *= scale;
    }
  }
  return total;
}

}  // namespace ckarl
