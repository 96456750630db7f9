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

#include "ckarl/envs.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "ckarl/errors.hpp"

namespace ckarl::env {
namespace {

int wrap(int x, int m) { return ((x % m) + m) % m; }

void alternate_directions(TaskSpec& spec) {
  for (int i = 0; i < kLanes; ++i) {
    spec.lanes[i].direction = i % 2 == 0 ? Direction::kRight : Direction::kLeft;
  }
}

}  // namespace

TaskSpec make_task(int mode_id) {
  TaskSpec spec;
  spec.mode_id = mode_id;
  switch (mode_id) {
    case 0:
      break;
    case 1:
      alternate_directions(spec);
      break;
    case 2:
      for (int i = 0; i < kLanes; ++i) spec.lanes[i].speed = i % 2 == 0 ? 1 : 2;
      break;
    case 3:
      for (int i : {2, 4, 6}) spec.lanes[i].density = 2;
      break;
    case 4:
      spec.slip_prob = 0.1;
      break;
    case 5:
      for (auto& lane : spec.lanes) lane.speed = 2;
      break;
    case 6:
      alternate_directions(spec);
      for (int i : {1, 3, 5}) spec.lanes[i].density = 2;
      break;
    case 7:
      for (int i = 0; i < kLanes; ++i) spec.lanes[i].speed = i % 2 == 0 ? 2 : 1;
      spec.slip_prob = 0.1;
      break;
    default:
      throw ConfigError("unknown mode " + std::to_string(mode_id) + " (valid: 0..7)");
  }
  return spec;
}

bool lane_blocks_agent(const Lane& lane, int offset) {
  // Obstacles sit at every column congruent to the offset modulo kCols / density.
  const int period = kCols / lane.density;
  return wrap(kAgentCol - offset, period) == 0;
}

EnvState reset(const TaskSpec& /*spec*/, std::uint64_t seed) {
  EnvState state;
  state.rng.seed(seed);
  std::uniform_int_distribution<int> offset(0, kCols - 1);
  for (int& o : state.offsets) o = offset(state.rng);
  return state;
}

Observation observe(const EnvState& state) {
  Observation obs{};
  obs[0] = state.agent_row / 8.0;
  obs[1] = state.agent_col / 8.0;
  for (int i = 0; i < kLanes; ++i) obs[2 + i] = state.offsets[i] / 8.0;
  return obs;
}

StepResult step(EnvState& state, const TaskSpec& spec, Action action) {
  if (state.done) throw std::logic_error("step called on a finished episode");

  if (spec.slip_prob > 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(state.rng) < spec.slip_prob) action = Action::kStay;
  }
  if (action == Action::kUp) {
    state.agent_row = std::max(kGoalRow, state.agent_row - 1);
  } else if (action == Action::kDown) {
    state.agent_row = std::min(kStartRow, state.agent_row + 1);
  }
  for (int i = 0; i < kLanes; ++i) {
    const Lane& lane = spec.lanes[i];
    state.offsets[i] = wrap(state.offsets[i] + lane.speed * static_cast<int>(lane.direction), kCols);
  }
  ++state.steps_taken;

  StepResult result;
  if (state.agent_row == kGoalRow) {
    result.reward = 1.0;
    state.done = true;
  } else if (state.agent_row >= 1 && state.agent_row <= kLanes) {
    const int lane = state.agent_row - 1;
    if (lane_blocks_agent(spec.lanes[lane], state.offsets[lane])) state.agent_row = kStartRow;
  }
  if (state.steps_taken >= spec.episode_limit) state.done = true;
  result.done = state.done;
  result.observation = observe(state);
  return result;
}

std::string describe_modes() {
  std::ostringstream out;
  out << "mode  slip  lanes (speed,dir,density) for lanes 1..7\n";
  for (int m = 0; m < kNumModes; ++m) {
    const TaskSpec spec = make_task(m);
    out << m << "     " << spec.slip_prob << (spec.slip_prob == 0.0 ? "     " : "   ");
    for (const Lane& lane : spec.lanes) {
      out << ' ' << lane.speed << (lane.direction == Direction::kRight ? 'R' : 'L') << lane.density;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace ckarl::env
