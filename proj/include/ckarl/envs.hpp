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

// ShiftWorld: a seeded 9x9 lane-crossing gridworld. Row 8 is the start, row 0
// the goal and rows 1..7 are traffic lanes. The agent stays in column 4 and
// chooses UP, DOWN or STAY; modes differ in lane speed, direction, obstacle
// density and action slip.

#include <array>
#include <cstdint>
#include <random>
#include <string>

namespace ckarl::env {

inline constexpr int kRows = 9;
inline constexpr int kCols = 9;
inline constexpr int kLanes = 7;
inline constexpr int kAgentCol = 4;
inline constexpr int kStartRow = 8;
inline constexpr int kGoalRow = 0;
inline constexpr std::size_t kObsDim = 9;
inline constexpr std::size_t kNumActions = 3;
inline constexpr int kNumModes = 8;

enum class Action : int { kUp = 0, kDown = 1, kStay = 2 };
enum class Direction : int { kLeft = -1, kRight = 1 };

struct Lane {
  int speed = 1;  // cells per step, 0..2
  Direction direction = Direction::kRight;
  int density = 1;  // obstacles per lane, 1..2

  bool operator==(const Lane&) const = default;
};

struct TaskSpec {
  int mode_id = 0;
  std::array<Lane, kLanes> lanes{};
  double slip_prob = 0.0;
  int episode_limit = 80;
  double gamma = 0.99;

  bool operator==(const TaskSpec&) const = default;
};

using Observation = std::array<double, kObsDim>;

struct EnvState {
  int agent_row = kStartRow;
  int agent_col = kAgentCol;
  std::array<int, kLanes> offsets{};
  int steps_taken = 0;
  bool done = false;
  std::mt19937_64 rng;
};

struct StepResult {
  Observation observation{};
  double reward = 0.0;
  bool done = false;
};

TaskSpec make_task(int mode_id);

/// True when lane `lane` (0-based, row lane + 1) covers the agent column.
bool lane_blocks_agent(const Lane& lane, int offset);

EnvState reset(const TaskSpec& spec, std::uint64_t seed);
Observation observe(const EnvState& state);
StepResult step(EnvState& state, const TaskSpec& spec, Action action);

/// Human-readable mode table.
std::string describe_modes();

}  // namespace ckarl::env
