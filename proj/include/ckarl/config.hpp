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

// Experiment configuration files: flat `key = value` lines, `#` comments and
// optional `[METHOD]` sections whose keys override the defaults for that
// method only. The same format is used for run manifests.
//
//   methods = CKA, SCRATCH
//   seeds = 1..5
//   tasks = 0,1,2,4,5
//   steps_per_task = 20000
//   [CKA]
//   k_max = 3

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ckarl/run_record.hpp"

namespace ckarl {

struct ConfigEntry {
  std::string section;  // empty for the global section
  std::string key;
  std::string value;
  int line = 0;
};

struct ExperimentConfig {
  TrainConfig base;
  std::vector<Method> methods{Method::kCka};
  std::vector<std::uint64_t> seeds{0};
  std::vector<int> modes{0, 1, 2, 4, 5};
  std::map<Method, std::vector<ConfigEntry>> overrides;

  /// Config for one (method, seed) job, with method overrides applied.
  TrainConfig job(Method method, std::uint64_t seed) const;
};

/// Throws ConfigError("line N: ...") on malformed input.
std::vector<ConfigEntry> parse_config_text(const std::string& text);
ExperimentConfig parse_experiment(const std::string& text);
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// Applies one key to a TrainConfig; returns false for keys it does not own.
bool apply_train_key(TrainConfig& config, const std::string& key, const std::string& value);

std::vector<int> parse_int_list(const std::string& text);
/// "A..B" (inclusive) or a comma-separated list.
std::vector<std::uint64_t> parse_seed_range(const std::string& text);

/// Manifest text for one run: every TrainConfig key plus the task list.
std::string describe_run(const TrainConfig& config, const std::vector<int>& modes);

}  // namespace ckarl
