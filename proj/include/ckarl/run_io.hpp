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

// On-disk layout of one run directory:
//
//   manifest.txt        full configuration (config-file syntax)
//   curve.csv           task,step,success_rate,method,seed
//   final_eval.csv      task,mode,end_of_task,final,method,seed
//   alpha.csv           task,point,index,alpha     (pool methods)
//   theta_base.txt      base parameters            (pool methods)
//   pool_task<k>.txt    pool snapshot after task k (pool methods)
//   knowledge_task<k>.txt, theta_task<k>.txt
//
// Tasks are numbered from 1 in every file.

#include <filesystem>

#include "ckarl/run_record.hpp"

namespace ckarl {

void write_run(const std::filesystem::path& dir, const RunRecord& record);

/// Loads everything write_run produced. Missing optional files leave the
/// corresponding fields empty.
RunRecord read_run(const std::filesystem::path& dir);

std::string curve_csv(const RunRecord& record);
std::string final_eval_csv(const RunRecord& record);

}  // namespace ckarl
