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

// Text snapshot format for knowledge pools and parameter vectors:
//
//   d=<int> k=<int> kmax=<int>
//   <d space-separated decimals, 17 significant digits>   (k lines)
//
// 17 significant digits round-trip every finite double exactly.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ckarl/param_vector.hpp"
#include "ckarl/vector_pool.hpp"

namespace ckarl {

struct VectorSnapshot {
  std::size_t dim = 0;
  std::size_t kmax = 0;
  std::vector<ParamVector> vectors;
};

void write_snapshot(std::ostream& out, const VectorSnapshot& snap);
VectorSnapshot read_snapshot(std::istream& in);

VectorSnapshot snapshot_of(const KnowledgePool& pool);
/// Rebuilds a pool around `base`. The null vector is treated as pinned when
/// the first stored vector is exactly zero.
KnowledgePool pool_from_snapshot(const VectorSnapshot& snap, ParamVector base);

void save_snapshot(const std::filesystem::path& path, const VectorSnapshot& snap);
VectorSnapshot load_snapshot(const std::filesystem::path& path);

void save_vector(const std::filesystem::path& path, const ParamVector& v);
ParamVector load_vector(const std::filesystem::path& path);

/// Shortest decimal that round-trips exactly; used for CSV outputs.
std::string format_double(double x);

}  // namespace ckarl
