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

// Numerical checks of the norm inequalities behind knowledge reuse and
// merging, and the cosine-similarity (orthogonality) report over pools.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ckarl/kernels.hpp"
#include "ckarl/param_vector.hpp"
#include "ckarl/vector_pool.hpp"

namespace ckarl::analysis {

/// Absolute slack allowed on every inequality.
inline constexpr double kSlack = 1e-9;

struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// ||compose(pool, weights, current) - base|| <= max_j ||v_j|| + ||current||.
BoundReport check_drift_bound(const KnowledgePool& pool, std::span<const double> weights,
                              std::span<const double> current);

struct InterferenceReport {
  double lhs = 0.0;  // ||sum_j w_j v_j||^2
  double rhs = 0.0;  // sum_j w_j^2 ||v_j||^2 + eps * sum_{i != j} w_i w_j ||v_i|| ||v_j||
  double max_off_diagonal = 0.0;  // max_{i != j} |S_ij|
  bool precondition = false;      // max_off_diagonal <= epsilon
  bool holds = false;
};

InterferenceReport check_interference_bound(const KnowledgePool& pool,
                                            std::span<const double> weights, double epsilon);

struct MergeReport {
  double similarity = 0.0;
  // ||lambda v_m + (1 - lambda) v_n - (v_m + v_n) / 2|| <= ||v_m - v_n|| / 2
  double merge_error = 0.0;
  double merge_bound = 0.0;
  bool merge_holds = false;
  // ||v_m - v_n|| <= sqrt(2 (1 - S_mn)) max(||v_m||, ||v_n||)
  double gap = 0.0;
  double gap_bound = 0.0;
  bool gap_holds = false;
};

MergeReport check_merge_bound(std::span<const double> v_m, std::span<const double> v_n,
                              double lambda);

struct SimilarityGroup {
  std::string name;
  kernels::Matrix matrix;
  double min_off_diagonal = 0.0;
  double max_off_diagonal = 0.0;
  std::size_t off_diagonal_pairs = 0;  // pairs with both vectors non-degenerate
};

struct NamedVectors {
  std::string name;
  std::vector<ParamVector> vectors;
};

struct OrthogonalityReport {
  std::vector<SimilarityGroup> groups;

  /// `snapshot,i,j,similarity` rows for every matrix entry.
  std::string csv() const;
  std::string text() const;
};

OrthogonalityReport orthogonality_report(std::span<const NamedVectors> groups);

}  // namespace ckarl::analysis
