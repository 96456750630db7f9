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

#include "ckarl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ckarl/errors.hpp"
#include "ckarl/pool_io.hpp"

namespace ckarl::analysis {

BoundReport check_drift_bound(const KnowledgePool& pool, std::span<const double> weights,
                              std::span<const double> current) {
  const ParamVector theta = compose_params(pool, weights, current);
  BoundReport r;
  r.lhs = norm((theta - pool.base()).span());
  double largest = 0.0;
  for (const auto& v : pool.vectors()) largest = std::max(largest, norm(v));
  r.rhs = largest + norm(current);
  r.holds = r.lhs <= r.rhs + kSlack;
  return r;
}

InterferenceReport check_interference_bound(const KnowledgePool& pool,
                                            std::span<const double> weights, double epsilon) {
  require_same_length(weights.size(), pool.size());
  const std::size_t n = pool.size();
  const auto s = similarity_matrix(pool);
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) norms[i] = norm(pool[i]);

  InterferenceReport r;
  ParamVector mix(pool.dim());
  for (std::size_t j = 0; j < n; ++j) axpy(weights[j], pool[j], mix.span());
  r.lhs = dot(mix, mix);

  double diagonal = 0.0;
  double cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diagonal += weights[i] * weights[i] * norms[i] * norms[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      cross += weights[i] * weights[j] * norms[i] * norms[j];
      r.max_off_diagonal = std::max(r.max_off_diagonal, std::abs(s(i, j)));
    }
  }
  r.rhs = diagonal + epsilon * cross;
  r.precondition = r.max_off_diagonal <= epsilon;
  r.holds = r.lhs <= r.rhs + kSlack;
  return r;
}

MergeReport check_merge_bound(std::span<const double> v_m, std::span<const double> v_n,
                              double lambda) {
  require_same_length(v_m.size(), v_n.size());
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ArgumentError("merge weight must lie in [0, 1]");
  const double mu = 1.0 - lambda;
  MergeReport r;
  r.similarity = kernels::cosine(v_m, v_n);

  double err_sq = 0.0;
  double gap_sq = 0.0;
  for (std::size_t i = 0; i < v_m.size(); ++i) {
    const double merged = 0.5 * (v_m[i] + v_n[i]);
    const double e = lambda * v_m[i] + mu * v_n[i] - merged;
    const double g = v_m[i] - v_n[i];
    err_sq += e * e;
    gap_sq += g * g;
  }
  r.merge_error = std::sqrt(err_sq);
  r.gap = std::sqrt(gap_sq);
  r.merge_bound = 0.5 * r.gap;
  r.merge_holds = r.merge_error <= r.merge_bound + kSlack;

  r.gap_bound = std::sqrt(std::max(0.0, 2.0 * (1.0 - r.similarity))) * std::max(norm(v_m), norm(v_n));
  r.gap_holds = r.gap <= r.gap_bound + kSlack;
  return r;
}

OrthogonalityReport orthogonality_report(std::span<const NamedVectors> groups) {
  OrthogonalityReport report;
  for (const auto& g : groups) {
    SimilarityGroup out;
    out.name = g.name;
    out.matrix = kernels::cosine_matrix(g.vectors);
    bool first = true;
    for (std::size_t i = 0; i < g.vectors.size(); ++i) {
      if (norm(g.vectors[i]) < kernels::kDegenerateNorm) continue;
      for (std::size_t j = i + 1; j < g.vectors.size(); ++j) {
        if (norm(g.vectors[j]) < kernels::kDegenerateNorm) continue;
        const double s = out.matrix(i, j);
        out.min_off_diagonal = first ? s : std::min(out.min_off_diagonal, s);
        out.max_off_diagonal = first ? s : std::max(out.max_off_diagonal, s);
        first = false;
        ++out.off_diagonal_pairs;
      }
    }
    report.groups.push_back(std::move(out));
  }
  return report;
}

std::string OrthogonalityReport::csv() const {
  std::ostringstream out;
  out << "snapshot,i,j,similarity\n";
  for (const auto& g : groups) {
    for (std::size_t i = 0; i < g.matrix.size(); ++i) {
      for (std::size_t j = 0; j < g.matrix.size(); ++j) {
        out << g.name << ',' << i << ',' << j << ',' << format_double(g.matrix(i, j)) << '\n';
      }
    }
  }
  return out.str();
}

std::string OrthogonalityReport::text() const {
  std::ostringstream out;
  char buf[64];
  for (const auto& g : groups) {
    out << g.name << " (" << g.matrix.size() << " vectors)\n";
    for (std::size_t i = 0; i < g.matrix.size(); ++i) {
      out << "  ";
      for (std::size_t j = 0; j < g.matrix.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%8.4f", g.matrix(i, j));
        out << buf;
      }
      out << '\n';
    }
    if (g.off_diagonal_pairs > 0) {
      std::snprintf(buf, sizeof(buf), "  off-diagonal range [%.4f, %.4f]\n", g.min_off_diagonal,
                    g.max_off_diagonal);
      out << buf;
    } else {
      out << "  no non-degenerate off-diagonal pairs\n";
    }
  }
  return out.str();
}

}  // namespace ckarl::analysis
