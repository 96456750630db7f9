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

#include "ckarl/pool_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ckarl {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

std::string format_17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void write_snapshot(std::ostream& out, const VectorSnapshot& snap) {
  out << "d=" << snap.dim << " k=" << snap.vectors.size() << " kmax=" << snap.kmax << '\n';
  for (const auto& v : snap.vectors) {
    require_same_length(v.size(), snap.dim);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) out << ' ';
      out << format_17(v[i]);
    }
    out << '\n';
  }
}

VectorSnapshot read_snapshot(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ArgumentError("snapshot: missing header");
  VectorSnapshot snap;
  std::size_t k = 0;
  if (std::sscanf(header.c_str(), "d=%zu k=%zu kmax=%zu", &snap.dim, &k, &snap.kmax) != 3) {
    throw ArgumentError("snapshot: malformed header '" + header + "'");
  }
  snap.vectors.reserve(k);
  std::string line;
  for (std::size_t row = 0; row < k; ++row) {
    if (!std::getline(in, line)) throw ArgumentError("snapshot: truncated vector list");
    std::istringstream fields(line);
    std::vector<double> values;
    values.reserve(snap.dim);
    std::string tok;
    while (fields >> tok) {
      double x = 0.0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        throw ArgumentError("snapshot: bad number '" + tok + "'");
      }
      values.push_back(x);
    }
    if (values.size() != snap.dim) {
      throw ArgumentError("snapshot: vector " + std::to_string(row) + " has " +
                          std::to_string(values.size()) + " entries, expected " +
                          std::to_string(snap.dim));
    }
    snap.vectors.emplace_back(std::move(values));
  }
  return snap;
}

VectorSnapshot snapshot_of(const KnowledgePool& pool) {
  return {pool.dim(), pool.capacity(), {pool.vectors().begin(), pool.vectors().end()}};
}

KnowledgePool pool_from_snapshot(const VectorSnapshot& snap, ParamVector base) {
  require_same_length(base.size(), snap.dim);
  const bool pinned =
      !snap.vectors.empty() &&
      std::all_of(snap.vectors.front().begin(), snap.vectors.front().end(),
                  [](double x) { return x == 0.0; });
  return KnowledgePool(std::move(base), snap.vectors, std::max<std::size_t>(snap.kmax, 1), pinned);
}

void save_snapshot(const std::filesystem::path& path, const VectorSnapshot& snap) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_snapshot(out, snap);
}

VectorSnapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return read_snapshot(in);
}

void save_vector(const std::filesystem::path& path, const ParamVector& v) {
  save_snapshot(path, VectorSnapshot{v.size(), 1, {v}});
}

ParamVector load_vector(const std::filesystem::path& path) {
  auto snap = load_snapshot(path);
  if (snap.vectors.size() != 1) throw ArgumentError("expected a single vector in " + path.string());
  return std::move(snap.vectors.front());
}

}  // namespace ckarl
