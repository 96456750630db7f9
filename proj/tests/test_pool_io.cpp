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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "ckarl/pool_io.hpp"
#include "test_util.hpp"

using namespace ckarl;
using ckarl::testing::random_vector;

TEST_SUITE("pool_io") {

TEST_CASE("snapshot text format") {
  VectorSnapshot snap{2, 3, {ParamVector{0, 0}, ParamVector{0.5, -1.25}}};
  std::ostringstream out;
  write_snapshot(out, snap);
  CHECK(out.str() == "d=2 k=2 kmax=3\n0 0\n0.5 -1.25\n");
}

TEST_CASE("snapshot round trip is exact") {
  auto gen = ckarl::testing::rng(31);
  VectorSnapshot snap{40, 5, {}};
  for (int j = 0; j < 4; ++j) snap.vectors.push_back(random_vector(gen, 40, std::pow(10.0, j * 3 - 5)));
  snap.vectors[1][3] = std::numeric_limits<double>::denorm_min();
  snap.vectors[2][7] = -std::numeric_limits<double>::max();
  snap.vectors[3][0] = 0.1;
  std::stringstream io;
  write_snapshot(io, snap);
  const auto back = read_snapshot(io);
  CHECK(back.dim == 40);
  CHECK(back.kmax == 5);
  REQUIRE(back.vectors.size() == 4);
  for (std::size_t j = 0; j < 4; ++j) CHECK(back.vectors[j] == snap.vectors[j]);
}

TEST_CASE("file round trip and single vectors") {
  const auto dir = ckarl::testing::scratch_dir("pool_io");
  const ParamVector v{1.0 / 3, 2.0 / 3, -7e-300};
  save_vector(dir / "v.txt", v);
  CHECK(load_vector(dir / "v.txt") == v);

  KnowledgePool pool(ParamVector{1, 2, 3}, 3);
  pool.append(ParamVector{0.25, 0.5, 0.75});
  save_snapshot(dir / "p.txt", snapshot_of(pool));
  const auto rebuilt = pool_from_snapshot(load_snapshot(dir / "p.txt"), ParamVector{1, 2, 3});
  CHECK(rebuilt == pool);
  CHECK(rebuilt.null_pinned());
  CHECK_THROWS_AS(load_vector(dir / "p.txt"), ArgumentError);
  CHECK_THROWS_AS(load_snapshot(dir / "missing.txt"), std::runtime_error);
}

TEST_CASE("pool_from_snapshot infers the pin from a zero first vector") {
  VectorSnapshot snap{2, 4, {ParamVector{1, 0}, ParamVector{0, 0}}};
  const auto pool = pool_from_snapshot(snap, ParamVector{0, 0});
  CHECK_FALSE(pool.null_pinned());
  CHECK(pool.capacity() == 4);
  CHECK_THROWS_AS(pool_from_snapshot(snap, ParamVector{0, 0, 0}), ArgumentError);
}

TEST_CASE("malformed snapshots are rejected") {
  auto read = [](const std::string& text) {
    std::istringstream in(text);
    return read_snapshot(in);
  };
  CHECK_THROWS_AS(read(""), ArgumentError);
  CHECK_THROWS_AS(read("dim=2\n"), ArgumentError);
  CHECK_THROWS_AS(read("d=2 k=2 kmax=3\n1 2\n"), ArgumentError);
  CHECK_THROWS_AS(read("d=2 k=1 kmax=3\n1 2 3\n"), ArgumentError);
  CHECK_THROWS_WITH_AS(read("d=2 k=1 kmax=3\n1 x\n"), "snapshot: bad number 'x'", ArgumentError);
}

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-2.5e-7) == "-2.5e-07");
  auto gen = ckarl::testing::rng(32);
  for (double x : random_vector(gen, 200, 1e5)) CHECK(std::stod(format_double(x)) == x);
}

}  // TEST_SUITE
