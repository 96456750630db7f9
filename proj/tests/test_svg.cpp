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

#include "ckarl/svg.hpp"
#include "test_util.hpp"

using namespace ckarl;
using ckarl::testing::count_of;
using ckarl::testing::xml_problem;

TEST_SUITE("svg") {

TEST_CASE("well-formedness checker catches the usual mistakes") {
  CHECK(xml_problem("<svg><g a=\"1\"/></svg>").empty());
  CHECK(xml_problem("<?xml version=\"1.0\"?>\n<svg>&amp;</svg>\n").empty());
  CHECK_FALSE(xml_problem("<svg><g></svg>").empty());
  CHECK_FALSE(xml_problem("<svg a=1/>").empty());
  CHECK_FALSE(xml_problem("<svg>a & b</svg>").empty());
  CHECK_FALSE(xml_problem("<svg a=\"1\" a=\"2\"/>").empty());
  CHECK_FALSE(xml_problem("<svg/><svg/>").empty());
  CHECK_FALSE(xml_problem("<svg>").empty());
}

TEST_CASE("escape") {
  CHECK(svg::escape("a<b & \"c\">") == "a&lt;b &amp; &quot;c&quot;&gt;");
  CHECK(svg::escape("plain") == "plain");
}

TEST_CASE("line chart draws one polyline per series with an ordered legend") {
  std::vector<svg::Series> series;
  for (int s = 0; s < 10; ++s) {
    svg::Series one{"series_" + std::to_string(s), {}};
    for (int k = 0; k < 5; ++k) one.points.push_back({k * 100.0, (s + k) % 3 / 2.0});
    series.push_back(one);
  }
  const auto doc = svg::line_chart("task <1> & more", series, "step", "success");
  CHECK(xml_problem(doc) == "");
  CHECK(count_of(doc, "<polyline") == 10);
  CHECK(doc.find("task &lt;1&gt; &amp; more") != std::string::npos);

  // Legend entries appear in series order, colors cycle through the palette.
  const auto legend = doc.substr(doc.find("<g class=\"legend\""));
  std::size_t last = 0;
  for (int s = 0; s < 10; ++s) {
    const auto label = legend.find(">series_" + std::to_string(s) + "<");
    REQUIRE(label != std::string::npos);
    CHECK(label > last);
    last = label;
  }
  std::size_t pos = 0;
  for (int s = 0; s < 10; ++s) {
    pos = legend.find("stroke=\"", pos);
    REQUIRE(pos != std::string::npos);
    pos += 8;
    CHECK(legend.substr(pos, 7) == svg::kPalette[s % svg::kPalette.size()]);
  }
}

TEST_CASE("line chart edge cases stay well formed") {
  CHECK(xml_problem(svg::line_chart("empty", {}, "x", "y")) == "");
  const std::vector<svg::Series> single{{"one", {{5.0, 0.5}}}};
  const auto doc = svg::line_chart("one point", single, "x", "y");
  CHECK(xml_problem(doc) == "");
  CHECK(count_of(doc, "<polyline") == 1);
  CHECK(doc.find("nan") == std::string::npos);
  // Out-of-range y values are clamped to the plot area.
  const std::vector<svg::Series> wild{{"w", {{0, -3.0}, {1, 7.0}}}};
  CHECK(svg::line_chart("w", wild, "x", "y") .find("nan") == std::string::npos);
}

TEST_CASE("line chart output is deterministic") {
  const std::vector<svg::Series> s{{"a", {{0, 0.1}, {10, 0.9}}}, {"b", {{0, 0.4}, {10, 0.2}}}};
  CHECK(svg::line_chart("t", s, "x", "y") == svg::line_chart("t", s, "x", "y"));
}

TEST_CASE("heatmap has one cell per entry and prints values") {
  kernels::Matrix m(3);
  for (std::size_t i = 0; i < 3; ++i) m(i, i) = 1.0;
  m(0, 1) = m(1, 0) = -0.25;
  m(0, 2) = m(2, 0) = 0.5;
  const auto doc = svg::heatmap("pool & friends", m);
  CHECK(xml_problem(doc) == "");
  CHECK(doc.find("-0.25") != std::string::npos);
  CHECK(doc.find("pool &amp; friends") != std::string::npos);
  // White background plus nine cells.
  CHECK(count_of(doc, "<rect") == 1 + 9);
  CHECK(doc.find("#ff0000") != std::string::npos);  // +1 on the diagonal is pure red
}

}  // TEST_SUITE
