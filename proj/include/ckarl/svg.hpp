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

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ckarl/kernels.hpp"

namespace ckarl::svg {

/// Series colors, assigned in input order and cycled after eight.
inline constexpr std::array<const char*, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// One polyline per series, y fixed to [0, 1], legend in series order.
std::string line_chart(const std::string& title, std::span<const Series> series,
                       const std::string& x_label, const std::string& y_label);

/// Cell-colored similarity table with values printed in each cell; colors
/// map [-1, 1] from blue through white to red.
std::string heatmap(const std::string& title, const kernels::Matrix& m);

std::string escape(const std::string& text);

}  // namespace ckarl::svg
