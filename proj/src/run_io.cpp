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

#include "ckarl/run_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "ckarl/config.hpp"
#include "ckarl/errors.hpp"
#include "ckarl/pool_io.hpp"

namespace ckarl {
namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

double to_double(const std::string& s) {
  double x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc()) throw ArgumentError("bad number '" + s + "'");
  return x;
}

long long to_int(const std::string& s) {
  long long x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc()) throw ArgumentError("bad integer '" + s + "'");
  return x;
}

// Data rows of a CSV file with the expected header.
std::vector<std::vector<std::string>> read_csv(const fs::path& path, const std::string& header) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw ArgumentError(path.string() + ": expected header '" + header + "'");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(split_csv(line));
  }
  return rows;
}

std::string task_file(const char* stem, std::size_t k) {
  return std::string(stem) + std::to_string(k) + ".txt";
}

}  // namespace

std::string curve_csv(const RunRecord& record) {
  std::ostringstream out;
  const auto method = method_name(record.method);
  out << "task,step,success_rate,method,seed\n";
  for (std::size_t k = 0; k < record.tasks.size(); ++k) {
    for (const auto& p : record.tasks[k].curve) {
      out << k + 1 << ',' << p.step << ',' << format_double(p.value) << ',' << method << ','
          << record.seed << '\n';
    }
  }
  return out.str();
}

std::string final_eval_csv(const RunRecord& record) {
  std::ostringstream out;
  const auto method = method_name(record.method);
  out << "task,mode,end_of_task,final,method,seed\n";
  for (std::size_t k = 0; k < record.tasks.size(); ++k) {
    const auto& t = record.tasks[k];
    out << k + 1 << ',' << t.mode_id << ',' << format_double(t.end_of_task_rate) << ','
        << format_double(t.final_rate) << ',' << method << ',' << record.seed << '\n';
  }
  return out.str();
}

void write_run(const fs::path& dir, const RunRecord& record) {
  fs::create_directories(dir);
  write_text(dir / "manifest.txt", describe_run(record.config, record.modes));
  write_text(dir / "curve.csv", curve_csv(record));
  write_text(dir / "final_eval.csv", final_eval_csv(record));

  for (std::size_t k = 0; k < record.tasks.size(); ++k) {
    const auto& t = record.tasks[k];
    save_vector(dir / task_file("theta_task", k + 1), t.final_theta);
    if (t.knowledge_vector) save_vector(dir / task_file("knowledge_task", k + 1), *t.knowledge_vector);
  }
  if (record.theta_base) {
    save_vector(dir / "theta_base.txt", *record.theta_base);
    std::ostringstream alpha;
    alpha << "task,point,index,alpha\n";
    for (std::size_t k = 0; k < record.tasks.size(); ++k) {
      const auto& hist = record.tasks[k].alpha_history;
      for (std::size_t p = 0; p < hist.size(); ++p) {
        for (std::size_t j = 0; j < hist[p].size(); ++j) {
          alpha << k + 1 << ',' << p << ',' << j << ',' << format_double(hist[p][j]) << '\n';
        }
      }
    }
    write_text(dir / "alpha.csv", alpha.str());
  }
  for (std::size_t k = 0; k < record.pool_snapshots.size(); ++k) {
    save_snapshot(dir / task_file("pool_task", k + 1), record.pool_snapshots[k]);
  }
}

RunRecord read_run(const fs::path& dir) {
  if (!fs::exists(dir / "manifest.txt")) {
    throw ArgumentError(dir.string() + " is not a run directory (no manifest.txt)");
  }
  RunRecord record;
  for (const auto& e : parse_config_text(read_text(dir / "manifest.txt"))) {
    if (e.key == "tasks") {
      record.modes = parse_int_list(e.value);
    } else if (!apply_train_key(record.config, e.key, e.value)) {
      throw ConfigError("manifest line " + std::to_string(e.line) + ": unknown key '" + e.key + "'");
    }
  }
  record.method = record.config.method;
  record.seed = record.config.seed;
  record.tasks.resize(record.modes.size());

  for (const auto& row : read_csv(dir / "curve.csv", "task,step,success_rate,method,seed")) {
    if (row.size() != 5) throw ArgumentError("curve.csv: malformed row");
    const auto k = static_cast<std::size_t>(to_int(row[0]));
    if (k < 1 || k > record.tasks.size()) throw ArgumentError("curve.csv: task out of range");
    record.tasks[k - 1].curve.push_back({to_int(row[1]), to_double(row[2])});
  }
  const auto finals = read_csv(dir / "final_eval.csv", "task,mode,end_of_task,final,method,seed");
  if (finals.size() != record.tasks.size()) throw ArgumentError("missing re-evaluations");
  for (const auto& row : finals) {
    if (row.size() != 6) throw ArgumentError("final_eval.csv: malformed row");
    const auto k = static_cast<std::size_t>(to_int(row[0]));
    if (k < 1 || k > record.tasks.size()) throw ArgumentError("final_eval.csv: task out of range");
    auto& t = record.tasks[k - 1];
    t.mode_id = static_cast<int>(to_int(row[1]));
    t.end_of_task_rate = to_double(row[2]);
    t.final_rate = to_double(row[3]);
  }

  for (std::size_t k = 0; k < record.tasks.size(); ++k) {
    auto& t = record.tasks[k];
    if (const auto p = dir / task_file("theta_task", k + 1); fs::exists(p)) t.final_theta = load_vector(p);
    if (const auto p = dir / task_file("knowledge_task", k + 1); fs::exists(p)) {
      t.knowledge_vector = load_vector(p);
    }
  }
  if (fs::exists(dir / "theta_base.txt")) record.theta_base = load_vector(dir / "theta_base.txt");
  if (fs::exists(dir / "alpha.csv")) {
    for (const auto& row : read_csv(dir / "alpha.csv", "task,point,index,alpha")) {
      if (row.size() != 4) throw ArgumentError("alpha.csv: malformed row");
      const auto k = static_cast<std::size_t>(to_int(row[0]));
      const auto p = static_cast<std::size_t>(to_int(row[1]));
      if (k < 1 || k > record.tasks.size()) throw ArgumentError("alpha.csv: task out of range");
      auto& hist = record.tasks[k - 1].alpha_history;
      if (hist.size() <= p) hist.resize(p + 1);
      hist[p].push_back(to_double(row[3]));
    }
  }
  for (std::size_t k = 1;; ++k) {
    const auto p = dir / task_file("pool_task", k);
    if (!fs::exists(p)) break;
    record.pool_snapshots.push_back(load_snapshot(p));
  }
  return record;
}

}  // namespace ckarl
