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

#include "ckarl/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ckarl/errors.hpp"
#include "ckarl/pool_io.hpp"

namespace ckarl {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError("invalid number '" + text + "'");
  return value;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_number<std::size_t>(item));
  return out;
}

std::string join_sizes(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out;
}

ConfigError at_line(int line, const std::string& what) {
  return ConfigError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_number<int>(item));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  std::vector<std::uint64_t> out;
  if (dots != std::string::npos) {
    const auto lo = parse_number<std::uint64_t>(trim(text.substr(0, dots)));
    const auto hi = parse_number<std::uint64_t>(trim(text.substr(dots + 2)));
    if (hi < lo) throw ConfigError("empty seed range '" + text + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  } else {
    for (const auto& item : split(text, ',')) out.push_back(parse_number<std::uint64_t>(item));
  }
  if (out.empty()) throw ConfigError("empty seed list");
  return out;
}

bool apply_train_key(TrainConfig& c, const std::string& key, const std::string& value) {
  if (key == "steps_per_task" || key == "delta") c.steps_per_task = parse_number<long long>(value);
  else if (key == "batch_episodes") c.batch_episodes = parse_number<int>(value);
  else if (key == "lr_actor") c.lr_actor = parse_number<double>(value);
  else if (key == "lr_critic") c.lr_critic = parse_number<double>(value);
  else if (key == "adam_beta1") c.adam_beta1 = parse_number<double>(value);
  else if (key == "adam_beta2") c.adam_beta2 = parse_number<double>(value);
  else if (key == "adam_eps") c.adam_eps = parse_number<double>(value);
  else if (key == "entropy_coef") c.entropy_coef = parse_number<double>(value);
  else if (key == "gamma") c.gamma = parse_number<double>(value);
  else if (key == "max_grad_norm") c.max_grad_norm = parse_number<double>(value);
  else if (key == "eval_every") c.eval_every = parse_number<long long>(value);
  else if (key == "eval_episodes") c.eval_episodes = parse_number<int>(value);
  else if (key == "episode_limit") c.episode_limit = parse_number<int>(value);
  else if (key == "k_max" || key == "kmax") c.k_max = parse_number<std::size_t>(value);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(value);
  else if (key == "method") c.method = parse_method(value);
  else if (key == "actor_hidden") c.actor_hidden = parse_size_list(value);
  else if (key == "critic_hidden") c.critic_hidden = parse_size_list(value);
  else if (key == "eval_mode") {
    if (value == "sampled") c.eval_mode = EvalMode::kSampled;
    else if (value == "greedy") c.eval_mode = EvalMode::kGreedy;
    else throw ConfigError("eval_mode must be 'sampled' or 'greedy'");
  } else {
    return false;
  }
  return true;
}

std::vector<ConfigEntry> parse_config_text(const std::string& text) {
  std::vector<ConfigEntry> entries;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;
    if (content.front() == '[') {
      if (content.back() != ']') throw at_line(line, "unterminated section header");
      section = trim(content.substr(1, content.size() - 2));
      try {
        parse_method(section);
      } catch (const ConfigError& e) {
        throw at_line(line, e.what());
      }
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw at_line(line, "expected 'key = value'");
    ConfigEntry entry{section, trim(content.substr(0, eq)), trim(content.substr(eq + 1)), line};
    if (entry.key.empty()) throw at_line(line, "missing key");
    entries.push_back(std::move(entry));
  }
  return entries;
}

ExperimentConfig parse_experiment(const std::string& text) {
  ExperimentConfig exp;
  bool seeds_given = false;
  for (const auto& e : parse_config_text(text)) {
    try {
      if (!e.section.empty()) {
        TrainConfig probe;
        if (!apply_train_key(probe, e.key, e.value)) throw ConfigError("unknown key '" + e.key + "'");
        exp.overrides[parse_method(e.section)].push_back(e);
      } else if (e.key == "methods") {
        exp.methods.clear();
        for (const auto& name : split(e.value, ',')) exp.methods.push_back(parse_method(name));
        if (exp.methods.empty()) throw ConfigError("empty method list");
      } else if (e.key == "seeds") {
        exp.seeds = parse_seed_range(e.value);
        seeds_given = true;
      } else if (e.key == "tasks") {
        exp.modes = parse_int_list(e.value);
      } else if (!apply_train_key(exp.base, e.key, e.value)) {
        throw ConfigError("unknown key '" + e.key + "'");
      }
    } catch (const ConfigError& err) {
      throw at_line(e.line, err.what());
    }
  }
  if (!seeds_given) exp.seeds = {exp.base.seed};
  return exp;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment(text.str());
}

TrainConfig ExperimentConfig::job(Method method, std::uint64_t seed) const {
  TrainConfig c = base;
  c.method = method;
  c.seed = seed;
  if (auto it = overrides.find(method); it != overrides.end()) {
    for (const auto& e : it->second) apply_train_key(c, e.key, e.value);
  }
  c.method = method;
  c.seed = seed;
  return c;
}

std::string describe_run(const TrainConfig& c, const std::vector<int>& modes) {
  std::ostringstream out;
  out << "method = " << method_name(c.method) << '\n'
      << "seed = " << c.seed << '\n'
      << "tasks = ";
  for (std::size_t i = 0; i < modes.size(); ++i) out << (i ? "," : "") << modes[i];
  out << '\n'
      << "steps_per_task = " << c.steps_per_task << '\n'
      << "batch_episodes = " << c.batch_episodes << '\n'
      << "lr_actor = " << format_double(c.lr_actor) << '\n'
      << "lr_critic = " << format_double(c.lr_critic) << '\n'
      << "adam_beta1 = " << format_double(c.adam_beta1) << '\n'
      << "adam_beta2 = " << format_double(c.adam_beta2) << '\n'
      << "adam_eps = " << format_double(c.adam_eps) << '\n'
      << "entropy_coef = " << format_double(c.entropy_coef) << '\n'
      << "gamma = " << format_double(c.gamma) << '\n'
      << "max_grad_norm = " << format_double(c.max_grad_norm) << '\n'
      << "eval_every = " << c.eval_every << '\n'
      << "eval_episodes = " << c.eval_episodes << '\n'
      << "eval_mode = " << (c.eval_mode == EvalMode::kGreedy ? "greedy" : "sampled") << '\n'
      << "episode_limit = " << c.episode_limit << '\n'
      << "k_max = " << c.k_max << '\n'
      << "actor_hidden = " << join_sizes(c.actor_hidden) << '\n'
      << "critic_hidden = " << join_sizes(c.critic_hidden) << '\n';
  return out.str();
}

}  // namespace ckarl
