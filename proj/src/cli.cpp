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

#include "ckarl/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ckarl/analysis.hpp"
#include "ckarl/config.hpp"
#include "ckarl/envs.hpp"
#include "ckarl/errors.hpp"
#include "ckarl/metrics.hpp"
#include "ckarl/pool_io.hpp"
#include "ckarl/run_io.hpp"
#include "ckarl/svg.hpp"
#include "ckarl/trainer.hpp"

namespace ckarl::cli {
namespace {

namespace fs = std::filesystem;

// Input problems the user can fix by changing the command line.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path default_root() {
  const char* env = std::getenv("CKA_OUT_DIR");
  return (env && *env) ? fs::path(env) : fs::path("out");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

bool is_run_dir(const fs::path& p) { return fs::is_regular_file(p / "manifest.txt"); }

// Expands each argument to run directories: a run directory stands for
// itself, any other directory for its run subdirectories in name order.
std::vector<fs::path> expand_runs(const std::vector<std::string>& inputs, std::ostream& err) {
  std::vector<fs::path> runs;
  for (const auto& input : inputs) {
    const fs::path p(input);
    if (is_run_dir(p)) {
      runs.push_back(p);
      continue;
    }
    if (!fs::is_directory(p)) throw UsageError("no such run directory: " + input);
    std::vector<fs::path> children;
    for (const auto& entry : fs::directory_iterator(p)) {
      if (entry.is_directory() && is_run_dir(entry.path())) children.push_back(entry.path());
    }
    std::sort(children.begin(), children.end());
    runs.insert(runs.end(), children.begin(), children.end());
  }
  std::vector<fs::path> usable;
  for (const auto& r : runs) {
    if (fs::exists(r / kFailureMarker)) {
      err << "skipping failed run " << r.string() << '\n';
    } else {
      usable.push_back(r);
    }
  }
  return usable;
}

// ---- run -----------------------------------------------------------------

struct RunOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  std::string method;
  std::string out_dir;
  std::optional<std::size_t> kmax;
  std::string tasks;
  std::optional<long long> delta;
};

struct Job {
  TrainConfig config;
  fs::path dir;
};

std::vector<Job> plan_jobs(const RunOptions& opt, std::vector<int>& modes) {
  ExperimentConfig exp = opt.config_path.empty() ? ExperimentConfig{} : load_experiment(opt.config_path);
  if (!opt.method.empty()) {
    exp.methods.clear();
    std::istringstream in(opt.method);
    std::string name;
    while (std::getline(in, name, ',')) exp.methods.push_back(parse_method(name));
  }
  if (opt.seed) exp.seeds = {*opt.seed};
  if (!opt.seeds.empty()) exp.seeds = parse_seed_range(opt.seeds);
  if (!opt.tasks.empty()) exp.modes = parse_int_list(opt.tasks);
  for (int m : exp.modes) env::make_task(m);
  modes = exp.modes;

  const fs::path root = opt.out_dir.empty() ? default_root() : fs::path(opt.out_dir);
  std::vector<Job> jobs;
  for (Method method : exp.methods) {
    for (std::uint64_t seed : exp.seeds) {
      TrainConfig c = exp.job(method, seed);
      if (opt.kmax) c.k_max = *opt.kmax;
      if (opt.delta) c.steps_per_task = *opt.delta;
      c.validate();
      jobs.push_back({c, root / (std::string(method_name(method)) + "_seed" + std::to_string(seed))});
    }
  }
  return jobs;
}

// Clears what a previous run left behind so reruns are byte-identical.
void prepare_dir(const fs::path& dir) {
  if (is_run_dir(dir)) fs::remove_all(dir);
  fs::create_directories(dir);
}

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  std::vector<int> modes;
  const std::vector<Job> jobs = plan_jobs(opt, modes);
  for (const auto& job : jobs) prepare_dir(job.dir);

  std::vector<std::string> failures(jobs.size());
  const long long n = static_cast<long long>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) {
    const Job& job = jobs[i];
    try {
      RunRecord header;
      header.method = job.config.method;
      header.seed = job.config.seed;
      header.config = job.config;
      header.modes = modes;
      write_run(job.dir, header);
      RunRecord record = run_sequence(modes, job.config,
                                      [&](const RunRecord& partial) { write_run(job.dir, partial); });
      write_run(job.dir, record);
    } catch (const std::exception& e) {
      failures[i] = e.what();
      try {
        write_text(job.dir / kFailureMarker, std::string(e.what()) + '\n');
      } catch (const std::exception&) {
      }
    }
  }

  int code = kExitOk;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (failures[i].empty()) {
      out << "wrote " << jobs[i].dir.string() << '\n';
    } else {
      err << "run " << jobs[i].dir.string() << " failed: " << failures[i] << '\n';
      code = kExitRuntime;
    }
  }
  return code;
}

// ---- metrics -------------------------------------------------------------

int cmd_metrics(const std::vector<std::string>& inputs, const std::string& out_dir, std::ostream& out,
                std::ostream& err) {
  const auto dirs = expand_runs(inputs.empty() ? std::vector<std::string>{default_root().string()} : inputs, err);
  if (dirs.empty()) throw UsageError("no run directories found");
  std::vector<RunRecord> runs;
  for (const auto& d : dirs) runs.push_back(read_run(d));
  std::stable_sort(runs.begin(), runs.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::pair(a.method, a.seed) < std::pair(b.method, b.seed);
  });

  std::vector<std::uint64_t> missing;
  std::vector<metrics::RunMetrics> results;
  for (const auto& run : runs) {
    const RunRecord* baseline = nullptr;
    for (const auto& cand : runs) {
      if (cand.method == Method::kScratch && cand.seed == run.seed && cand.modes == run.modes) {
        baseline = &cand;
        break;
      }
    }
    if (!baseline) {
      if (std::find(missing.begin(), missing.end(), run.seed) == missing.end()) missing.push_back(run.seed);
      continue;
    }
    try {
      results.push_back(metrics::evaluate_run(run, *baseline));
    } catch (const ArgumentError& e) {
      throw std::runtime_error(std::string(method_name(run.method)) + " seed " + std::to_string(run.seed) +
                               ": " + e.what());
    }
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    std::string seeds;
    for (std::size_t i = 0; i < missing.size(); ++i) seeds += (i ? ", " : "") + std::to_string(missing[i]);
    throw UsageError("no SCRATCH baseline run with a matching task sequence for seed(s) " + seeds);
  }

  const fs::path dir = out_dir.empty() ? default_root() : fs::path(out_dir);
  write_text(dir / "summary.csv", metrics::summary_csv(results));
  const std::string table = metrics::summary_table(results);
  write_text(dir / "table.txt", table);
  out << table;
  return kExitOk;
}

// ---- analyze -------------------------------------------------------------

struct LemmaTally {
  std::size_t checks = 0;
  std::size_t violations = 0;
  double worst_slack = -INFINITY;  // max of lhs - rhs

  void add(double lhs, double rhs, bool holds) {
    ++checks;
    if (!holds) ++violations;
    worst_slack = std::max(worst_slack, lhs - rhs);
  }

  std::string line(const std::string& name) const {
    std::ostringstream s;
    s << name << ' ' << (violations == 0 ? "HOLDS" : "VIOLATED") << " checks=" << checks
      << " violations=" << violations << " max(lhs-rhs)=" << format_double(worst_slack) << '\n';
    return s.str();
  }
};

int cmd_analyze(const std::string& run_dir, const std::string& contrast, const std::string& out_dir,
                std::ostream& out) {
  if (!is_run_dir(run_dir)) throw UsageError("no such run directory: " + run_dir);
  const RunRecord run = read_run(run_dir);
  if (run.pool_snapshots.empty() || !run.theta_base) {
    throw UsageError(run_dir + " holds a " + std::string(method_name(run.method)) +
                     " run, which keeps no knowledge pool; analyze needs a CKA or CKA_AVG run");
  }
  const ParamVector& base = *run.theta_base;

  // The pair-gap side inequality is reported but does not decide the exit
  // code: it fails for near-colinear vectors of unequal norm.
  LemmaTally drift, interference, merge, gap;
  for (std::size_t k = 1; k < run.tasks.size() && k < run.pool_snapshots.size() + 1; ++k) {
    const TaskRecord& task = run.tasks[k];
    if (!task.knowledge_vector) continue;
    const KnowledgePool before = pool_from_snapshot(run.pool_snapshots[k - 1], base);

    // Weights the task ended with, against the pool it was trained on.
    std::vector<double> weights;
    if (!task.alpha_history.empty() && task.alpha_history.back().size() == before.size()) {
      weights = task.alpha_history.back();
    } else {
      weights.assign(before.size(), 1.0 / static_cast<double>(before.size()));
    }
    const auto d = analysis::check_drift_bound(before, weights, *task.knowledge_vector);
    drift.add(d.lhs, d.rhs, d.holds);

    const auto sim = similarity_matrix(before);
    double eps = 0.0;
    for (std::size_t i = 0; i < sim.size(); ++i) {
      for (std::size_t j = 0; j < sim.size(); ++j) {
        if (i != j) eps = std::max(eps, std::abs(sim(i, j)));
      }
    }
    const auto r = analysis::check_interference_bound(before, weights, eps);
    interference.add(r.lhs, r.rhs, r.holds);

    // Every mergeable pair of the pool the capacity rule saw after the task.
    const KnowledgePool grown = add_vector(before, *task.knowledge_vector);
    for (std::size_t i = 0; i < grown.size(); ++i) {
      for (std::size_t j = i + 1; j < grown.size(); ++j) {
        if (!grown.mergeable(i) || !grown.mergeable(j)) continue;
        for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
          const auto m = analysis::check_merge_bound(grown[i], grown[j], lambda);
          merge.add(m.merge_error, m.merge_bound, m.merge_holds);
          gap.add(m.gap, m.gap_bound, m.gap_holds);
        }
      }
    }
  }

  std::string lemmas = drift.line("drift_bound") + interference.line("interference_bound") +
                       merge.line("merge_bound") + gap.line("merge_gap_bound (informational)");

  std::vector<analysis::NamedVectors> groups;
  for (std::size_t k = 0; k < run.pool_snapshots.size(); ++k) {
    groups.push_back({"pool_task" + std::to_string(k + 1), run.pool_snapshots[k].vectors});
  }
  analysis::NamedVectors knowledge{"knowledge_vectors", {}};
  analysis::NamedVectors checkpoints{std::string(method_name(run.method)) + "_checkpoints", {}};
  for (const auto& t : run.tasks) {
    if (t.knowledge_vector) knowledge.vectors.push_back(*t.knowledge_vector);
    if (!t.final_theta.empty()) checkpoints.vectors.push_back(t.final_theta);
  }
  if (knowledge.vectors.size() >= 2) groups.push_back(std::move(knowledge));
  if (checkpoints.vectors.size() >= 2) groups.push_back(std::move(checkpoints));
  if (!contrast.empty()) {
    if (!is_run_dir(contrast)) throw UsageError("no such run directory: " + contrast);
    const RunRecord other = read_run(contrast);
    analysis::NamedVectors g{std::string(method_name(other.method)) + "_checkpoints_contrast", {}};
    for (const auto& t : other.tasks) {
      if (!t.final_theta.empty()) g.vectors.push_back(t.final_theta);
    }
    if (g.vectors.size() >= 2) groups.push_back(std::move(g));
  }
  const auto report = analysis::orthogonality_report(groups);

  const fs::path dir = out_dir.empty() ? fs::path(run_dir) : fs::path(out_dir);
  write_text(dir / "lemmas.txt", lemmas);
  write_text(dir / "orthogonality.csv", report.csv());
  write_text(dir / "orthogonality.txt", report.text());
  for (const auto& g : report.groups) {
    write_text(dir / ("similarity_" + g.name + ".svg"), svg::heatmap(g.name, g.matrix));
  }
  out << lemmas << report.text();
  return drift.violations + interference.violations + merge.violations == 0 ? kExitOk : kExitRuntime;
}

// ---- plot ----------------------------------------------------------------

int cmd_plot(const std::vector<std::string>& inputs, const std::string& out_dir, std::ostream& out,
             std::ostream& err) {
  if (inputs.empty()) throw UsageError("plot needs at least one run directory");
  const auto dirs = expand_runs(inputs, err);
  if (dirs.empty()) throw UsageError("no run directories found");

  // Methods in order of first appearance, each with its runs.
  std::vector<std::pair<Method, std::vector<RunRecord>>> by_method;
  std::size_t tasks = 0;
  std::vector<int> modes;
  for (const auto& d : dirs) {
    RunRecord r = read_run(d);
    tasks = std::max(tasks, r.tasks.size());
    if (r.modes.size() > modes.size()) modes = r.modes;
    auto it = std::find_if(by_method.begin(), by_method.end(),
                           [&](const auto& e) { return e.first == r.method; });
    if (it == by_method.end()) {
      by_method.push_back({r.method, {}});
      it = std::prev(by_method.end());
    }
    it->second.push_back(std::move(r));
  }

  const fs::path dir = out_dir.empty() ? default_root() / "plots" : fs::path(out_dir);
  for (std::size_t k = 0; k < tasks; ++k) {
    std::vector<svg::Series> series;
    for (const auto& [method, runs] : by_method) {
      // Mean over seeds at each eval point every run of this method shares.
      std::vector<std::pair<double, double>> points;
      std::vector<const Curve*> curves;
      for (const auto& r : runs) {
        if (k < r.tasks.size() && !r.tasks[k].curve.empty()) curves.push_back(&r.tasks[k].curve);
      }
      if (curves.empty()) continue;
      std::size_t len = curves.front()->size();
      for (const auto* c : curves) len = std::min(len, c->size());
      const long long offset = static_cast<long long>(k) * runs.front().config.steps_per_task;
      for (std::size_t p = 0; p < len; ++p) {
        double sum = 0.0;
        for (const auto* c : curves) sum += (*c)[p].value;
        points.emplace_back(static_cast<double>((*curves.front())[p].step - offset),
                            sum / static_cast<double>(curves.size()));
      }
      series.push_back({std::string(method_name(method)), std::move(points)});
    }
    const std::string title = "task " + std::to_string(k + 1) +
                              (k < modes.size() ? " (mode " + std::to_string(modes[k]) + ")" : "");
    const fs::path file = dir / ("task" + std::to_string(k + 1) + ".svg");
    write_text(file, svg::line_chart(title, series, "step", "success rate"));
    out << "wrote " << file.string() << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continual reinforcement learning with composable knowledge vectors", "ckarl"};
  app.require_subcommand(1);

  RunOptions run_opt;
  std::uint64_t seed_value = 0;
  long long delta_value = 0;
  std::size_t kmax_value = 0;
  auto* run = app.add_subcommand("run", "Train every (method, seed) job of an experiment");
  run->add_option("--config", run_opt.config_path, "Experiment config file")->check(CLI::ExistingFile);
  auto* seed_opt = run->add_option("--seed", seed_value, "Single experiment seed");
  run->add_option("--seeds", run_opt.seeds, "Seed range A..B or list")->excludes(seed_opt);
  run->add_option("--method", run_opt.method, "Method name or comma-separated names");
  run->add_option("--out", run_opt.out_dir, "Output root (default $CKA_OUT_DIR or ./out)");
  auto* kmax_opt = run->add_option("--kmax", kmax_value, "Knowledge pool capacity");
  run->add_option("--tasks", run_opt.tasks, "Comma-separated mode ids");
  auto* delta_opt = run->add_option("--delta", delta_value, "Environment steps per task");

  std::vector<std::string> metric_inputs;
  std::string metric_out;
  auto* met = app.add_subcommand("metrics", "Summarize runs into summary.csv");
  met->add_option("runs", metric_inputs, "Run directories or roots holding them");
  met->add_option("--out", metric_out, "Where to write summary.csv and table.txt");

  std::string analyze_dir, analyze_contrast, analyze_out;
  auto* ana = app.add_subcommand("analyze", "Check the pool bounds and report vector similarity");
  ana->add_option("run", analyze_dir, "Run directory of a pool method")->required();
  ana->add_option("--contrast", analyze_contrast, "Extra run whose checkpoints are compared too");
  ana->add_option("--out", analyze_out, "Output directory (default: the run directory)");

  std::vector<std::string> plot_inputs;
  std::string plot_out;
  auto* plot = app.add_subcommand("plot", "Draw per-task learning curves as SVG");
  plot->add_option("runs", plot_inputs, "Run directories or roots holding them");
  plot->add_option("--out", plot_out, "Output directory (default <root>/plots)");

  auto* modes = app.add_subcommand("modes", "Print the environment mode table");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) {
      if (*seed_opt) run_opt.seed = seed_value;
      if (*kmax_opt) run_opt.kmax = kmax_value;
      if (*delta_opt) run_opt.delta = delta_value;
      return cmd_run(run_opt, out, err);
    }
    if (met->parsed()) return cmd_metrics(metric_inputs, metric_out, out, err);
    if (ana->parsed()) return cmd_analyze(analyze_dir, analyze_contrast, analyze_out, out);
    if (plot->parsed()) return cmd_plot(plot_inputs, plot_out, out, err);
    if (modes->parsed()) {
      out << env::describe_modes();
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace ckarl::cli
