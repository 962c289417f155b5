// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <memory>

#include <CLI11.hpp>

#include "gltmean/gltmean.h"

namespace gltmean::cli {

namespace {

struct ListDeleter {
  void operator()(gltm_experiment_list* l) const { gltm_list_free(l); }
};
struct ExperimentDeleter {
  void operator()(gltm_experiment* e) const { gltm_experiment_free(e); }
};
struct ReportDeleter {
  void operator()(gltm_report* r) const { gltm_report_free(r); }
};

using ListPtr = std::unique_ptr<gltm_experiment_list, ListDeleter>;
using ExperimentPtr = std::unique_ptr<gltm_experiment, ExperimentDeleter>;
using ReportPtr = std::unique_ptr<gltm_report, ReportDeleter>;

ListPtr load_list(const std::string& config_path) {
  gltm_experiment_list* raw = nullptr;
  const gltm_status st =
      config_path.empty() ? gltm_catalog(&raw) : gltm_load_config(config_path.c_str(), &raw);
  if (st != GLTM_OK) throw UsageError(gltm_last_error());
  return ListPtr(raw);
}

std::vector<ExperimentPtr> entries(const gltm_experiment_list* list) {
  std::vector<ExperimentPtr> out;
  for (size_t i = 0; i < gltm_list_size(list); ++i) {
    gltm_experiment* e = nullptr;
    if (gltm_list_get(list, i, &e) != GLTM_OK) throw std::runtime_error(gltm_last_error());
    out.emplace_back(e);
  }
  return out;
}

// Resolves ids against the config entries first, then the catalog.
std::vector<ExperimentPtr> select(const RunConfig& cfg) {
  std::vector<ExperimentPtr> pool;
  if (!cfg.config_path.empty()) pool = entries(load_list(cfg.config_path).get());
  std::vector<ExperimentPtr> catalog = entries(load_list("").get());

  std::vector<ExperimentPtr> chosen;
  auto take_copy = [&](const gltm_experiment* src) {
    gltm_experiment* copy = nullptr;
    if (gltm_experiment_from_catalog(gltm_experiment_id(src), &copy) == GLTM_OK) {
      chosen.emplace_back(copy);
    }
  };
  if (cfg.ids.empty()) {
    if (pool.empty()) throw UsageError("run: give experiment ids, 'all', or --config FILE");
    for (auto& e : pool) chosen.push_back(std::move(e));
    return chosen;
  }
  for (const std::string& id : cfg.ids) {
    if (id == "all") {
      for (const auto& e : catalog) take_copy(e.get());
      for (auto& e : pool)
        if (e) chosen.push_back(std::move(e));
      continue;
    }
    auto in_pool = std::find_if(pool.begin(), pool.end(),
                                [&](const ExperimentPtr& e) { return e && id == gltm_experiment_id(e.get()); });
    if (in_pool != pool.end()) {
      chosen.push_back(std::move(*in_pool));
      continue;
    }
    gltm_experiment* e = nullptr;
    if (gltm_experiment_from_catalog(id.c_str(), &e) != GLTM_OK)
      throw UsageError("unknown experiment id '" + id + "' (see 'list')");
    chosen.emplace_back(e);
  }
  return chosen;
}

void check(gltm_status st) {
  if (st != GLTM_OK) throw UsageError(gltm_last_error());
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"GLT sequences and matrix geometric means: experiment runner", "gltmean"};
  app.require_subcommand(0, 1);
  RunConfig cfg;

  auto* list = app.add_subcommand("list", "List the built-in experiments");
  auto* run = app.add_subcommand("run", "Run experiments and write reports");
  run->add_option("ids", cfg.ids, "Experiment ids, or 'all'");
  run->add_option("--n", cfg.n_list, "Comma-separated n values, e.g. 40,80")->delimiter(',');
  run->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
  std::vector<long> grid;
  run->add_option("--grid", grid, "Symbol grid MX,MTHETA")->delimiter(',')->expected(2);
  double threshold = 0;
  auto* thr = run->add_option("--threshold", threshold, "Zero-set threshold");
  run->add_flag("--svg", cfg.svg, "Also write overlay SVGs");
  run->add_option("--config", cfg.config_path, "JSON experiment config");
  double eps_tol = 0;
  auto* eps = run->add_option("--eps-tol", eps_tol, "Candidate-symbol convergence tolerance");
  run->add_option("--threads", cfg.threads, "Thread count hint")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    cfg.command = Command::help;
    cfg.help_text = app.help();
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (list->parsed()) {
    cfg.command = Command::list;
    return cfg;
  }
  if (!run->parsed()) {
    cfg.command = Command::help;
    cfg.help_text = app.help();
    return cfg;
  }
  cfg.command = Command::run;
  if (cfg.ids.empty() && cfg.config_path.empty())
    throw UsageError("run: give experiment ids, 'all', or --config FILE");
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
    if (cfg.n_list[i] < 2) throw UsageError("--n: entries must be >= 2");
    if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1])
      throw UsageError("--n: entries must be strictly increasing");
  }
  if (!grid.empty()) {
    if (grid.size() != 2 || grid[0] < 1 || grid[1] < 1)
      throw UsageError("--grid: expected two positive integers MX,MTHETA");
    cfg.grid = std::make_pair(grid[0], grid[1]);
  }
  if (thr->count()) {
    if (!(threshold >= 0)) throw UsageError("--threshold must be >= 0");
    cfg.threshold = threshold;
  }
  if (eps->count()) {
    if (!(eps_tol > 0)) throw UsageError("--eps-tol must be positive");
    cfg.eps_tol = eps_tol;
  }
  if (cfg.threads < 1) throw UsageError("--threads must be >= 1");
  if (cfg.out_dir.empty()) throw UsageError("--out must not be empty");
  return cfg;
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == Command::help) {
    out << cfg.help_text;
    return 0;
  }
  if (cfg.command == Command::list) {
    for (const auto& e : entries(load_list("").get()))
      out << gltm_experiment_id(e.get()) << "\t" << gltm_experiment_description(e.get()) << "\n";
    return 0;
  }

  std::vector<ExperimentPtr> chosen = select(cfg);
  for (auto& e : chosen) {
    if (!cfg.n_list.empty()) check(gltm_experiment_set_n_list(e.get(), cfg.n_list.data(), cfg.n_list.size()));
    if (cfg.grid) check(gltm_experiment_set_grid(e.get(), cfg.grid->first, cfg.grid->second));
    if (cfg.threshold) check(gltm_experiment_set_threshold(e.get(), *cfg.threshold));
    if (cfg.eps_tol) check(gltm_experiment_set_candidate_tol(e.get(), *cfg.eps_tol));
  }

  int failures = 0;
  const gltm_run_options opts{cfg.out_dir.c_str(), cfg.svg ? 1 : 0, cfg.threads};
  for (const auto& e : chosen) {
    gltm_report* raw = nullptr;
    const gltm_status st = gltm_run(e.get(), &opts, &raw);
    if (st != GLTM_OK) {
      ++failures;
      err << "error: " << gltm_experiment_id(e.get()) << " [" << gltm_status_name(st)
          << "]: " << gltm_last_error() << "\n";
      continue;
    }
    ReportPtr report(raw);
    out << gltm_report_table(report.get()) << "\n";
  }
  return failures == 0 ? 0 : 1;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return execute(parse_args(argc, argv), out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gltmean::cli
