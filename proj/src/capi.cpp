// Copyright (c) The gltmean authors.
// SPDX-License-Identifier: Apache-2.0

#include "gltmean/gltmean.h"

#include <memory>
#include <new>
#include <string>
#include <vector>

#include "gltmean/config.hpp"
#include "gltmean/experiments.hpp"

struct gltm_experiment {
  gltmean::ExperimentSpec spec;
};

struct gltm_experiment_list {
  std::vector<gltmean::ExperimentSpec> specs;
};

struct gltm_report {
  gltmean::ExperimentReport report;
  std::string table;
  std::vector<std::string> files;
};

namespace {

thread_local std::string last_error;

gltm_status to_status(gltmean::Errc c) {
  using gltmean::Errc;
  switch (c) {
    case Errc::invalid_argument: return GLTM_E_INVALID_ARGUMENT;
    case Errc::size_mismatch: return GLTM_E_SIZE_MISMATCH;
    case Errc::non_finite: return GLTM_E_NON_FINITE;
    case Errc::not_hpd: return GLTM_E_NOT_HPD;
    case Errc::non_convergence: return GLTM_E_NON_CONVERGENCE;
    case Errc::construction: return GLTM_E_CONSTRUCTION;
    case Errc::config: return GLTM_E_CONFIG;
    case Errc::io: return GLTM_E_IO;
  }
  return GLTM_E_INTERNAL;
}

template <class Fn>
gltm_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return GLTM_OK;
  } catch (const gltmean::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return GLTM_E_INTERNAL;
}

gltm_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return GLTM_E_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* gltm_version(void) { return "0.1.0"; }

const char* gltm_status_name(gltm_status status) {
  switch (status) {
    case GLTM_OK: return "ok";
    case GLTM_E_INVALID_ARGUMENT: return "invalid_argument";
    case GLTM_E_SIZE_MISMATCH: return "size_mismatch";
    case GLTM_E_NON_FINITE: return "non_finite";
    case GLTM_E_NOT_HPD: return "not_hpd";
    case GLTM_E_NON_CONVERGENCE: return "non_convergence";
    case GLTM_E_CONSTRUCTION: return "construction";
    case GLTM_E_CONFIG: return "config";
    case GLTM_E_IO: return "io";
    case GLTM_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* gltm_last_error(void) { return last_error.c_str(); }

gltm_status gltm_catalog(gltm_experiment_list** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new gltm_experiment_list{gltmean::catalog()}; });
}

gltm_status gltm_load_config(const char* path, gltm_experiment_list** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new gltm_experiment_list{gltmean::load_config(path)}; });
}

size_t gltm_list_size(const gltm_experiment_list* list) { return list ? list->specs.size() : 0; }

gltm_status gltm_list_get(const gltm_experiment_list* list, size_t i, gltm_experiment** out) {
  if (!list) return null_argument("list");
  if (!out) return null_argument("out");
  if (i >= list->specs.size()) {
    last_error = "list index out of range";
    return GLTM_E_INVALID_ARGUMENT;
  }
  return guarded([&] { *out = new gltm_experiment{list->specs[i]}; });
}

void gltm_list_free(gltm_experiment_list* list) { delete list; }

gltm_status gltm_experiment_from_catalog(const char* id, gltm_experiment** out) {
  if (!id) return null_argument("id");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new gltm_experiment{gltmean::catalog_entry(id)}; });
}

const char* gltm_experiment_id(const gltm_experiment* e) { return e ? e->spec.id.c_str() : ""; }

const char* gltm_experiment_description(const gltm_experiment* e) {
  return e ? e->spec.description.c_str() : "";
}

gltm_status gltm_experiment_set_n_list(gltm_experiment* e, const long* n, size_t count) {
  if (!e) return null_argument("experiment");
  if (!n && count) return null_argument("n");
  return guarded([&] {
    auto copy = e->spec;
    copy.n_list.assign(n, n + count);
    copy.validate();
    e->spec = std::move(copy);
  });
}

gltm_status gltm_experiment_set_grid(gltm_experiment* e, long mx, long mtheta) {
  if (!e) return null_argument("experiment");
  return guarded([&] {
    auto copy = e->spec;
    copy.grid = {mx, mtheta};
    copy.validate();
    e->spec = std::move(copy);
  });
}

gltm_status gltm_experiment_set_threshold(gltm_experiment* e, double threshold) {
  if (!e) return null_argument("experiment");
  return guarded([&] {
    auto copy = e->spec;
    copy.threshold = threshold;
    copy.validate();
    e->spec = std::move(copy);
  });
}

gltm_status gltm_experiment_set_candidate_tol(gltm_experiment* e, double tol) {
  if (!e) return null_argument("experiment");
  return guarded([&] {
    auto copy = e->spec;
    copy.candidate_tol = tol;
    copy.validate();
    e->spec = std::move(copy);
  });
}

void gltm_experiment_free(gltm_experiment* e) { delete e; }

gltm_status gltm_run(const gltm_experiment* e, const gltm_run_options* options, gltm_report** out) {
  if (!e) return null_argument("experiment");
  if (!out) return null_argument("out");
  return guarded([&] {
    gltmean::RunOptions opts;
    if (options) {
      if (options->out_dir) opts.out_dir = options->out_dir;
      opts.svg = options->svg != 0;
      if (options->threads < 1)
        throw gltmean::Error(gltmean::Errc::invalid_argument, "threads must be >= 1");
      opts.threads = options->threads;
    }
    auto r = std::make_unique<gltm_report>();
    r->report = gltmean::run_experiment(e->spec, opts);
    r->table = gltmean::format_report(r->report);
    for (const auto& f : r->report.files) r->files.push_back(f.string());
    *out = r.release();
  });
}

size_t gltm_report_row_count(const gltm_report* r) { return r ? r->report.rows.size() : 0; }

gltm_status gltm_report_get_row(const gltm_report* r, size_t i, gltm_report_row* out) {
  if (!r) return null_argument("report");
  if (!out) return null_argument("out");
  if (i >= r->report.rows.size()) {
    last_error = "row index out of range";
    return GLTM_E_INVALID_ARGUMENT;
  }
  const auto& row = r->report.rows[i];
  *out = gltm_report_row{row.n,    row.d_n,           row.lambda_min, row.lambda_max,
                         row.cond2, row.zero_fraction, row.sup_dist,   row.mean_abs_dist};
  return GLTM_OK;
}

size_t gltm_report_alpha_count(const gltm_report* r) { return r ? r->report.alpha.size() : 0; }

gltm_status gltm_report_get_alpha(const gltm_report* r, size_t j, double* out) {
  if (!r) return null_argument("report");
  if (!out) return null_argument("out");
  if (j >= r->report.alpha.size()) {
    last_error = "alpha index out of range";
    return GLTM_E_INVALID_ARGUMENT;
  }
  *out = r->report.alpha[j];
  return GLTM_OK;
}

double gltm_report_target_measure(const gltm_report* r) { return r ? r->report.target_measure : 0; }

const char* gltm_report_table(const gltm_report* r) { return r ? r->table.c_str() : ""; }

size_t gltm_report_file_count(const gltm_report* r) { return r ? r->files.size() : 0; }

const char* gltm_report_file(const gltm_report* r, size_t i) {
  return r && i < r->files.size() ? r->files[i].c_str() : nullptr;
}

void gltm_report_free(gltm_report* r) { delete r; }

gltm_status gltm_geometric_mean_real(size_t n, const double* a, const double* b, double* out) {
  if (!a || !b || !out) return null_argument("matrix pointer");
  if (n == 0) {
    last_error = "matrix size must be positive";
    return GLTM_E_INVALID_ARGUMENT;
  }
  return guarded([&] {
    using Mat = gltmean::RealMatrix<double>;
    const auto size = Eigen::Index(n);
    const Mat ma = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                  Eigen::RowMajor>>(a, size, size);
    const Mat mb = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                  Eigen::RowMajor>>(b, size, size);
    if (!ma.allFinite() || !mb.allFinite())
      throw gltmean::Error(gltmean::Errc::non_finite, "input contains non-finite entries");
    const auto g = gltmean::geometric_mean(gltmean::HermitianMatrix(ma), gltmean::HermitianMatrix(mb));
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        out, size, size) = g.real_part();
  });
}

}  // extern "C"
