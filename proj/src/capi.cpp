#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "eifeval/eifeval.h"
#include "eifeval/error.hpp"
#include "eifeval/io.hpp"

struct eif_config {
  eifeval::io::RunConfig run;
};

struct eif_bench {
  std::vector<eifeval::BenchRecord> records;
};

struct eif_rank_result {
  eifeval::ranking::RankingOutcome outcome;
};

namespace {

thread_local std::string last_error;

eif_status to_status(eifeval::ErrorCode code) { return static_cast<eif_status>(static_cast<int>(code)); }

// Runs `body`, translating exceptions into status codes and the thread-local message.
template <class F>
eif_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return EIF_OK;
  } catch (const eifeval::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return EIF_ERR_INTERNAL;
}

void require(const void* p, const char* what) {
  if (p == nullptr) eifeval::fail(eifeval::ErrorCode::invalid_input, std::string(what) + " is NULL");
}

eif_report to_c(const eifeval::estimate::EstimateReport& r) {
  eif_report out{};
  out.method = static_cast<eif_method>(static_cast<int>(r.method));
  out.theta_hat = r.theta_hat;
  out.theta_hat_clamped = r.theta_hat_clamped;
  out.var_influence = r.var_influence;
  out.std_error = r.std_error;
  out.ci_lower = r.ci_lower;
  out.ci_upper = r.ci_upper;
  out.level = r.level;
  out.n = r.n;
  out.m = r.m;
  out.k = r.k;
  return out;
}

eifeval::estimate::EstimateReport from_c(const eif_report& r) {
  eifeval::estimate::EstimateReport out;
  out.method = static_cast<eifeval::estimate::Method>(static_cast<int>(r.method));
  out.theta_hat = r.theta_hat;
  out.theta_hat_clamped = r.theta_hat_clamped;
  out.var_influence = r.var_influence;
  out.std_error = r.std_error;
  out.ci_lower = r.ci_lower;
  out.ci_upper = r.ci_upper;
  out.level = r.level;
  out.n = r.n;
  out.m = r.m;
  out.k = r.k;
  return out;
}

eifeval::ranking::ExperimentOptions options_of(const eifeval::io::RunConfig& run) {
  eifeval::ranking::ExperimentOptions o;
  o.folds = run.folds;
  o.level = run.level;
  o.with_oracle = run.with_oracle;
  return o;
}

template <class F>
eif_status with_config(eif_config* config, F&& apply) {
  return guarded([&] {
    require(config, "config");
    apply(config->run);
  });
}

}  // namespace

extern "C" {

const char* eif_last_error(void) { return last_error.c_str(); }

const char* eif_status_string(eif_status status) {
  switch (status) {
    case EIF_OK: return "ok";
    case EIF_ERR_INVALID_INPUT: return "invalid input";
    case EIF_ERR_PARSE: return "parse error";
    case EIF_ERR_CONTRACT: return "contract violation";
    case EIF_ERR_DEGENERATE_SIGNAL: return "degenerate signal";
    case EIF_ERR_SINGULAR_DESIGN: return "singular design";
    case EIF_ERR_INVALID_FOLDS: return "invalid folds";
    case EIF_ERR_MISSING_TAU: return "missing tau prediction";
    case EIF_ERR_EMPTY_DATASET: return "empty dataset";
    case EIF_ERR_INVALID_M: return "invalid Monte Carlo sample count";
    case EIF_ERR_UNDEFINED_VR: return "variance reduction undefined";
    case EIF_ERR_INVALID_ESTIMATE: return "invalid estimate";
    case EIF_ERR_IO: return "I/O error";
    case EIF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* eif_method_name(eif_method method) {
  switch (method) {
    case EIF_METHOD_NAIVE: return "naive";
    case EIF_METHOD_ONE_STEP_CROSSFIT: return "one_step_crossfit";
    case EIF_METHOD_ONE_STEP_FIXED: return "one_step_fixed";
    case EIF_METHOD_ONE_STEP_ORACLE: return "one_step_oracle";
  }
  return "unknown";
}

const char* eif_version(void) { return "1.0.0"; }

eif_status eif_config_create(eif_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new eif_config{};
  });
}

eif_status eif_config_load_json(const char* path, eif_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto run = eifeval::io::load_run_config(path);
    *out = new eif_config{std::move(run)};
  });
}

void eif_config_destroy(eif_config* config) { delete config; }

eif_status eif_config_validate(const eif_config* config) {
  return guarded([&] {
    require(config, "config");
    config->run.validate();
  });
}

eif_status eif_config_set_n(eif_config* config, size_t n) {
  return with_config(config, [&](auto& run) { run.sim.n = n; });
}

eif_status eif_config_set_mc_samples(eif_config* config, size_t m) {
  return with_config(config, [&](auto& run) { run.sim.m = m; });
}

eif_status eif_config_set_folds(eif_config* config, size_t k) {
  return with_config(config, [&](auto& run) { run.folds = k; });
}

eif_status eif_config_set_trials(eif_config* config, size_t trials) {
  return with_config(config, [&](auto& run) { run.sim.trials = trials; });
}

eif_status eif_config_set_seed(eif_config* config, uint64_t seed) {
  return with_config(config, [&](auto& run) { run.sim.seed = seed; });
}

eif_status eif_config_set_level(eif_config* config, double level) {
  return with_config(config, [&](auto& run) {
    if (!(level > 0.0 && level < 1.0)) eifeval::fail(eifeval::ErrorCode::invalid_input, "level must lie in (0,1)");
    run.level = level;
  });
}

eif_status eif_config_set_rho(eif_config* config, double rho1, double rho2) {
  return with_config(config, [&](auto& run) {
    run.sim.rho1 = rho1;
    run.sim.rho2 = rho2;
  });
}

eif_status eif_config_set_sigma_eta(eif_config* config, double sigma_eta) {
  return with_config(config, [&](auto& run) { run.sim.sigma_eta = sigma_eta; });
}

eif_status eif_config_set_sigma_sq(eif_config* config, const double* sigma_sq, size_t models) {
  return with_config(config, [&](auto& run) {
    if (models == 0) eifeval::fail(eifeval::ErrorCode::invalid_input, "sigma_sq needs at least one model");
    require(sigma_sq, "sigma_sq");
    run.sim.sigma_sq_per_model.assign(sigma_sq, sigma_sq + models);
  });
}

eif_status eif_config_set_model_index(eif_config* config, size_t model_index) {
  return with_config(config, [&](auto& run) { run.model_index = model_index; });
}

eif_status eif_config_set_axis(eif_config* config, eif_axis axis) {
  return with_config(config, [&](auto& run) {
    if (axis != EIF_AXIS_BASE_SIGMA && axis != EIF_AXIS_SIGMA_ETA) {
      eifeval::fail(eifeval::ErrorCode::invalid_input, "unknown axis");
    }
    run.axis = axis == EIF_AXIS_BASE_SIGMA ? eifeval::ranking::SweepAxis::base_sigma
                                           : eifeval::ranking::SweepAxis::sigma_eta;
  });
}

eif_status eif_config_set_grid(eif_config* config, const double* grid, size_t len) {
  return with_config(config, [&](auto& run) {
    if (len == 0) {
      run.grid.clear();
      return;
    }
    require(grid, "grid");
    run.grid.assign(grid, grid + len);
  });
}

eif_status eif_config_set_gap(eif_config* config, double gap) {
  return with_config(config, [&](auto& run) { run.gap = gap; });
}

eif_status eif_config_set_oracle(eif_config* config, int with_oracle) {
  return with_config(config, [&](auto& run) { run.with_oracle = with_oracle != 0; });
}

eif_status eif_config_set_mode(eif_config* config, eif_mode mode) {
  return with_config(config, [&](auto& run) {
    if (mode < EIF_MODE_SIMULATE || mode > EIF_MODE_ESTIMATE) eifeval::fail(eifeval::ErrorCode::invalid_input, "unknown mode");
    run.mode = static_cast<eifeval::io::Mode>(static_cast<int>(mode));
  });
}

eif_status eif_config_set_input(eif_config* config, const char* path) {
  return with_config(config, [&](auto& run) {
    require(path, "path");
    run.input = path;
  });
}

eif_status eif_config_set_output(eif_config* config, const char* path) {
  return with_config(config, [&](auto& run) {
    require(path, "path");
    run.output = path;
  });
}

eif_status eif_config_get_mode(const eif_config* config, eif_mode* mode) {
  return guarded([&] {
    require(config, "config");
    require(mode, "mode");
    *mode = static_cast<eif_mode>(static_cast<int>(config->run.mode));
  });
}

eif_status eif_config_get_level(const eif_config* config, double* level) {
  return guarded([&] {
    require(config, "config");
    require(level, "level");
    *level = config->run.level;
  });
}

eif_status eif_config_get_rho(const eif_config* config, double* rho1, double* rho2) {
  return guarded([&] {
    require(config, "config");
    require(rho1, "rho1");
    require(rho2, "rho2");
    *rho1 = config->run.sim.rho1;
    *rho2 = config->run.sim.rho2;
  });
}

eif_status eif_config_get_input(const eif_config* config, const char** path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    *path = config->run.input.c_str();
  });
}

eif_status eif_config_get_output(const eif_config* config, const char** path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    *path = config->run.output.c_str();
  });
}

eif_status eif_simulate(const eif_config* config, eif_report* naive, eif_report* one_step) {
  return guarded([&] {
    require(config, "config");
    require(naive, "naive");
    require(one_step, "one_step");
    const auto& run = config->run;
    run.validate();
    using namespace eifeval;
    const Stream trial = Stream(run.sim.seed).child(0);
    const auto data = simulate::gen_sim_dataset(run.sim, run.model_index, trial.child(stream_tag::data));
    const auto fitted = estimate::one_step_crossfit(data, MetricKind::squared_error, run.folds, run.level,
                                                    trial.child(stream_tag::folds).child(run.model_index));
    *naive = to_c(estimate::naive_estimate(fitted.breakdown.phi, run.level, MetricKind::squared_error));
    *one_step = to_c(fitted.report);
  });
}

eif_status eif_rank(const eif_config* config, eif_rank_result** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = nullptr;
    const auto& run = config->run;
    run.validate();
    auto outcome = eifeval::ranking::run_ranking_experiment(
        run.sim, eifeval::ranking::identity_permutation(run.sim.models()), options_of(run));
    *out = new eif_rank_result{std::move(outcome)};
  });
}

void eif_rank_result_destroy(eif_rank_result* result) { delete result; }

eif_status eif_rank_result_summary(const eif_rank_result* result, eif_method method, double* exact_match,
                                   double* kendall_mean, size_t* trials) {
  return guarded([&] {
    require(result, "result");
    const eifeval::ranking::RankingSummary* s = nullptr;
    if (method == EIF_METHOD_NAIVE) s = &result->outcome.naive;
    else if (method == EIF_METHOD_ONE_STEP_CROSSFIT) s = &result->outcome.one_step;
    else if (method == EIF_METHOD_ONE_STEP_ORACLE && result->outcome.oracle) s = &*result->outcome.oracle;
    if (s == nullptr) eifeval::fail(eifeval::ErrorCode::invalid_input, "method not part of this ranking result");
    if (exact_match) *exact_match = s->exact_match;
    if (kendall_mean) *kendall_mean = s->kendall_mean;
    if (trials) *trials = s->trials;
  });
}

eif_status eif_sweep_write_csv(const eif_config* config, const char* path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    const auto& run = config->run;
    run.validate();
    const auto grid = run.grid.empty() ? eifeval::ranking::default_grid(run.axis) : run.grid;
    const auto points = eifeval::ranking::sweep(run.sim, run.axis, grid, options_of(run), run.gap);
    eifeval::io::write_sweep(run.axis, points, path);
  });
}

eif_status eif_bench_load(const char* path, eif_bench** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto records = eifeval::io::load_bench_dataset(path);
    *out = new eif_bench{std::move(records)};
  });
}

void eif_bench_destroy(eif_bench* bench) { delete bench; }

size_t eif_bench_size(const eif_bench* bench) { return bench ? bench->records.size() : 0; }

size_t eif_bench_mc_samples(const eif_bench* bench) {
  return bench && !bench->records.empty() ? bench->records.front().mc_samples() : 0;
}

eif_status eif_bench_estimate(const eif_bench* bench, double level, eif_report* naive, eif_report* one_step,
                              size_t* clamped_count) {
  return guarded([&] {
    require(bench, "bench");
    require(naive, "naive");
    require(one_step, "one_step");
    eifeval::nuisance::ClampCounter counter;
    const auto fixed = eifeval::estimate::one_step_fixed(bench->records, level, &counter);
    *naive = to_c(eifeval::estimate::naive_estimate(fixed.breakdown.phi, level));
    *one_step = to_c(fixed.report);
    if (clamped_count) *clamped_count = counter.clamped.load();
  });
}

eif_status eif_write_report_csv(const char* path, const char* model, double gt_fraction, const eif_report* naive,
                                const eif_report* one_step) {
  return guarded([&] {
    require(path, "path");
    require(naive, "naive");
    require(one_step, "one_step");
    eifeval::io::ReportRow row;
    row.model = model ? model : "";
    if (gt_fraction >= 0.0) row.gt = gt_fraction;
    row.naive = from_c(*naive);
    row.one_step = from_c(*one_step);
    eifeval::io::write_report({row}, path);
  });
}

double eif_improvement(double naive_pct, double onestep_pct, double gt_pct) {
  return eifeval::estimate::improvement_metric(naive_pct, onestep_pct, gt_pct);
}

eif_status eif_format_report(const eif_report* report, char* buf, size_t cap) {
  return guarded([&] {
    require(report, "report");
    require(buf, "buf");
    if (cap == 0) eifeval::fail(eifeval::ErrorCode::invalid_input, "buffer capacity is zero");
    const std::string line = eifeval::io::format_report_line(from_c(*report));
    const size_t len = std::min(line.size(), cap - 1);
    std::memcpy(buf, line.data(), len);
    buf[len] = '\0';
    if (len < line.size()) eifeval::fail(eifeval::ErrorCode::invalid_input, "buffer too small");
  });
}

}  // extern "C"
