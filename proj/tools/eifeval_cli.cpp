// Command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eifeval/eifeval.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct ConfigDeleter {
  void operator()(eif_config* c) const { eif_config_destroy(c); }
};
struct BenchDeleter {
  void operator()(eif_bench* b) const { eif_bench_destroy(b); }
};
struct RankDeleter {
  void operator()(eif_rank_result* r) const { eif_rank_result_destroy(r); }
};
using ConfigPtr = std::unique_ptr<eif_config, ConfigDeleter>;
using BenchPtr = std::unique_ptr<eif_bench, BenchDeleter>;
using RankPtr = std::unique_ptr<eif_rank_result, RankDeleter>;

// Thrown to unwind with the library's message and exit code 1.
struct ApiFailure {
  eif_status status;
  std::string message;
};

void check(eif_status s) {
  if (s != EIF_OK) throw ApiFailure{s, eif_last_error()};
}

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<std::size_t> m;
  std::optional<std::size_t> folds;
  std::optional<std::size_t> trials;
  std::optional<double> level;
  std::optional<double> rho1;
  std::optional<double> rho2;
  std::optional<double> sigma_eta;
  std::vector<double> sigma_sq;
  std::optional<std::size_t> model_index;
  std::string out;
};

ConfigPtr make_config(const Overrides& o) {
  eif_config* raw = nullptr;
  check(o.config_path.empty() ? eif_config_create(&raw) : eif_config_load_json(o.config_path.c_str(), &raw));
  ConfigPtr cfg(raw);
  if (o.seed) check(eif_config_set_seed(cfg.get(), *o.seed));
  if (o.n) check(eif_config_set_n(cfg.get(), *o.n));
  if (o.m) check(eif_config_set_mc_samples(cfg.get(), *o.m));
  if (o.folds) check(eif_config_set_folds(cfg.get(), *o.folds));
  if (o.trials) check(eif_config_set_trials(cfg.get(), *o.trials));
  if (o.level) check(eif_config_set_level(cfg.get(), *o.level));
  if (o.sigma_eta) check(eif_config_set_sigma_eta(cfg.get(), *o.sigma_eta));
  if (!o.sigma_sq.empty()) check(eif_config_set_sigma_sq(cfg.get(), o.sigma_sq.data(), o.sigma_sq.size()));
  if (o.model_index) check(eif_config_set_model_index(cfg.get(), *o.model_index));
  if (!o.out.empty()) check(eif_config_set_output(cfg.get(), o.out.c_str()));
  if (o.rho1 || o.rho2) {
    double rho1 = 0.0;
    double rho2 = 0.0;
    check(eif_config_get_rho(cfg.get(), &rho1, &rho2));
    check(eif_config_set_rho(cfg.get(), o.rho1.value_or(rho1), o.rho2.value_or(rho2)));
  }
  return cfg;
}

void print_report(const eif_report& r) {
  char line[512];
  check(eif_format_report(&r, line, sizeof(line)));
  std::printf("%s\n", line);
}

std::string output_path(const eif_config* cfg) {
  const char* out = nullptr;
  check(eif_config_get_output(cfg, &out));
  return out ? out : "";
}

int run_simulate(const Overrides& o) {
  auto cfg = make_config(o);
  eif_report naive{};
  eif_report one_step{};
  check(eif_simulate(cfg.get(), &naive, &one_step));
  print_report(naive);
  print_report(one_step);
  return kExitOk;
}

void print_summary(const eif_rank_result* res, eif_method method) {
  double exact = 0.0;
  double kendall = 0.0;
  std::size_t trials = 0;
  check(eif_rank_result_summary(res, method, &exact, &kendall, &trials));
  std::printf("method=%s exact_match=%.4f kendall_mean=%.4f trials=%zu\n", eif_method_name(method), exact, kendall, trials);
}

int run_rank(const Overrides& o, bool no_oracle) {
  auto cfg = make_config(o);
  if (no_oracle) check(eif_config_set_oracle(cfg.get(), 0));
  eif_rank_result* raw = nullptr;
  check(eif_rank(cfg.get(), &raw));
  RankPtr res(raw);
  print_summary(res.get(), EIF_METHOD_NAIVE);
  print_summary(res.get(), EIF_METHOD_ONE_STEP_CROSSFIT);
  if (!no_oracle) print_summary(res.get(), EIF_METHOD_ONE_STEP_ORACLE);
  return kExitOk;
}

int run_sweep(const Overrides& o, const std::string& axis, const std::vector<double>& grid, std::optional<double> gap,
              bool no_oracle) {
  auto cfg = make_config(o);
  if (!axis.empty()) check(eif_config_set_axis(cfg.get(), axis == "sigma_eta" ? EIF_AXIS_SIGMA_ETA : EIF_AXIS_BASE_SIGMA));
  if (!grid.empty()) check(eif_config_set_grid(cfg.get(), grid.data(), grid.size()));
  if (gap) check(eif_config_set_gap(cfg.get(), *gap));
  if (no_oracle) check(eif_config_set_oracle(cfg.get(), 0));
  const std::string out = output_path(cfg.get());
  if (out.empty()) throw CLI::RequiredError("--out");
  check(eif_sweep_write_csv(cfg.get(), out.c_str()));
  std::printf("wrote %s\n", out.c_str());
  return kExitOk;
}

BenchPtr load_bench(const Overrides& o, std::string input) {
  if (input.empty() && !o.config_path.empty()) {
    auto cfg = make_config(o);
    const char* path = nullptr;
    check(eif_config_get_input(cfg.get(), &path));
    input = path ? path : "";
  }
  if (input.empty()) throw CLI::RequiredError("input");
  eif_bench* raw = nullptr;
  check(eif_bench_load(input.c_str(), &raw));
  return BenchPtr(raw);
}

int run_estimate(const Overrides& o, const std::string& input, std::optional<double> gt_pct, const std::string& model) {
  auto cfg = make_config(o);
  auto bench = load_bench(o, input);
  double level = 0.95;
  check(eif_config_get_level(cfg.get(), &level));
  eif_report naive{};
  eif_report one_step{};
  std::size_t clamped = 0;
  check(eif_bench_estimate(bench.get(), level, &naive, &one_step, &clamped));
  print_report(naive);
  print_report(one_step);
  if (clamped > 0) std::fprintf(stderr, "warning: %zu tau predictions clamped into [0,1]\n", clamped);
  if (gt_pct) {
    const double improv = eif_improvement(naive.theta_hat * 100.0, one_step.theta_hat * 100.0, *gt_pct);
    std::printf("improv_pct=%.2f\n", improv);
  }
  const std::string out = output_path(cfg.get());
  if (!out.empty()) {
    check(eif_write_report_csv(out.c_str(), model.c_str(), gt_pct ? *gt_pct / 100.0 : -1.0, &naive, &one_step));
  }
  return kExitOk;
}

int run_validate(const Overrides& o, const std::string& input) {
  auto bench = load_bench(o, input);
  std::printf("ok: %zu records, M=%zu\n", eif_bench_size(bench.get()), eif_bench_mc_samples(bench.get()));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Efficient-influence-function estimates of model evaluation metrics"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(eif_version()));

  Overrides o;
  app.add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--n", o.n, "Instances per dataset (N)");
  app.add_option("--m-samples", o.m, "Monte Carlo samples per instance (M)");
  app.add_option("--folds", o.folds, "Cross-fitting folds (K)");
  app.add_option("--trials", o.trials, "Ranking trials (R)");
  app.add_option("--level", o.level, "Confidence level")->check(CLI::Range(0.0, 1.0));
  app.add_option("--rho1", o.rho1, "Correlation of the first auxiliary response");
  app.add_option("--rho2", o.rho2, "Correlation of the second auxiliary response");
  app.add_option("--sigma-eta", o.sigma_eta, "Auxiliary noise standard deviation");
  app.add_option("--sigma-sq", o.sigma_sq, "Per-model output variances")->delimiter(',');
  app.add_option("--out", o.out, "Output path");

  auto* simulate = app.add_subcommand("simulate", "Estimate one simulated dataset naively and by one-step");
  simulate->add_option("--model-index", o.model_index, "Which model's variance to simulate (0-based)");

  bool rank_no_oracle = false;
  auto* rank = app.add_subcommand("rank", "Repeated-trial ranking experiment");
  rank->add_flag("--no-oracle", rank_no_oracle, "Skip the closed-form oracle run");

  std::string axis;
  std::vector<double> grid;
  std::optional<double> gap;
  bool sweep_no_oracle = false;
  auto* sweep = app.add_subcommand("sweep", "Ranking accuracy across a parameter grid (CSV)");
  sweep->add_option("--axis", axis, "base_sigma or sigma_eta")->check(CLI::IsMember({"base_sigma", "sigma_eta"}));
  sweep->add_option("--grid", grid, "Comma-separated grid values")->delimiter(',');
  sweep->add_option("--gap", gap, "Variance gap between consecutive models (base_sigma axis)");
  sweep->add_flag("--no-oracle", sweep_no_oracle, "Skip the closed-form oracle run");

  std::string estimate_input;
  std::optional<double> gt_pct;
  std::string model_name;
  auto* estimate = app.add_subcommand("estimate", "One-step estimate from a benchmark JSONL file");
  estimate->add_option("input", estimate_input, "Benchmark JSONL");
  estimate->add_option("--gt", gt_pct, "Ground-truth accuracy in percent (enables Improv.)");
  estimate->add_option("--model", model_name, "Model name for the report CSV");

  std::string validate_input;
  auto* validate = app.add_subcommand("validate", "Check a benchmark JSONL file against the data contract");
  validate->add_option("input", validate_input, "Benchmark JSONL");

  try {
    app.parse(argc, argv);
    if (*simulate) return run_simulate(o);
    if (*rank) return run_rank(o, rank_no_oracle);
    if (*sweep) return run_sweep(o, axis, grid, gap, sweep_no_oracle);
    if (*estimate) return run_estimate(o, estimate_input, gt_pct, model_name);
    if (*validate) return run_validate(o, validate_input);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::fprintf(stderr, "%s", app.help().c_str());
    return kExitUsage;
  } catch (const ApiFailure& f) {
    std::fprintf(stderr, "error (%s): %s\n", eif_status_string(f.status), f.message.c_str());
    return kExitFailure;
  }
  return kExitUsage;
}
