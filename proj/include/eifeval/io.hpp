#ifndef EIFEVAL_IO_HPP
#define EIFEVAL_IO_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eifeval/core.hpp"
#include "eifeval/estimate.hpp"
#include "eifeval/ranking.hpp"
#include "eifeval/simulate.hpp"

namespace eifeval::io {

// Benchmark JSONL: one object per line with exactly the keys
// id, question, answer, ground_truth, phi, aux, tau_pred.
BenchRecord parse_bench_line(std::string_view line, std::size_t line_number = 0);
std::string serialize_bench_record(const BenchRecord& record);

// Blank lines are skipped. Every record must carry the same M.
std::vector<BenchRecord> load_bench_dataset(const std::string& path);

// Tables show fractions as percentages with 2 decimals, ties rounded half to even.
std::string format_percent(double fraction);

struct ReportRow {
  std::string model;
  std::optional<double> gt;  // fraction; GT and Improv. columns stay empty without it
  estimate::EstimateReport naive;
  estimate::EstimateReport one_step;
};

inline constexpr std::string_view kReportHeader =
    "model,gt_pct,naive_pct,onestep_pct,onestep_clamped_pct,improv_pct,n,m,se,ci_lo,ci_hi";
inline constexpr std::string_view kSweepHeader = "axis,axis_value,method,exact_match,kendall_mean,trials";

std::string render_report(const std::vector<ReportRow>& rows);
void write_report(const std::vector<ReportRow>& rows, const std::string& path);

std::string render_sweep(ranking::SweepAxis axis, const std::vector<ranking::SweepPoint>& points);
void write_sweep(ranking::SweepAxis axis, const std::vector<ranking::SweepPoint>& points, const std::string& path);

// One stdout line per report, e.g. "method=naive theta_hat=0.7500 ...".
std::string format_report_line(const estimate::EstimateReport& report);

enum class Mode { simulate, sweep, rank, estimate };

// Defaults reproduce the reference simulation settings
// (N=1000, M=500, K=5, R=100, rho=(0.8, 0.6), sigma_eta=0.6).
struct RunConfig {
  Mode mode = Mode::simulate;
  simulate::SimConfig sim;
  std::size_t folds = nuisance::kDefaultFolds;
  double level = 0.95;
  std::size_t model_index = 0;
  ranking::SweepAxis axis = ranking::SweepAxis::base_sigma;
  std::vector<double> grid;  // empty = default grid for the axis
  double gap = ranking::kDefaultVarianceGap;
  bool with_oracle = true;
  std::string input;
  std::string output;

  void validate() const;
};

Mode mode_from_string(std::string_view name);
std::string_view to_string(Mode mode);

// Unknown keys are rejected so that typos do not silently fall back to defaults.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::string& path);

}  // namespace eifeval::io

#endif  // EIFEVAL_IO_HPP
