#include "eifeval/ranking.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "eifeval/error.hpp"

namespace eifeval::ranking {

Permutation rank_models(std::span<const double> estimates) {
  if (estimates.size() < 2) fail(ErrorCode::invalid_input, "rank_models: need at least 2 models");
  for (double e : estimates) {
    if (!std::isfinite(e)) fail(ErrorCode::invalid_estimate, "rank_models: non-finite estimate");
  }
  Permutation order(estimates.size());
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return estimates[a - 1] < estimates[b - 1]; });
  return order;
}

Permutation identity_permutation(std::size_t models) {
  Permutation p(models);
  std::iota(p.begin(), p.end(), 1);
  return p;
}

namespace {

// positions[model - 1] = rank position; throws unless p is a permutation of 1..L.
std::vector<std::size_t> positions_of(const Permutation& p) {
  const std::size_t len = p.size();
  std::vector<std::size_t> pos(len, len);
  for (std::size_t i = 0; i < len; ++i) {
    const int id = p[i];
    if (id < 1 || static_cast<std::size_t>(id) > len || pos[id - 1] != len) {
      fail(ErrorCode::invalid_input, "not a permutation of 1..L");
    }
    pos[id - 1] = i;
  }
  return pos;
}

}  // namespace

double exact_match(std::span<const Permutation> rankings, const Permutation& truth) {
  if (rankings.empty()) fail(ErrorCode::invalid_input, "exact_match: no rankings");
  std::size_t hits = 0;
  for (const auto& r : rankings) {
    if (r.size() != truth.size()) fail(ErrorCode::invalid_input, "exact_match: ranking length mismatch");
    if (r == truth) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(rankings.size());
}

double kendall_tau(const Permutation& pi_hat, const Permutation& pi_star) {
  if (pi_hat.size() != pi_star.size()) fail(ErrorCode::invalid_input, "kendall_tau: length mismatch");
  if (pi_hat.size() < 2) fail(ErrorCode::invalid_input, "kendall_tau: need at least 2 items");
  const auto a = positions_of(pi_hat);
  const auto b = positions_of(pi_star);
  const std::size_t len = a.size();
  long balance = 0;
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t j = i + 1; j < len; ++j) {
      const bool same = (a[i] < a[j]) == (b[i] < b[j]);
      balance += same ? 1 : -1;
    }
  }
  return static_cast<double>(balance) / (static_cast<double>(len * (len - 1)) / 2.0);
}

namespace {

struct TrialRankings {
  Permutation naive;
  Permutation one_step;
  Permutation oracle;
};

TrialRankings run_trial(const simulate::SimConfig& config, const ExperimentOptions& options, std::size_t trial) {
  const Stream trial_stream = Stream(config.seed).child(trial);
  const Stream data_stream = trial_stream.child(stream_tag::data);
  const Stream fold_stream = trial_stream.child(stream_tag::folds);

  const std::size_t models = config.models();
  std::vector<double> naive(models);
  std::vector<double> one_step(models);
  std::vector<double> oracle(models);
  for (std::size_t l = 0; l < models; ++l) {
    const auto data = simulate::gen_sim_dataset(config, l, data_stream);
    const auto fitted = estimate::one_step_crossfit(data, MetricKind::squared_error, options.folds, options.level,
                                                    fold_stream.child(l));
    naive[l] = estimate::mean(fitted.breakdown.phi);
    one_step[l] = fitted.report.theta_hat;
    if (options.with_oracle) {
      oracle[l] = estimate::one_step_oracle(data, simulate::OracleParams::from(config, l), options.level).report.theta_hat;
    }
  }
  TrialRankings out{rank_models(naive), rank_models(one_step), {}};
  if (options.with_oracle) out.oracle = rank_models(oracle);
  return out;
}

RankingSummary summarize(estimate::Method method, std::vector<Permutation> rankings, const Permutation& truth) {
  RankingSummary s;
  s.method = method;
  s.trials = rankings.size();
  s.exact_match = exact_match(rankings, truth);
  double total = 0.0;
  for (const auto& r : rankings) total += kendall_tau(r, truth);
  s.kendall_mean = total / static_cast<double>(rankings.size());
  s.rankings = std::move(rankings);
  return s;
}

}  // namespace

RankingOutcome run_ranking_experiment(const simulate::SimConfig& config, const Permutation& truth,
                                      const ExperimentOptions& options) {
  config.validate();
  if (config.models() < 2) fail(ErrorCode::invalid_input, "ranking needs at least 2 models");
  if (truth.size() != config.models()) fail(ErrorCode::invalid_input, "truth length does not match model count");
  positions_of(truth);

  std::vector<TrialRankings> results(config.trials);
  std::size_t workers = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.trials);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t t = next.fetch_add(1); t < config.trials; t = next.fetch_add(1)) {
      try {
        results[t] = run_trial(config, options, t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(config.trials);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);

  std::vector<Permutation> naive;
  std::vector<Permutation> one_step;
  std::vector<Permutation> oracle;
  for (auto& r : results) {
    naive.push_back(std::move(r.naive));
    one_step.push_back(std::move(r.one_step));
    if (options.with_oracle) oracle.push_back(std::move(r.oracle));
  }
  RankingOutcome out{summarize(estimate::Method::naive, std::move(naive), truth),
                     summarize(estimate::Method::one_step_crossfit, std::move(one_step), truth),
                     std::nullopt};
  if (options.with_oracle) out.oracle = summarize(estimate::Method::one_step_oracle, std::move(oracle), truth);
  return out;
}

std::string_view to_string(SweepAxis axis) { return axis == SweepAxis::base_sigma ? "base_sigma" : "sigma_eta"; }

SweepAxis axis_from_string(std::string_view name) {
  if (name == "base_sigma") return SweepAxis::base_sigma;
  if (name == "sigma_eta") return SweepAxis::sigma_eta;
  fail(ErrorCode::invalid_input, "unknown sweep axis '" + std::string(name) + "'");
}

std::vector<double> default_grid(SweepAxis axis) {
  std::vector<double> grid;
  if (axis == SweepAxis::base_sigma) {
    for (int i = 1; i <= 6; ++i) grid.push_back(0.5 * i);
  } else {
    for (int i = 1; i <= 10; ++i) grid.push_back(0.2 * i);
  }
  return grid;
}

std::vector<SweepPoint> sweep(const simulate::SimConfig& config, SweepAxis axis, std::span<const double> grid,
                              const ExperimentOptions& options, double gap) {
  if (grid.empty()) fail(ErrorCode::invalid_input, "sweep: empty grid");
  std::vector<SweepPoint> out;
  out.reserve(grid.size());
  for (double value : grid) {
    simulate::SimConfig point = config;
    if (axis == SweepAxis::base_sigma) {
      for (std::size_t l = 0; l < point.sigma_sq_per_model.size(); ++l) {
        point.sigma_sq_per_model[l] = value + gap * static_cast<double>(l);
      }
    } else {
      point.sigma_eta = value;
    }
    SweepPoint sp{value, run_ranking_experiment(point, identity_permutation(point.models()), options)};
    sp.outcome.naive.sweep_coordinate = value;
    sp.outcome.one_step.sweep_coordinate = value;
    if (sp.outcome.oracle) sp.outcome.oracle->sweep_coordinate = value;
    out.push_back(std::move(sp));
  }
  return out;
}

}  // namespace eifeval::ranking
