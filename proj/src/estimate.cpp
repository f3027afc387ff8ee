#include "eifeval/estimate.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "eifeval/error.hpp"

namespace eifeval::estimate {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::naive:
      return "naive";
    case Method::one_step_crossfit:
      return "one_step_crossfit";
    case Method::one_step_fixed:
      return "one_step_fixed";
    case Method::one_step_oracle:
      return "one_step_oracle";
  }
  return "unknown";
}

double mean(std::span<const double> values) {
  if (values.empty()) fail(ErrorCode::empty_dataset, "mean of empty input");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mu = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  return ss / static_cast<double>(values.size() - 1);
}

double sample_covariance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(ErrorCode::invalid_input, "sample_covariance: length mismatch");
  if (a.size() < 2) return 0.0;
  const double ma = mean(a);
  const double mb = mean(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / static_cast<double>(a.size() - 1);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::invalid_input, "normal_quantile: p must lie in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(0.0, 1.0), p);
}

std::pair<double, double> confidence_interval(double theta, double var_influence, std::size_t n, double level) {
  if (n < 1) fail(ErrorCode::invalid_input, "confidence_interval: n must be >= 1");
  if (!(level > 0.0 && level < 1.0)) fail(ErrorCode::invalid_input, "confidence_interval: level must lie in (0,1)");
  if (!(var_influence > 0.0)) return {theta, theta};
  const double half = normal_quantile(0.5 * (1.0 + level)) * std::sqrt(var_influence / static_cast<double>(n));
  return {theta - half, theta + half};
}

namespace {

double clamp_to_range(double theta, MetricKind metric) {
  return metric == MetricKind::accuracy ? std::clamp(theta, 0.0, 1.0) : std::max(theta, 0.0);
}

EstimateReport summarize(Method method, std::span<const double> scores, double level, MetricKind metric, std::size_t m,
                         std::size_t k) {
  if (scores.empty()) fail(ErrorCode::empty_dataset, std::string(to_string(method)) + ": empty dataset");
  EstimateReport r;
  r.method = method;
  r.level = level;
  r.n = scores.size();
  r.m = m;
  r.k = k;
  r.theta_hat = mean(scores);
  r.theta_hat_clamped = clamp_to_range(r.theta_hat, metric);
  r.var_influence = sample_variance(scores);
  r.std_error = std::sqrt(r.var_influence / static_cast<double>(r.n));
  std::tie(r.ci_lower, r.ci_upper) = confidence_interval(r.theta_hat, r.var_influence, r.n, level);
  return r;
}

}  // namespace

EstimateReport naive_estimate(std::span<const double> phis, double level, MetricKind metric) {
  return summarize(Method::naive, phis, level, metric, 0, 0);
}

double integrated_regression_mc(std::span<const double> tau_values) {
  if (tau_values.empty()) fail(ErrorCode::invalid_m, "integrated_regression_mc: need at least one Monte Carlo sample");
  double m = tau_values[0];
  for (std::size_t j = 1; j < tau_values.size(); ++j) m += (tau_values[j] - m) / static_cast<double>(j + 1);
  return m;
}

double influence_score(double m_hat, double phi, double tau_first) { return phi + (m_hat - tau_first); }

OneStepResult one_step_from_nuisances(std::vector<double> phis, std::vector<double> tau_firsts, std::vector<double> m_hats,
                                      double level, Method method, MetricKind metric, std::size_t m, std::size_t k) {
  if (phis.size() != tau_firsts.size() || phis.size() != m_hats.size()) {
    fail(ErrorCode::invalid_input, "one-step: nuisance vectors differ in length");
  }
  OneStepResult out;
  out.breakdown.psi.resize(phis.size());
  for (std::size_t i = 0; i < phis.size(); ++i) out.breakdown.psi[i] = influence_score(m_hats[i], phis[i], tau_firsts[i]);
  out.breakdown.phi = std::move(phis);
  out.breakdown.tau_first = std::move(tau_firsts);
  out.breakdown.m_hat = std::move(m_hats);
  out.report = summarize(method, out.breakdown.psi, level, metric, m, k);
  return out;
}

OneStepResult one_step_crossfit(std::span<const SimRecord> dataset, MetricKind metric, std::size_t k, double level,
                                const Stream& stream, nuisance::RegressorKind kind) {
  if (dataset.empty()) fail(ErrorCode::empty_dataset, "one_step_crossfit: empty dataset");
  const std::size_t m = dataset.front().mc_samples();
  for (const auto& rec : dataset) {
    if (rec.aux.size() < 2) fail(ErrorCode::invalid_m, "one_step_crossfit: every record needs at least 2 aux triples");
    if (rec.mc_samples() != m) fail(ErrorCode::invalid_m, "one_step_crossfit: records disagree on M");
  }
  const std::size_t n = dataset.size();
  std::vector<double> phis(n);
  for (std::size_t i = 0; i < n; ++i) phis[i] = metric_value(metric, dataset[i]);

  const nuisance::CrossFit fit = nuisance::cross_fit_tau(dataset, phis, k, stream, kind);

  std::vector<double> tau_firsts(n);
  std::vector<double> m_hats(n);
  std::vector<double> mc(m);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = dataset[i];
    const nuisance::Regressor& reg = fit.regressor_for(i);
    tau_firsts[i] = reg.predict(rec.x, rec.aux[0]);
    for (std::size_t j = 0; j < m; ++j) mc[j] = reg.predict(rec.x, rec.aux[j + 1]);
    m_hats[i] = integrated_regression_mc(mc);
  }
  return one_step_from_nuisances(std::move(phis), std::move(tau_firsts), std::move(m_hats), level,
                                 Method::one_step_crossfit, metric, m, k);
}

OneStepResult one_step_oracle(std::span<const SimRecord> dataset, const simulate::OracleParams& params, double level) {
  if (dataset.empty()) fail(ErrorCode::empty_dataset, "one_step_oracle: empty dataset");
  const std::size_t n = dataset.size();
  std::vector<double> phis(n);
  std::vector<double> tau_firsts(n);
  std::vector<double> m_hats(n, simulate::oracle_m(params));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = dataset[i];
    if (rec.aux.empty()) fail(ErrorCode::invalid_input, "one_step_oracle: record without auxiliary samples");
    phis[i] = squared_error_metric(rec.y, rec.g);
    tau_firsts[i] = simulate::oracle_tau(rec.x, rec.aux[0].w1, params);
  }
  return one_step_from_nuisances(std::move(phis), std::move(tau_firsts), std::move(m_hats), level,
                                 Method::one_step_oracle, MetricKind::squared_error, dataset.front().mc_samples(), 0);
}

OneStepResult one_step_fixed(std::span<const BenchRecord> dataset, double level, nuisance::ClampCounter* counter) {
  if (dataset.empty()) fail(ErrorCode::empty_dataset, "one_step_fixed: empty dataset");
  const std::size_t n = dataset.size();
  const std::size_t m = dataset.front().mc_samples();
  std::vector<double> phis(n);
  std::vector<double> tau_firsts(n);
  std::vector<double> m_hats(n);
  std::vector<double> mc;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = dataset[i];
    if (rec.tau_pred.size() < 2) {
      fail(ErrorCode::missing_tau, "record '" + rec.id + "': tau_pred must cover at least 2 slots");
    }
    phis[i] = static_cast<double>(rec.phi);
    tau_firsts[i] = nuisance::external_tau(rec, 1, counter);
    mc.resize(rec.tau_pred.size() - 1);
    for (std::size_t slot = 2; slot <= rec.tau_pred.size(); ++slot) mc[slot - 2] = nuisance::external_tau(rec, slot, counter);
    m_hats[i] = integrated_regression_mc(mc);
  }
  return one_step_from_nuisances(std::move(phis), std::move(tau_firsts), std::move(m_hats), level, Method::one_step_fixed,
                                 MetricKind::accuracy, m, 0);
}

double empirical_vr(std::span<const double> naive_scores, std::span<const double> influence_scores) {
  if (naive_scores.empty() || influence_scores.empty()) fail(ErrorCode::empty_dataset, "empirical_vr: empty input");
  const double var_naive = sample_variance(naive_scores);
  if (!(var_naive > 0.0)) fail(ErrorCode::undefined_vr, "empirical_vr: naive scores have zero variance");
  return 1.0 - sample_variance(influence_scores) / var_naive;
}

OrthogonalityStat orthogonality_stat(std::span<const double> m_hats, double theta, std::span<const double> phis,
                                     std::span<const double> tau_firsts) {
  const std::size_t n = m_hats.size();
  if (phis.size() != n || tau_firsts.size() != n) fail(ErrorCode::invalid_input, "orthogonality_stat: length mismatch");
  if (n < 2) fail(ErrorCode::invalid_input, "orthogonality_stat: need at least 2 instances");

  std::vector<double> a(n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = m_hats[i] - theta;
    b[i] = phis[i] - tau_firsts[i];
  }
  // Center first; the leave-one-out sums below are then well conditioned.
  // The running mean keeps a constant column exactly zero after centering.
  const double ma = integrated_regression_mc(a);
  const double mb = integrated_regression_mc(b);
  double sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    a[i] -= ma;
    b[i] -= mb;
    sab += a[i] * b[i];
  }
  const double nd = static_cast<double>(n);
  const double cov = sab / (nd - 1.0);
  if (n == 2) return {cov, std::numeric_limits<double>::infinity()};

  // Leave-one-out sample covariance: with sa = sb = 0 after centering,
  // sum over j != i of a_j b_j minus (-a_i)(-b_i)/(n-1), over n-2.
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) {
    loo[i] = (sab - a[i] * b[i] - a[i] * b[i] / (nd - 1.0)) / (nd - 2.0);
  }
  const double loo_mean = mean(loo);
  double ss = 0.0;
  for (double c : loo) ss += (c - loo_mean) * (c - loo_mean);
  return {cov, std::sqrt((nd - 1.0) / nd * ss)};
}

double improvement_metric(double naive_pct, double onestep_pct, double gt_pct) {
  return std::abs(naive_pct - gt_pct) - std::abs(onestep_pct - gt_pct);
}

}  // namespace eifeval::estimate
