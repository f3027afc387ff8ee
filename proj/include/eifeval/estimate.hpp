#ifndef EIFEVAL_ESTIMATE_HPP
#define EIFEVAL_ESTIMATE_HPP

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "eifeval/core.hpp"
#include "eifeval/nuisance.hpp"
#include "eifeval/random.hpp"
#include "eifeval/simulate.hpp"

namespace eifeval::estimate {

// one_step_oracle plugs in the closed-form single-W tau and m.
enum class Method { naive, one_step_crossfit, one_step_fixed, one_step_oracle };

std::string_view to_string(Method method);

// All values are on the metric's own scale (fractions for accuracy).
struct EstimateReport {
  Method method = Method::naive;
  double theta_hat = 0.0;
  double theta_hat_clamped = 0.0;  // theta_hat clipped to the metric's range
  double var_influence = 0.0;      // N-1 sample variance of the per-instance scores
  double std_error = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  double level = 0.95;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
};

struct InfluenceBreakdown {
  std::vector<double> phi;
  std::vector<double> tau_first;
  std::vector<double> m_hat;
  std::vector<double> psi;
};

struct OneStepResult {
  EstimateReport report;
  InfluenceBreakdown breakdown;
};

double mean(std::span<const double> values);
// Denominator N-1; 0 for a single value.
double sample_variance(std::span<const double> values);
double sample_covariance(std::span<const double> a, std::span<const double> b);

// Standard-normal quantile.
double normal_quantile(double p);

std::pair<double, double> confidence_interval(double theta, double var_influence, std::size_t n, double level);

EstimateReport naive_estimate(std::span<const double> phis, double level, MetricKind metric = MetricKind::accuracy);

// Running mean, so a constant input returns that constant bit-for-bit.
double integrated_regression_mc(std::span<const double> tau_values);

double influence_score(double m_hat, double phi, double tau_first);

// Builds a report from per-instance nuisance values (the last step shared by all one-step variants).
OneStepResult one_step_from_nuisances(std::vector<double> phis, std::vector<double> tau_firsts, std::vector<double> m_hats,
                                      double level, Method method, MetricKind metric, std::size_t m, std::size_t k);

// K-fold cross-fitted one-step estimator. `stream` drives the fold partition.
OneStepResult one_step_crossfit(std::span<const SimRecord> dataset, MetricKind metric, std::size_t k, double level,
                                const Stream& stream,
                                nuisance::RegressorKind kind = nuisance::RegressorKind::ols_quadratic);

// One-step estimator with the closed-form simulation nuisances (squared error only).
OneStepResult one_step_oracle(std::span<const SimRecord> dataset, const simulate::OracleParams& params, double level);

// Fixed external regressor, no cross-fitting.
OneStepResult one_step_fixed(std::span<const BenchRecord> dataset, double level,
                             nuisance::ClampCounter* counter = nullptr);

// 1 - Var(psi) / Var(phi).
double empirical_vr(std::span<const double> naive_scores, std::span<const double> influence_scores);

struct OrthogonalityStat {
  double covariance;
  double standard_error;  // jackknife; +inf when n == 2
};

// Sample covariance of (m_hat - theta) and (phi - tau_first).
OrthogonalityStat orthogonality_stat(std::span<const double> m_hats, double theta, std::span<const double> phis,
                                     std::span<const double> tau_firsts);

// |naive - gt| - |onestep - gt|; positive when the one-step value is closer.
double improvement_metric(double naive_pct, double onestep_pct, double gt_pct);

}  // namespace eifeval::estimate

#endif  // EIFEVAL_ESTIMATE_HPP
