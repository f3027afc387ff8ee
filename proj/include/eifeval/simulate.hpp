#ifndef EIFEVAL_SIMULATE_HPP
#define EIFEVAL_SIMULATE_HPP

#include <cstdint>
#include <vector>

#include "eifeval/core.hpp"
#include "eifeval/random.hpp"

namespace eifeval::simulate {

// Gaussian design: x ~ N(0,1), g = x, y = x + eps with eps ~ N(0, sigma_l^2),
// and each response w_s = x + rho_s * eps + eta_s, v = 1{|w1 - y| <= |w2 - y|}.
// The correction triple (aux[0]) shares eps with y; the M Monte Carlo triples
// are independent draws from p(z | x) with their own latent eps.
struct SimConfig {
  std::size_t n = 1000;
  std::size_t m = 500;
  std::vector<double> sigma_sq_per_model{1.0, 1.05, 1.1};
  double rho1 = 0.8;
  double rho2 = 0.6;
  double sigma_eta = 0.6;
  std::uint64_t seed = 0;
  std::size_t trials = 100;

  void validate() const;
  std::size_t models() const { return sigma_sq_per_model.size(); }
};

// Parameters of the closed-form nuisances for one model (single-response form).
struct OracleParams {
  double sigma_sq = 1.0;
  double rho = 0.8;
  double sigma_eta = 0.6;

  static OracleParams from(const SimConfig& config, std::size_t model_index);
};

// `stream` is the trial-level stream; each instance draws from
// stream.child(model_index).child(i), so generation order is irrelevant.
std::vector<SimRecord> gen_sim_dataset(const SimConfig& config, std::size_t model_index, const Stream& stream);

// 1 iff |w1 - y| <= |w2 - y|; exact ties prefer w1.
int preference_label(double w1, double w2, double y);

double kappa(const OracleParams& p);
double oracle_tau(double x, double w1, const OracleParams& p);
double oracle_m(const OracleParams& p);
double oracle_influence(double x, double y, double g, double w1, const OracleParams& p);
double r_squared(const OracleParams& p);

struct TheoreticalVariances {
  double var_naive;
  double var_onestep;
  double vr;
};
TheoreticalVariances theoretical_variances(const OracleParams& p);

}  // namespace eifeval::simulate

#endif  // EIFEVAL_SIMULATE_HPP
