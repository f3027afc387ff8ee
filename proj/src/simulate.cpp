#include "eifeval/simulate.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "eifeval/error.hpp"

namespace eifeval::simulate {

void SimConfig::validate() const {
  if (n < 2) fail(ErrorCode::invalid_input, "config: n must be >= 2");
  if (m < 1) fail(ErrorCode::invalid_input, "config: m must be >= 1");
  if (trials < 1) fail(ErrorCode::invalid_input, "config: trials must be >= 1");
  if (sigma_sq_per_model.empty()) fail(ErrorCode::invalid_input, "config: sigma_sq_per_model is empty");
  for (double s : sigma_sq_per_model) {
    if (!(s > 0.0) || !std::isfinite(s)) fail(ErrorCode::invalid_input, "config: every sigma_sq must be > 0");
  }
  if (!std::isfinite(rho1) || !std::isfinite(rho2)) fail(ErrorCode::invalid_input, "config: rho must be finite");
  if (!(sigma_eta >= 0.0) || !std::isfinite(sigma_eta)) fail(ErrorCode::invalid_input, "config: sigma_eta must be >= 0");
}

OracleParams OracleParams::from(const SimConfig& config, std::size_t model_index) {
  return OracleParams{config.sigma_sq_per_model.at(model_index), config.rho1, config.sigma_eta};
}

int preference_label(double w1, double w2, double y) {
  // Distances that tie in exact arithmetic can differ by an ulp after rounding
  // (0.8 and 0.4 around 0.6), so ties are detected up to a few ulps.
  const double d1 = std::abs(w1 - y);
  const double d2 = std::abs(w2 - y);
  const double slack = 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(w1) + std::abs(w2) + 2.0 * std::abs(y));
  return d1 <= d2 + slack ? 1 : 0;
}

std::vector<SimRecord> gen_sim_dataset(const SimConfig& config, std::size_t model_index, const Stream& stream) {
  config.validate();
  if (model_index >= config.models()) {
    fail(ErrorCode::invalid_input, "gen_sim_dataset: model_index " + std::to_string(model_index) + " out of range");
  }
  const double sigma = std::sqrt(config.sigma_sq_per_model[model_index]);
  const Stream model_stream = stream.child(model_index);

  std::vector<SimRecord> out(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    auto engine = model_stream.child(i).engine();
    std::normal_distribution<double> normal(0.0, 1.0);
    SimRecord& rec = out[i];
    rec.x = normal(engine);
    rec.g = rec.x;
    const double eps = sigma * normal(engine);
    rec.y = rec.x + eps;
    rec.aux.resize(config.m + 1);
    // Slot 1 shares eps with y. The Monte Carlo slots are fresh draws from
    // p(z | x): each resamples its own latent (and the y it is judged against).
    for (std::size_t j = 0; j < rec.aux.size(); ++j) {
      const double latent = j == 0 ? eps : sigma * normal(engine);
      const double anchor = rec.x + latent;
      const double eta1 = config.sigma_eta * normal(engine);
      const double eta2 = config.sigma_eta * normal(engine);
      auto& t = rec.aux[j];
      t.w1 = rec.x + config.rho1 * latent + eta1;
      t.w2 = rec.x + config.rho2 * latent + eta2;
      t.v = static_cast<std::uint8_t>(preference_label(t.w1, t.w2, anchor));
    }
  }
  return out;
}

namespace {
double signal_variance(const OracleParams& p) {
  const double d = p.rho * p.rho * p.sigma_sq + p.sigma_eta * p.sigma_eta;
  if (!(d > 0.0)) fail(ErrorCode::degenerate_signal, "auxiliary signal has zero variance (rho = 0 and sigma_eta = 0)");
  return d;
}
}  // namespace

double kappa(const OracleParams& p) { return p.rho * p.sigma_sq / signal_variance(p); }

double oracle_tau(double x, double w1, const OracleParams& p) {
  const double k = kappa(p);
  const double s = w1 - x;
  return (1.0 - k * p.rho) * p.sigma_sq + k * k * s * s;
}

double oracle_m(const OracleParams& p) { return p.sigma_sq; }

double oracle_influence(double x, double y, double g, double w1, const OracleParams& p) {
  return squared_error_metric(y, g) - oracle_tau(x, w1, p);
}

double r_squared(const OracleParams& p) { return p.rho * p.rho * p.sigma_sq / signal_variance(p); }

TheoreticalVariances theoretical_variances(const OracleParams& p) {
  const double var_naive = 2.0 * p.sigma_sq * p.sigma_sq;
  // rho = 0 leaves nothing to explain even when sigma_eta = 0.
  const double r2 = p.rho == 0.0 ? 0.0 : r_squared(p);
  const double vr = r2 * r2;
  return {var_naive, var_naive * (1.0 - vr), vr};
}

}  // namespace eifeval::simulate
