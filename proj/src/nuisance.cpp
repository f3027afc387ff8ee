#include "eifeval/nuisance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "eifeval/error.hpp"

namespace eifeval::nuisance {

Features build_features(double x, const ScalarTriple& t) {
  const double d1 = t.w1 - x;
  const double d2 = t.w2 - x;
  return {1.0, d1 * d1, d2 * d2, static_cast<double>(t.v)};
}

std::vector<double> fit_ols(const DesignMatrix& features, std::span<const double> targets) {
  const std::size_t n = features.rows;
  const std::size_t p = features.cols;
  if (p == 0) fail(ErrorCode::invalid_input, "fit_ols: no feature columns");
  if (targets.size() != n) fail(ErrorCode::invalid_input, "fit_ols: targets length does not match rows");
  if (n < p) fail(ErrorCode::invalid_input, "fit_ols: fewer rows than columns");

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(
      features.values.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  Eigen::Map<const Eigen::VectorXd> y(targets.data(), static_cast<Eigen::Index>(n));

  Eigen::MatrixXd gram = x.transpose() * x;
  const Eigen::VectorXd rhs = x.transpose() * y;
  const double scale = gram.diagonal().mean();
  if (!(scale > 0.0) || !std::isfinite(scale)) fail(ErrorCode::singular_design, "fit_ols: design matrix is zero or non-finite");

  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < kConditionFloor) {
    gram.diagonal().array() += kRidgeGuard * scale;
    ldlt.compute(gram);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < 1e-15) {
      fail(ErrorCode::singular_design, "fit_ols: design is rank deficient beyond the ridge guard");
    }
  }
  const Eigen::VectorXd beta = ldlt.solve(rhs);
  if (!beta.allFinite()) fail(ErrorCode::singular_design, "fit_ols: solution is not finite");
  return {beta.data(), beta.data() + beta.size()};
}

std::vector<std::size_t> FoldAssignment::fold_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t f : fold_of) ++sizes[f];
  return sizes;
}

std::vector<std::size_t> FoldAssignment::members(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (fold_of[i] == fold) out.push_back(i);
  }
  return out;
}

FoldAssignment make_folds(std::size_t n, std::size_t k, const Stream& stream) {
  if (k < 2 || k > n) {
    fail(ErrorCode::invalid_folds, "make_folds: need 2 <= k <= n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto engine = stream.engine();
  std::shuffle(order.begin(), order.end(), engine);

  FoldAssignment out{n, k, std::vector<std::size_t>(n)};
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    for (std::size_t j = 0; j < size; ++j) out.fold_of[order[pos++]] = f;
  }
  return out;
}

Regressor Regressor::ols(const std::vector<double>& coefficients) {
  if (coefficients.size() != kFeatureCount) fail(ErrorCode::invalid_input, "Regressor::ols: wrong coefficient count");
  Regressor r;
  r.kind_ = RegressorKind::ols_quadratic;
  std::copy(coefficients.begin(), coefficients.end(), r.coefficients_.begin());
  return r;
}

Regressor Regressor::constant(double value) {
  Regressor r;
  r.kind_ = RegressorKind::constant;
  r.coefficients_ = {value, 0.0, 0.0, 0.0};
  return r;
}

double Regressor::predict(const Features& f) const {
  if (kind_ == RegressorKind::constant) return coefficients_[0];
  double acc = 0.0;
  for (std::size_t j = 0; j < kFeatureCount; ++j) acc += coefficients_[j] * f[j];
  return acc;
}

CrossFit cross_fit_tau(std::span<const SimRecord> dataset, std::span<const double> phis, std::size_t k,
                       const Stream& stream, RegressorKind kind) {
  if (dataset.empty()) fail(ErrorCode::empty_dataset, "cross_fit_tau: empty dataset");
  if (phis.size() != dataset.size()) fail(ErrorCode::invalid_input, "cross_fit_tau: phis length mismatch");
  for (const auto& rec : dataset) {
    if (rec.aux.empty()) fail(ErrorCode::invalid_input, "cross_fit_tau: record without auxiliary samples");
  }

  CrossFit out;
  out.folds = make_folds(dataset.size(), k, stream);
  const std::size_t n = dataset.size();

  std::vector<Features> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = build_features(dataset[i].x, dataset[i].aux.front());

  for (std::size_t f = 0; f < k; ++f) {
    DesignMatrix design{0, kFeatureCount, {}};
    std::vector<double> targets;
    design.values.reserve(n * kFeatureCount);
    targets.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!out.trained_on(f, i)) continue;
      design.values.insert(design.values.end(), rows[i].begin(), rows[i].end());
      targets.push_back(phis[i]);
      ++design.rows;
    }
    out.training_size.push_back(design.rows);
    if (kind == RegressorKind::constant) {
      const double mean = std::accumulate(targets.begin(), targets.end(), 0.0) / static_cast<double>(targets.size());
      out.per_fold.push_back(Regressor::constant(mean));
    } else {
      out.per_fold.push_back(Regressor::ols(fit_ols(design, targets)));
    }
  }
  return out;
}

double external_tau(const BenchRecord& record, std::size_t slot, ClampCounter* counter) {
  if (slot < 1 || slot > record.tau_pred.size()) {
    fail(ErrorCode::missing_tau, "record '" + record.id + "': no tau prediction for slot " + std::to_string(slot));
  }
  const double raw = record.tau_pred[slot - 1];
  if (!std::isfinite(raw)) fail(ErrorCode::missing_tau, "record '" + record.id + "': non-finite tau prediction");
  const double clamped = std::clamp(raw, 0.0, 1.0);
  if (clamped != raw && counter != nullptr) counter->clamped.fetch_add(1, std::memory_order_relaxed);
  return clamped;
}

}  // namespace eifeval::nuisance
