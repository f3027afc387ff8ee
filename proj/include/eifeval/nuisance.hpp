#ifndef EIFEVAL_NUISANCE_HPP
#define EIFEVAL_NUISANCE_HPP

#include <array>
#include <atomic>
#include <cstddef>
#include <span>
#include <vector>

#include "eifeval/core.hpp"
#include "eifeval/random.hpp"

namespace eifeval::nuisance {

inline constexpr std::size_t kFeatureCount = 4;
inline constexpr double kRidgeGuard = 1e-8;
inline constexpr double kConditionFloor = 1e-12;
inline constexpr std::size_t kDefaultFolds = 5;

using Features = std::array<double, kFeatureCount>;

// [1, (w1 - x)^2, (w2 - x)^2, v]
Features build_features(double x, const ScalarTriple& t);

// Row-major design matrix: `rows` rows of `cols` entries.
struct DesignMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

// Least squares through the normal equations. When X'X is ill-conditioned
// (rcond < kConditionFloor) a ridge of kRidgeGuard * mean(diag(X'X)) is added;
// singular_design is thrown only if that still fails.
std::vector<double> fit_ols(const DesignMatrix& features, std::span<const double> targets);

// fold_of[i] is the 0-based fold of instance i.
struct FoldAssignment {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::size_t> fold_of;

  std::vector<std::size_t> fold_sizes() const;
  std::vector<std::size_t> members(std::size_t fold) const;

  bool operator==(const FoldAssignment&) const = default;
};

// Uniform balanced partition; the first n % k folds get one extra instance.
FoldAssignment make_folds(std::size_t n, std::size_t k, const Stream& stream);

enum class RegressorKind { ols_quadratic, constant };

class Regressor {
 public:
  static Regressor ols(const std::vector<double>& coefficients);
  static Regressor constant(double value);

  RegressorKind kind() const { return kind_; }
  std::span<const double> coefficients() const { return coefficients_; }

  double predict(const Features& f) const;
  double predict(double x, const ScalarTriple& t) const { return predict(build_features(x, t)); }

 private:
  RegressorKind kind_ = RegressorKind::constant;
  Features coefficients_{};
};

// Out-of-fold regressors: per_fold[f] was trained on every instance outside fold f.
struct CrossFit {
  FoldAssignment folds;
  std::vector<Regressor> per_fold;
  std::vector<std::size_t> training_size;

  const Regressor& regressor_for(std::size_t instance) const { return per_fold[folds.fold_of[instance]]; }
  bool trained_on(std::size_t fold, std::size_t instance) const { return folds.fold_of[instance] != fold; }
};

// Trains on aux slot 1 (index 0) of each out-of-fold record against its metric value.
CrossFit cross_fit_tau(std::span<const SimRecord> dataset, std::span<const double> phis, std::size_t k,
                       const Stream& stream, RegressorKind kind = RegressorKind::ols_quadratic);

// Counts predictions that had to be clamped into [0,1].
struct ClampCounter {
  std::atomic<std::size_t> clamped{0};
};

// tau_pred for 1-based `slot`, clamped into [0,1].
double external_tau(const BenchRecord& record, std::size_t slot, ClampCounter* counter = nullptr);

}  // namespace eifeval::nuisance

#endif  // EIFEVAL_NUISANCE_HPP
