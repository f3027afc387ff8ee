#ifndef EIFEVAL_RANKING_HPP
#define EIFEVAL_RANKING_HPP

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "eifeval/estimate.hpp"
#include "eifeval/simulate.hpp"

namespace eifeval::ranking {

// A ranking lists 1-based model ids, best (lowest loss) first.
using Permutation = std::vector<int>;

Permutation rank_models(std::span<const double> estimates);
Permutation identity_permutation(std::size_t models);

double exact_match(std::span<const Permutation> rankings, const Permutation& truth);

// Kendall's tau-a over all unordered model pairs.
double kendall_tau(const Permutation& pi_hat, const Permutation& pi_star);

struct RankingSummary {
  estimate::Method method = estimate::Method::naive;
  std::size_t trials = 0;
  std::vector<Permutation> rankings;  // one per trial, trial order
  double exact_match = 0.0;
  double kendall_mean = 0.0;
  double sweep_coordinate = 0.0;

  bool operator==(const RankingSummary&) const = default;
};

struct RankingOutcome {
  RankingSummary naive;
  RankingSummary one_step;
  std::optional<RankingSummary> oracle;  // closed-form oracle nuisances, when requested
};

struct ExperimentOptions {
  std::size_t folds = nuisance::kDefaultFolds;
  double level = 0.95;
  bool with_oracle = false;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

// Trial r uses Stream(seed).child(r); datasets for all models are drawn fresh in every trial.
RankingOutcome run_ranking_experiment(const simulate::SimConfig& config, const Permutation& truth,
                                      const ExperimentOptions& options = {});

enum class SweepAxis { base_sigma, sigma_eta };

std::string_view to_string(SweepAxis axis);
SweepAxis axis_from_string(std::string_view name);

// Default grids: base sigma^2 in {0.5, ..., 3.0}, sigma_eta in {0.2, ..., 2.0}.
std::vector<double> default_grid(SweepAxis axis);

inline constexpr double kDefaultVarianceGap = 0.05;

struct SweepPoint {
  double axis_value = 0.0;
  RankingOutcome outcome;
};

// base_sigma sets sigma_l^2 = c + l * gap for l = 0..L-1; sigma_eta overrides the auxiliary noise.
// The truth is always the identity ordering.
std::vector<SweepPoint> sweep(const simulate::SimConfig& config, SweepAxis axis, std::span<const double> grid,
                              const ExperimentOptions& options = {}, double gap = kDefaultVarianceGap);

}  // namespace eifeval::ranking

#endif  // EIFEVAL_RANKING_HPP
