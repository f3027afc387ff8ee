// Shared test helpers: error-code assertions, fixture paths, small statistics.
#ifndef EIFEVAL_TESTS_SUPPORT_HPP
#define EIFEVAL_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "eifeval/error.hpp"

#define EXPECT_THROW_CODE(stmt, expected_code)                                       \
  do {                                                                               \
    bool caught_ = false;                                                            \
    try {                                                                            \
      stmt;                                                                          \
    } catch (const ::eifeval::Error& e_) {                                           \
      caught_ = true;                                                                \
      EXPECT_EQ(static_cast<int>(e_.code()), static_cast<int>(expected_code))        \
          << "message: " << e_.what();                                               \
    }                                                                                \
    EXPECT_TRUE(caught_) << #stmt " did not throw eifeval::Error";                   \
  } while (0)

namespace eifeval::test {

inline std::string data_path(const std::string& name) { return std::string(EIFEVAL_TEST_DATA) + "/" + name; }

// Average ranks (1-based), ties share the mean rank.
inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0 || sbb == 0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

struct SpearmanResult {
  double rho;
  double p_decreasing;  // exact one-sided permutation p-value for rho <= observed
};

// Spearman correlation of y against x with an exact permutation test (fine up to ~10 points).
inline SpearmanResult spearman_decreasing(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double observed = pearson(rx, ry);
  std::vector<double> perm = ry;
  std::sort(perm.begin(), perm.end());
  std::size_t total = 0;
  std::size_t as_extreme = 0;
  do {
    ++total;
    if (pearson(rx, perm) <= observed + 1e-12) ++as_extreme;
  } while (std::next_permutation(perm.begin(), perm.end()));
  // next_permutation skips duplicate arrangements of tied values, which are
  // equally likely under the null, so the ratio is still exact.
  return {observed, static_cast<double>(as_extreme) / static_cast<double>(total)};
}

}  // namespace eifeval::test

#endif  // EIFEVAL_TESTS_SUPPORT_HPP
