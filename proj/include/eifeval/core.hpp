#ifndef EIFEVAL_CORE_HPP
#define EIFEVAL_CORE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace eifeval {

// One auxiliary observation z = (w1, w2, v). v == 1 means w1 was preferred.
// W is double for simulated data and std::string for benchmark data.
template <class W>
struct AuxTriple {
  W w1{};
  W w2{};
  std::uint8_t v = 0;

  bool operator==(const AuxTriple&) const = default;
};

using ScalarTriple = AuxTriple<double>;
using TextTriple = AuxTriple<std::string>;

// aux[0] is the correction sample; aux[1..M] feed the Monte Carlo integral.
struct SimRecord {
  double x = 0.0;
  double y = 0.0;
  double g = 0.0;
  std::vector<ScalarTriple> aux;

  std::size_t mc_samples() const { return aux.empty() ? 0 : aux.size() - 1; }
  bool operator==(const SimRecord&) const = default;
};

struct BenchRecord {
  std::string id;
  std::string question;
  std::string answer;
  std::string ground_truth;
  int phi = 0;
  std::vector<TextTriple> aux;
  std::vector<double> tau_pred;  // aligned with aux

  std::size_t mc_samples() const { return aux.empty() ? 0 : aux.size() - 1; }
  bool operator==(const BenchRecord&) const = default;
};

// Throws ErrorCode::contract naming the first violated field.
void validate(const BenchRecord& record);

enum class MetricKind { accuracy, squared_error };

std::string_view to_string(MetricKind kind);
MetricKind metric_from_string(std::string_view name);

// Strips leading and trailing ASCII whitespace.
std::string_view canonicalize_answer(std::string_view answer);

int accuracy_metric(std::string_view y, std::string_view g);
double squared_error_metric(double y, double g);

// phi for a simulated record under the given metric. Accuracy on scalars is exact equality.
double metric_value(MetricKind kind, const SimRecord& record);

}  // namespace eifeval

#endif  // EIFEVAL_CORE_HPP
