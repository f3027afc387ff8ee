#include "eifeval/core.hpp"

#include <cmath>

#include "eifeval/error.hpp"

namespace eifeval {

namespace {
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
}  // namespace

std::string_view canonicalize_answer(std::string_view answer) {
  std::size_t begin = 0;
  std::size_t end = answer.size();
  while (begin < end && is_space(answer[begin])) ++begin;
  while (end > begin && is_space(answer[end - 1])) --end;
  return answer.substr(begin, end - begin);
}

int accuracy_metric(std::string_view y, std::string_view g) {
  return canonicalize_answer(y) == canonicalize_answer(g) ? 1 : 0;
}

double squared_error_metric(double y, double g) {
  if (!std::isfinite(y) || !std::isfinite(g)) fail(ErrorCode::invalid_input, "squared_error_metric: non-finite input");
  const double d = y - g;
  return d * d;
}

double metric_value(MetricKind kind, const SimRecord& record) {
  switch (kind) {
    case MetricKind::squared_error:
      return squared_error_metric(record.y, record.g);
    case MetricKind::accuracy:
      return record.y == record.g ? 1.0 : 0.0;
  }
  fail(ErrorCode::invalid_input, "unknown metric kind");
}

std::string_view to_string(MetricKind kind) {
  return kind == MetricKind::accuracy ? "accuracy" : "squared_error";
}

MetricKind metric_from_string(std::string_view name) {
  if (name == "accuracy") return MetricKind::accuracy;
  if (name == "squared_error") return MetricKind::squared_error;
  fail(ErrorCode::invalid_input, "unknown metric '" + std::string(name) + "'");
}

void validate(const BenchRecord& record) {
  const std::string where = record.id.empty() ? std::string("record") : "record '" + record.id + "'";
  if (record.phi != 0 && record.phi != 1) fail(ErrorCode::contract, where + ": phi must be 0 or 1");
  if (record.aux.size() < 2) fail(ErrorCode::contract, where + ": aux needs at least 2 triples");
  if (record.tau_pred.size() != record.aux.size()) {
    fail(ErrorCode::contract, where + ": tau_pred length " + std::to_string(record.tau_pred.size()) +
                                  " does not match aux length " + std::to_string(record.aux.size()));
  }
  for (const auto& t : record.aux) {
    if (t.v > 1) fail(ErrorCode::contract, where + ": aux v must be 0 or 1");
  }
  for (double t : record.tau_pred) {
    // Out-of-range values are clamped (and counted) at use, not rejected here.
    if (!std::isfinite(t)) fail(ErrorCode::contract, where + ": tau_pred entries must be finite");
  }
}

}  // namespace eifeval
