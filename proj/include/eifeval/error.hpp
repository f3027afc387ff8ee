#ifndef EIFEVAL_ERROR_HPP
#define EIFEVAL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace eifeval {

// Mirrors eif_status in eifeval.h one-to-one (except EIF_OK).
enum class ErrorCode {
  invalid_input = 1,
  parse,
  contract,
  degenerate_signal,
  singular_design,
  invalid_folds,
  missing_tau,
  empty_dataset,
  invalid_m,
  undefined_vr,
  invalid_estimate,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace eifeval

#endif  // EIFEVAL_ERROR_HPP
