#pragma once

#include <stdexcept>
#include <string>

namespace minkdim {

enum class ErrorCode {
  invalid_argument,
  invalid_sequence,
  delta_too_large,
  truncation,
  cell_budget,
  degenerate,
  sampling_too_coarse,
  step_underflow,
  left_domain,
  out_of_domain,
  non_contracting,
  invalid_spec,
  resonant,
  trivial_cycle,
  inequality,
  contradictory,
  singular,
  io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace minkdim
