#pragma once

#include <stdexcept>
#include <string>

namespace twogroup {

/// Error categories surfaced by the library. The names also appear in
/// CLI diagnostics and in the status column of batch output.
enum class errc {
  invalid_sample,
  too_few_samples,
  non_finite_value,
  degenerate_group,
  invalid_params,
  invalid_scenario,
  malformed_header,
  ragged_row,
  non_numeric_cell,
  duplicate_id,
};

constexpr const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::invalid_sample:   return "InvalidSample";
    case errc::too_few_samples:  return "TooFewSamples";
    case errc::non_finite_value: return "NonFiniteValue";
    case errc::degenerate_group: return "DegenerateGroup";
    case errc::invalid_params:   return "InvalidParams";
    case errc::invalid_scenario: return "InvalidScenario";
    case errc::malformed_header: return "MalformedHeader";
    case errc::ragged_row:       return "RaggedRow";
    case errc::non_numeric_cell: return "NonNumericCell";
    case errc::duplicate_id:     return "DuplicateId";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace twogroup
