#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cashflow {

// Stable error taxonomy shared by the C++ core, the C API and the CLI
// exit-code mapping. Codes are grouped by pipeline stage.
enum class Errc {
  ok = 0,

  // configuration
  config_invalid,

  // statement ingestion
  malformed_row,
  missing_column,
  currency_scale_error,
  wrong_month_count,
  non_consecutive_months,
  mixed_accounts,
  validation_rejected,

  // feature store
  duplicate_key,
  not_found,

  // binning / modelling
  empty_input,
  single_class,
  unbinned_value,
  invalid_thresholds,
  invalid_param,
  leakage_guard,

  // synthetic data
  invalid_config,

  // registry / service
  duplicate_artifact,
  schema_invalid,
  no_champion,
  insufficient_outcomes,
  empty_window,
  invalid_transition,

  // plumbing
  io_error,
  internal,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace cashflow
