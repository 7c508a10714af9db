#include "errors.hpp"

namespace cashflow {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::ok: return "OK";
    case Errc::config_invalid: return "CONFIG_INVALID";
    case Errc::malformed_row: return "MALFORMED_ROW";
    case Errc::missing_column: return "MISSING_COLUMN";
    case Errc::currency_scale_error: return "CURRENCY_SCALE_ERROR";
    case Errc::wrong_month_count: return "WRONG_MONTH_COUNT";
    case Errc::non_consecutive_months: return "NON_CONSECUTIVE_MONTHS";
    case Errc::mixed_accounts: return "MIXED_ACCOUNTS";
    case Errc::validation_rejected: return "VALIDATION_REJECTED";
    case Errc::duplicate_key: return "DUPLICATE_KEY";
    case Errc::not_found: return "NOT_FOUND";
    case Errc::empty_input: return "EMPTY_INPUT";
    case Errc::single_class: return "SINGLE_CLASS";
    case Errc::unbinned_value: return "UNBINNED_VALUE";
    case Errc::invalid_thresholds: return "INVALID_THRESHOLDS";
    case Errc::invalid_param: return "INVALID_PARAM";
    case Errc::leakage_guard: return "LEAKAGE_GUARD";
    case Errc::invalid_config: return "INVALID_CONFIG";
    case Errc::duplicate_artifact: return "DUPLICATE_ARTIFACT";
    case Errc::schema_invalid: return "SCHEMA_INVALID";
    case Errc::no_champion: return "NO_CHAMPION";
    case Errc::insufficient_outcomes: return "INSUFFICIENT_OUTCOMES";
    case Errc::empty_window: return "EMPTY_WINDOW";
    case Errc::invalid_transition: return "INVALID_TRANSITION";
    case Errc::io_error: return "IO_ERROR";
    case Errc::internal: return "INTERNAL";
  }
  return "INTERNAL";
}

}  // namespace cashflow
