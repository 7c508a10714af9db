#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace cashflow {

// Monetary values are signed integers in minor currency units (cents).
// Parsing is exact decimal-string scaling; no floating point touches money.
using MinorUnits = std::int64_t;

// Parses "123", "-4.5", "0.07" to minor units. Throws CURRENCY_SCALE_ERROR on
// more than two decimal places and MALFORMED_ROW on anything non-numeric.
MinorUnits parse_money(std::string_view text);

// Renders minor units as a plain decimal with exactly two places: -12.30
std::string format_money(MinorUnits amount);

using Date = std::chrono::year_month_day;

struct YearMonth {
  int year = 0;
  unsigned month = 1;  // 1..12

  auto operator<=>(const YearMonth&) const = default;

  YearMonth next() const {
    return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1};
  }
  unsigned days_in_month() const;
  std::string str() const;  // "2024-03"
};

Date parse_date(std::string_view iso);       // "2024-01-02"
YearMonth parse_year_month(std::string_view iso);  // "2024-01"
std::string format_date(const Date& d);
YearMonth year_month_of(const Date& d);

// Whole days between two dates (b - a).
long days_between(const Date& a, const Date& b);

}  // namespace cashflow
