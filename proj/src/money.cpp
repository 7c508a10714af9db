#include "money.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>

#include "errors.hpp"

namespace cashflow {

MinorUnits parse_money(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) raise(Errc::malformed_row, "empty amount");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) raise(Errc::malformed_row, "amount has no digits: '" + std::string(text) + "'");

  const auto dot = s.find('.');
  std::string_view whole = dot == std::string_view::npos ? s : s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);

  if (whole.empty() && frac.empty())
    raise(Errc::malformed_row, "amount has no digits: '" + std::string(text) + "'");
  if (frac.size() > 2)
    raise(Errc::currency_scale_error,
          "more than 2 decimal places: '" + std::string(text) + "'");

  auto digits_value = [&](std::string_view d) -> std::int64_t {
    std::int64_t v = 0;
    for (char c : d) {
      if (c < '0' || c > '9')
        raise(Errc::malformed_row, "non-digit in amount: '" + std::string(text) + "'");
      v = v * 10 + (c - '0');
    }
    return v;
  };

  std::int64_t units = whole.empty() ? 0 : digits_value(whole);
  std::int64_t cents = frac.empty() ? 0 : digits_value(frac);
  if (frac.size() == 1) cents *= 10;

  std::int64_t minor = units * 100 + cents;
  return negative ? -minor : minor;
}

std::string format_money(MinorUnits amount) {
  const bool negative = amount < 0;
  const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-(amount + 1)) + 1
                                     : static_cast<std::uint64_t>(amount);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%s%llu.%02llu", negative ? "-" : "",
                static_cast<unsigned long long>(mag / 100),
                static_cast<unsigned long long>(mag % 100));
  return buf;
}

unsigned YearMonth::days_in_month() const {
  using namespace std::chrono;
  const year_month_day_last last{std::chrono::year{year} / std::chrono::month{month} / std::chrono::last};
  return static_cast<unsigned>(last.day());
}

std::string YearMonth::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u", year, month);
  return buf;
}

namespace {

int parse_int_field(std::string_view s, const char* what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    raise(Errc::malformed_row, std::string("bad ") + what + ": '" + std::string(s) + "'");
  return value;
}

}  // namespace

Date parse_date(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
    raise(Errc::malformed_row, "date not ISO-8601 (YYYY-MM-DD): '" + std::string(iso) + "'");
  const int y = parse_int_field(iso.substr(0, 4), "year");
  const int m = parse_int_field(iso.substr(5, 2), "month");
  const int d = parse_int_field(iso.substr(8, 2), "day");
  const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) raise(Errc::malformed_row, "invalid calendar date: '" + std::string(iso) + "'");
  return date;
}

YearMonth parse_year_month(std::string_view iso) {
  if (iso.size() != 7 || iso[4] != '-')
    raise(Errc::malformed_row, "month not ISO-8601 (YYYY-MM): '" + std::string(iso) + "'");
  const int y = parse_int_field(iso.substr(0, 4), "year");
  const int m = parse_int_field(iso.substr(5, 2), "month");
  if (m < 1 || m > 12) raise(Errc::malformed_row, "invalid month: '" + std::string(iso) + "'");
  return YearMonth{y, static_cast<unsigned>(m)};
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

YearMonth year_month_of(const Date& d) {
  return YearMonth{static_cast<int>(d.year()), static_cast<unsigned>(d.month())};
}

long days_between(const Date& a, const Date& b) {
  using namespace std::chrono;
  return (sys_days{b} - sys_days{a}).count();
}

}  // namespace cashflow
