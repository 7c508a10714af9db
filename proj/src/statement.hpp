#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "application.hpp"
#include "money.hpp"

namespace cashflow {

enum class TxnCategory { inflow, outflow, transfer, fee, unknown };

std::string_view category_name(TxnCategory c);
TxnCategory category_from_name(std::string_view name);

struct Transaction {
  Date txn_date{};
  std::string description;
  MinorUnits amount_minor = 0;        // credits positive, debits negative; never 0
  MinorUnits balance_after_minor = 0; // running ledger balance after this row
  TxnCategory category = TxnCategory::unknown;

  bool operator==(const Transaction&) const = default;
};

// One account-month of ledger rows, sorted non-decreasing by date.
struct BankStatement {
  std::string account_id;
  YearMonth month{};
  MinorUnits opening_balance_minor = 0;
  std::vector<Transaction> transactions;

  MinorUnits closing_balance() const {
    return transactions.empty() ? opening_balance_minor : transactions.back().balance_after_minor;
  }

  bool operator==(const BankStatement&) const = default;
};

enum class AbnormalityFlag {
  balance_mismatch,
  duplicate_txn,
  gap_month,
  negative_opening,
  round_trip_pair,
};

std::string_view flag_name(AbnormalityFlag f);

enum class Severity { none, warn, reject };

std::string_view severity_name(Severity s);

struct AbnormalityReport {
  std::string account_id;
  YearMonth month{};
  std::vector<AbnormalityFlag> flags;
  Severity severity = Severity::none;  // none iff flags empty

  bool has(AbnormalityFlag f) const;
  std::string to_json_line() const;  // one object per statement (JSON lines)
};

// Keyword table mapping description substrings to categories; first match
// wins, case-insensitive. Unmatched descriptions stay `unknown`.
class CategoryRules {
 public:
  static CategoryRules defaults();
  // File format: one `KEYWORD,category` pair per line, '#' comments.
  static CategoryRules load(const std::string& path);

  void add(std::string keyword, TxnCategory category);
  TxnCategory classify(std::string_view description) const;

 private:
  std::vector<std::pair<std::string, TxnCategory>> rules_;
};

enum class StatementFormat { csv, json };

// Account/month context for the CSV dialect, which carries only ledger
// columns. When `opening_balance_minor` is absent it is derived from the
// first row (balance - amount); an empty statement then opens at zero.
struct CsvContext {
  std::string account_id;
  YearMonth month{};
  std::optional<MinorUnits> opening_balance_minor;
};

// Parses one statement from raw bytes. CSV requires the exact header
// `date,description,amount,balance`; the JSON dialect mirrors those field
// names and adds account_id, month and opening_balance. Amounts are decimal
// strings scaled exactly to minor units.
BankStatement parse_statement(std::string_view raw, StatementFormat format,
                              const CsvContext& context = {},
                              const CategoryRules& rules = CategoryRules::defaults());

std::string serialize_statement_csv(const BankStatement& s);
std::string serialize_statement_json(const BankStatement& s);

// Evaluates every abnormality rule; total function. severity=reject iff
// BALANCE_MISMATCH fired, warn when anything else did.
AbnormalityReport validate_statement(const BankStatement& s);

// Collapses exact duplicate transactions (same account, date, description,
// amount, balance) across the input, keeping first occurrences. Stable and
// idempotent.
std::vector<BankStatement> deduplicate(const std::vector<BankStatement>& statements);

// Six consecutive months for one account plus the application form.
struct ApplicantRecord {
  std::string applicant_id;
  std::vector<BankStatement> months;  // oldest -> newest
  ApplicationForm form;
  std::optional<int> label;  // 1 = default, 0 = non-default
};

inline constexpr int kRequiredMonths = 6;

// Orders statements oldest->newest and enforces the 6-consecutive-month,
// single-account contract. Throws WRONG_MONTH_COUNT, NON_CONSECUTIVE_MONTHS
// or MIXED_ACCOUNTS.
ApplicantRecord assemble_applicant(std::vector<BankStatement> statements, ApplicationForm form,
                                   std::optional<int> label = std::nullopt);

// Pipeline entry point: validates first and refuses any statement whose
// report severity is reject (VALIDATION_REJECTED).
ApplicantRecord assemble_validated(std::vector<BankStatement> statements, ApplicationForm form,
                                   std::optional<int> label = std::nullopt);

}  // namespace cashflow
