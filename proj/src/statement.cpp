#include "statement.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "errors.hpp"

namespace cashflow {

using nlohmann::json;

std::string_view category_name(TxnCategory c) {
  switch (c) {
    case TxnCategory::inflow: return "inflow";
    case TxnCategory::outflow: return "outflow";
    case TxnCategory::transfer: return "transfer";
    case TxnCategory::fee: return "fee";
    case TxnCategory::unknown: return "unknown";
  }
  return "unknown";
}

TxnCategory category_from_name(std::string_view name) {
  if (name == "inflow") return TxnCategory::inflow;
  if (name == "outflow") return TxnCategory::outflow;
  if (name == "transfer") return TxnCategory::transfer;
  if (name == "fee") return TxnCategory::fee;
  return TxnCategory::unknown;
}

std::string_view flag_name(AbnormalityFlag f) {
  switch (f) {
    case AbnormalityFlag::balance_mismatch: return "BALANCE_MISMATCH";
    case AbnormalityFlag::duplicate_txn: return "DUPLICATE_TXN";
    case AbnormalityFlag::gap_month: return "GAP_MONTH";
    case AbnormalityFlag::negative_opening: return "NEGATIVE_OPENING";
    case AbnormalityFlag::round_trip_pair: return "ROUND_TRIP_PAIR";
  }
  return "";
}

std::string_view severity_name(Severity s) {
  switch (s) {
    case Severity::none: return "none";
    case Severity::warn: return "warn";
    case Severity::reject: return "reject";
  }
  return "none";
}

bool AbnormalityReport::has(AbnormalityFlag f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

std::string AbnormalityReport::to_json_line() const {
  json j;
  j["account_id"] = account_id;
  j["month"] = month.str();
  auto names = json::array();
  for (auto f : flags) names.push_back(std::string(flag_name(f)));
  j["flags"] = names;
  if (severity != Severity::none) j["severity"] = std::string(severity_name(severity));
  return j.dump();
}

// ---------------------------------------------------------------------------
// category rules

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

}  // namespace

CategoryRules CategoryRules::defaults() {
  CategoryRules r;
  r.add("SALES", TxnCategory::inflow);
  r.add("DEPOSIT", TxnCategory::inflow);
  r.add("INVOICE", TxnCategory::inflow);
  r.add("RECEIPT", TxnCategory::inflow);
  r.add("SUPPLIER", TxnCategory::outflow);
  r.add("PAYMENT", TxnCategory::outflow);
  r.add("RENT", TxnCategory::outflow);
  r.add("UTILITIES", TxnCategory::outflow);
  r.add("PAYROLL", TxnCategory::outflow);
  r.add("WITHDRAWAL", TxnCategory::outflow);
  r.add("TRANSFER", TxnCategory::transfer);
  r.add("FEE", TxnCategory::fee);
  r.add("CHARGE", TxnCategory::fee);
  return r;
}

CategoryRules CategoryRules::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open category rules: " + path);
  CategoryRules r;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      raise(Errc::config_invalid, "category rule needs KEYWORD,category: " + line);
    r.add(line.substr(0, comma), category_from_name(line.substr(comma + 1)));
  }
  return r;
}

void CategoryRules::add(std::string keyword, TxnCategory category) {
  rules_.emplace_back(upper(keyword), category);
}

TxnCategory CategoryRules::classify(std::string_view description) const {
  const std::string d = upper(description);
  for (const auto& [keyword, category] : rules_)
    if (d.find(keyword) != std::string::npos) return category;
  return TxnCategory::unknown;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

// Minimal RFC-4180 field split: double-quote wrapping, "" escapes.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t row,
                                        bool* in_quotes_error) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  if (quoted && in_quotes_error) {
    *in_quotes_error = true;
    (void)row;
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void finalize_statement(BankStatement& s, const CategoryRules& rules, bool have_opening) {
  std::stable_sort(s.transactions.begin(), s.transactions.end(),
                   [](const Transaction& a, const Transaction& b) { return a.txn_date < b.txn_date; });
  for (auto& t : s.transactions) t.category = rules.classify(t.description);
  if (!have_opening) {
    s.opening_balance_minor =
        s.transactions.empty() ? 0
                               : s.transactions.front().balance_after_minor -
                                     s.transactions.front().amount_minor;
  }
}

BankStatement parse_csv(std::string_view raw, const CsvContext& context,
                        const CategoryRules& rules) {
  BankStatement s;
  s.account_id = context.account_id;
  s.month = context.month;

  std::istringstream in{std::string(raw)};
  std::string line;
  if (!std::getline(in, line)) raise(Errc::missing_column, "empty input, header required");
  bool bad_quotes = false;
  auto header = split_csv_line(line, 1, &bad_quotes);
  const std::vector<std::string> expected = {"date", "description", "amount", "balance"};
  if (header != expected) {
    for (const auto& col : expected)
      if (std::find(header.begin(), header.end(), col) == header.end())
        raise(Errc::missing_column, "missing column '" + col + "'");
    raise(Errc::missing_column, "header must be exactly date,description,amount,balance");
  }

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    bad_quotes = false;
    auto fields = split_csv_line(line, row, &bad_quotes);
    if (bad_quotes || fields.size() != 4)
      raise(Errc::malformed_row, "row " + std::to_string(row) + ": expected 4 fields");
    Transaction t;
    try {
      t.txn_date = parse_date(fields[0]);
      t.description = fields[1];
      t.amount_minor = parse_money(fields[2]);
      t.balance_after_minor = parse_money(fields[3]);
    } catch (const Error& e) {
      if (e.code() == Errc::currency_scale_error) throw;
      raise(Errc::malformed_row, "row " + std::to_string(row) + ": " + e.what());
    }
    if (t.amount_minor == 0)
      raise(Errc::malformed_row, "row " + std::to_string(row) + ": zero amount");
    s.transactions.push_back(std::move(t));
  }

  if (context.opening_balance_minor) s.opening_balance_minor = *context.opening_balance_minor;
  finalize_statement(s, rules, context.opening_balance_minor.has_value());
  return s;
}

BankStatement parse_json_statement(std::string_view raw, const CategoryRules& rules) {
  json j;
  try {
    j = json::parse(raw);
  } catch (const json::exception& e) {
    raise(Errc::malformed_row, std::string("invalid JSON: ") + e.what());
  }
  for (const char* key : {"account_id", "month", "opening_balance", "transactions"})
    if (!j.contains(key)) raise(Errc::missing_column, std::string("missing field '") + key + "'");

  BankStatement s;
  s.account_id = j["account_id"].get<std::string>();
  s.month = parse_year_month(j["month"].get<std::string>());
  s.opening_balance_minor = parse_money(j["opening_balance"].get<std::string>());

  std::size_t row = 0;
  for (const auto& jt : j["transactions"]) {
    ++row;
    for (const char* key : {"date", "description", "amount", "balance"})
      if (!jt.contains(key)) raise(Errc::missing_column, std::string("missing field '") + key + "'");
    Transaction t;
    try {
      t.txn_date = parse_date(jt["date"].get<std::string>());
      t.description = jt["description"].get<std::string>();
      t.amount_minor = parse_money(jt["amount"].get<std::string>());
      t.balance_after_minor = parse_money(jt["balance"].get<std::string>());
    } catch (const Error& e) {
      if (e.code() == Errc::currency_scale_error) throw;
      raise(Errc::malformed_row, "transaction " + std::to_string(row) + ": " + e.what());
    }
    if (t.amount_minor == 0)
      raise(Errc::malformed_row, "transaction " + std::to_string(row) + ": zero amount");
    s.transactions.push_back(std::move(t));
  }
  finalize_statement(s, rules, true);
  return s;
}

}  // namespace

BankStatement parse_statement(std::string_view raw, StatementFormat format,
                              const CsvContext& context, const CategoryRules& rules) {
  return format == StatementFormat::csv ? parse_csv(raw, context, rules)
                                        : parse_json_statement(raw, rules);
}

std::string serialize_statement_csv(const BankStatement& s) {
  std::string out = "date,description,amount,balance\n";
  for (const auto& t : s.transactions) {
    out += format_date(t.txn_date);
    out.push_back(',');
    out += csv_escape(t.description);
    out.push_back(',');
    out += format_money(t.amount_minor);
    out.push_back(',');
    out += format_money(t.balance_after_minor);
    out.push_back('\n');
  }
  return out;
}

std::string serialize_statement_json(const BankStatement& s) {
  json j;
  j["account_id"] = s.account_id;
  j["month"] = s.month.str();
  j["opening_balance"] = format_money(s.opening_balance_minor);
  auto rows = json::array();
  for (const auto& t : s.transactions) {
    json jt;
    jt["date"] = format_date(t.txn_date);
    jt["description"] = t.description;
    jt["amount"] = format_money(t.amount_minor);
    jt["balance"] = format_money(t.balance_after_minor);
    rows.push_back(std::move(jt));
  }
  j["transactions"] = std::move(rows);
  return j.dump();
}

// ---------------------------------------------------------------------------
// validation

AbnormalityReport validate_statement(const BankStatement& s) {
  AbnormalityReport report;
  report.account_id = s.account_id;
  report.month = s.month;

  MinorUnits running = s.opening_balance_minor;
  bool mismatch = false;
  for (const auto& t : s.transactions) {
    running += t.amount_minor;
    if (t.balance_after_minor != running) {
      mismatch = true;
      break;
    }
  }
  if (mismatch) report.flags.push_back(AbnormalityFlag::balance_mismatch);

  std::set<std::tuple<std::string, std::string, MinorUnits>> seen;
  bool duplicate = false;
  for (const auto& t : s.transactions)
    if (!seen.insert({format_date(t.txn_date), t.description, t.amount_minor}).second)
      duplicate = true;
  if (duplicate) report.flags.push_back(AbnormalityFlag::duplicate_txn);

  if (s.transactions.empty()) report.flags.push_back(AbnormalityFlag::gap_month);
  if (s.opening_balance_minor < 0) report.flags.push_back(AbnormalityFlag::negative_opening);

  // Equal-and-opposite amounts within 2 days: self-funding heuristic.
  bool round_trip = false;
  for (std::size_t i = 0; i < s.transactions.size() && !round_trip; ++i) {
    for (std::size_t k = i + 1; k < s.transactions.size(); ++k) {
      const long gap = days_between(s.transactions[i].txn_date, s.transactions[k].txn_date);
      if (gap > 2) break;  // sorted by date
      if (s.transactions[i].amount_minor == -s.transactions[k].amount_minor) {
        round_trip = true;
        break;
      }
    }
  }
  if (round_trip) report.flags.push_back(AbnormalityFlag::round_trip_pair);

  if (report.flags.empty())
    report.severity = Severity::none;
  else
    report.severity = report.has(AbnormalityFlag::balance_mismatch) ? Severity::reject : Severity::warn;
  return report;
}

std::vector<BankStatement> deduplicate(const std::vector<BankStatement>& statements) {
  std::set<std::tuple<std::string, std::string, std::string, MinorUnits, MinorUnits>> seen;
  std::vector<BankStatement> out;
  out.reserve(statements.size());
  for (const auto& s : statements) {
    BankStatement copy;
    copy.account_id = s.account_id;
    copy.month = s.month;
    copy.opening_balance_minor = s.opening_balance_minor;
    for (const auto& t : s.transactions)
      if (seen.insert({s.account_id, format_date(t.txn_date), t.description, t.amount_minor,
                       t.balance_after_minor})
              .second)
        copy.transactions.push_back(t);
    out.push_back(std::move(copy));
  }
  return out;
}

// ---------------------------------------------------------------------------
// assembly

ApplicantRecord assemble_applicant(std::vector<BankStatement> statements, ApplicationForm form,
                                   std::optional<int> label) {
  check_form(form);
  for (const auto& s : statements)
    if (s.account_id != statements.front().account_id)
      raise(Errc::mixed_accounts, "statements span accounts '" + statements.front().account_id +
                                      "' and '" + s.account_id + "'");

  std::sort(statements.begin(), statements.end(),
            [](const BankStatement& a, const BankStatement& b) { return a.month < b.month; });

  std::set<YearMonth> distinct;
  for (const auto& s : statements) distinct.insert(s.month);
  if (distinct.size() != kRequiredMonths || statements.size() != kRequiredMonths)
    raise(Errc::wrong_month_count, "expected 6 distinct months, got " +
                                       std::to_string(distinct.size()));
  for (std::size_t i = 1; i < statements.size(); ++i)
    if (statements[i].month != statements[i - 1].month.next())
      raise(Errc::non_consecutive_months, "gap between " + statements[i - 1].month.str() +
                                              " and " + statements[i].month.str());

  ApplicantRecord rec;
  rec.applicant_id = statements.front().account_id;
  rec.months = std::move(statements);
  rec.form = std::move(form);
  rec.label = label;
  return rec;
}

ApplicantRecord assemble_validated(std::vector<BankStatement> statements, ApplicationForm form,
                                   std::optional<int> label) {
  for (const auto& s : statements) {
    const auto report = validate_statement(s);
    if (report.severity == Severity::reject)
      raise(Errc::validation_rejected,
            "statement " + s.account_id + "/" + s.month.str() + " rejected: " +
                report.to_json_line());
  }
  return assemble_applicant(std::move(statements), std::move(form), label);
}

}  // namespace cashflow
