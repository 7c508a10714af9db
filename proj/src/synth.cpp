#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "errors.hpp"
#include "features.hpp"
#include "jsonl.hpp"
#include "rng.hpp"
#include "scorecard.hpp"

namespace cashflow {

namespace fs = std::filesystem;

namespace {

constexpr int kStartYear = 2024;
constexpr unsigned kStartMonth = 1;
constexpr MinorUnits kMonthlyFee = 1500;  // RM 15.00 service fee, posts every month

struct CategoryTable {
  std::vector<std::string> codes;
  std::vector<double> probs;
  std::vector<double> effects;  // standardized to mean 0, variance 1 under probs
};

CategoryTable standardized(std::vector<std::string> codes, std::vector<double> probs,
                           std::vector<double> raw_effects) {
  double mean = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) mean += probs[i] * raw_effects[i];
  double var = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i)
    var += probs[i] * (raw_effects[i] - mean) * (raw_effects[i] - mean);
  const double sd = std::sqrt(var);
  for (auto& e : raw_effects) e = (e - mean) / sd;
  return {std::move(codes), std::move(probs), std::move(raw_effects)};
}

const CategoryTable& sector_table() {
  static const CategoryTable t = standardized(
      {"S01", "S02", "S03", "S04", "S05"},
      {0.30, 0.25, 0.20, 0.15, 0.10},
      {-1.0, -0.35, 0.25, 0.9, 1.6});
  return t;
}

const CategoryTable& location_table() {
  static const CategoryTable t = standardized(
      {"KUL", "SGR", "JHR"},
      {0.45, 0.35, 0.20},
      {-0.8, 0.1, 1.0});
  return t;
}

const CategoryTable& classification_table() {
  static const CategoryTable t = standardized(
      {"C1", "C2", "C3"},
      {0.45, 0.35, 0.20},
      {-1.0, 0.2, 1.4});
  return t;
}

const std::vector<std::string> kCreditDescriptions = {
    "SALES DEPOSIT", "CUSTOMER RECEIPT", "INVOICE SETTLEMENT", "ONLINE SALES DEPOSIT"};
const std::vector<std::string> kDebitDescriptions = {
    "SUPPLIER PAYMENT", "RENT PAYMENT", "UTILITIES PAYMENT", "PAYROLL PAYMENT",
    "CASH WITHDRAWAL"};

// Latent traits backing each canonical feature for the log-odds model.
struct Traits {
  double level = 0.0;
  double growth = 0.0;
  double vol = 0.0;
  double regularity = 0.0;
  double installment = 0.0;
  double years = 0.0;
  double num_directors = 0.0;
  double age = 0.0;
  double sector = 0.0;
  double location = 0.0;
  double classification = 0.0;

  double of(const std::string& feature) const {
    if (feature == "app_years_in_business") return years;
    if (feature == "app_location") return location;
    if (feature == "app_sector_code") return sector;
    if (feature == "app_num_directors") return num_directors;
    if (feature == "app_director_min_age") return age;
    if (feature == "app_customer_classification") return classification;
    if (feature == "app_repayment_capacity") return installment;
    if (feature == "bank_log_balance_growth") return growth;
    if (feature == "bank_mean_avg_balance") return level;
    if (feature == "bank_low_balance_ratio_3m") return -vol;
    if (feature == "bank_low_high_pct_diff_3m") return vol;
    if (feature == "bank_max_avg_balance_3m") return 0.8 * level + 0.6 * growth;
    if (feature == "bank_cashflow_stability") return vol;
    if (feature == "bank_deposit_regularity") return regularity;
    if (feature == "bank_balance_volatility") return vol;
    if (feature == "bank_mean_monthly_credits") return level;
    if (feature == "bank_mean_monthly_debits") return level;
    raise(Errc::invalid_config, "signal weight names unknown feature '" + feature + "'");
  }
};

}  // namespace

std::map<std::string, double> GeneratorConfig::default_signal_weights() {
  // Bank traits dominate the log-odds; application traits contribute a
  // smaller, mostly orthogonal share so feature-group ablations separate.
  return {
      {"app_years_in_business", -0.56},
      {"app_sector_code", 0.28},
      {"app_customer_classification", 0.24},
      {"app_director_min_age", -0.36},
      {"app_repayment_capacity", -0.10},
      {"bank_log_balance_growth", -1.40},
      {"bank_mean_avg_balance", -0.85},
      {"bank_cashflow_stability", 0.85},
      {"bank_deposit_regularity", -0.75},
      {"bank_balance_volatility", 0.50},
  };
}

GeneratorConfig GeneratorConfig::with_default_signal() {
  GeneratorConfig c;
  c.signal_weights = default_signal_weights();
  return c;
}

double calibrate_intercept(double target, double signal_sd) {
  // Expected event rate under intercept w0:  E_u sigmoid(w0 + sd * u).
  const auto expected_rate = [signal_sd](double w0) {
    const int steps = 4000;  // Simpson over [-8, 8]
    const double a = -8.0, b = 8.0;
    const double h = (b - a) / steps;
    double acc = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double u = a + h * i;
      const double phi = std::exp(-0.5 * u * u) / std::sqrt(2.0 * 3.141592653589793);
      const double f = sigmoid(w0 + signal_sd * u) * phi;
      acc += (i == 0 || i == steps) ? f : (i % 2 == 1 ? 4.0 * f : 2.0 * f);
    }
    return acc * h / 3.0;
  };
  double lo = -20.0, hi = 20.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (expected_rate(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Portfolio generate_portfolio(const GeneratorConfig& config) {
  if (config.n_applicants < 1) raise(Errc::invalid_config, "n_applicants must be >= 1");
  if (config.event_rate_target <= 0.0 || config.event_rate_target >= 1.0)
    raise(Errc::invalid_config, "event_rate_target must lie in (0,1)");
  if (config.noise_scale < 0.0) raise(Errc::invalid_config, "noise_scale must be >= 0");
  if (config.months != kRequiredMonths)
    raise(Errc::invalid_config, "generator emits exactly 6 months per applicant");
  {
    Traits probe;  // validates weight names up front
    for (const auto& [name, _] : config.signal_weights) (void)probe.of(name);
  }

  double signal_var = config.noise_scale * config.noise_scale;
  for (const auto& [_, w] : config.signal_weights) signal_var += w * w;
  const double intercept = calibrate_intercept(config.event_rate_target, std::sqrt(signal_var));

  Rng rng(config.seed);
  Portfolio portfolio;
  portfolio.records.reserve(static_cast<std::size_t>(config.n_applicants));

  for (int a = 0; a < config.n_applicants; ++a) {
    char id_buf[16];
    std::snprintf(id_buf, sizeof(id_buf), "ACC%05d", a);
    const std::string applicant_id = id_buf;

    // 1. latent traits
    Traits t;
    t.level = rng.normal();
    t.growth = rng.normal();
    t.vol = rng.normal();
    t.regularity = rng.normal();
    t.installment = rng.normal();
    t.years = rng.normal();
    const double z_noise = rng.normal();

    // 2. form fields
    ApplicationForm form;
    const auto& loc = location_table();
    const auto& sec = sector_table();
    const auto& cls = classification_table();
    const std::size_t loc_i = rng.categorical(loc.probs);
    const std::size_t sec_i = rng.categorical(sec.probs);
    const std::size_t cls_i = rng.categorical(cls.probs);
    form.location = loc.codes[loc_i];
    form.sector_code = sec.codes[sec_i];
    form.customer_classification = cls.codes[cls_i];
    t.location = loc.effects[loc_i];
    t.sector = sec.effects[sec_i];
    t.classification = cls.effects[cls_i];

    form.years_in_business = std::round(10.0 * 2.5 * std::exp(0.7 * t.years)) / 10.0;
    const int directors = 1 + rng.poisson(1.2);
    form.num_directors = directors;
    t.num_directors = (static_cast<double>(directors) - 2.2) / std::sqrt(1.2);
    const auto age = static_cast<int>(rng.uniform_int(22, 62));
    form.director_min_age = age;
    t.age = (static_cast<double>(age) - 42.0) / 11.83;

    // Scale anchor for this applicant's money flows, in minor units. The
    // installment draw is dominated by its own trait so repayment capacity
    // does not just proxy the balance level.
    const double level_minor = 300000.0 * std::exp(0.95 * t.level);
    const double growth_rate = 0.12 * t.growth;
    form.monthly_installment_minor = std::max<MinorUnits>(
        100, static_cast<MinorUnits>(std::llround(level_minor * 0.10 * std::exp(-0.9 * t.installment))));

    // 3. months
    std::vector<BankStatement> months;
    MinorUnits balance = std::max<MinorUnits>(1000, static_cast<MinorUnits>(std::llround(level_minor)));
    const double vol_scale = 0.10 * std::exp(0.85 * t.vol);
    const double credit_intensity = std::exp(0.55 + 0.95 * t.regularity);
    YearMonth ym{kStartYear, kStartMonth};

    for (int m = 0; m < config.months; ++m) {
      BankStatement s;
      s.account_id = applicant_id;
      s.month = ym;
      s.opening_balance_minor = balance;

      const double target_close =
          level_minor * std::exp(growth_rate * (m + 1)) * std::exp(vol_scale * rng.normal());
      const MinorUnits net_target =
          static_cast<MinorUnits>(std::llround(target_close)) - balance;

      // Credits: count, then sizes; total must cover the net target plus fee.
      const int n_credits = rng.poisson(credit_intensity);
      std::vector<MinorUnits> credits;
      MinorUnits credit_total = 0;
      for (int c = 0; c < n_credits; ++c) {
        const auto amount = static_cast<MinorUnits>(
            std::llround(level_minor * 0.25 * std::exp(0.5 * rng.normal())));
        credits.push_back(std::max<MinorUnits>(100, amount));
        credit_total += credits.back();
      }
      MinorUnits debit_total = credit_total - net_target;
      if (debit_total < kMonthlyFee) {
        // Grow the inflow side so outflows stay positive.
        const MinorUnits bump = kMonthlyFee - debit_total;
        if (credits.empty()) credits.push_back(bump);
        else credits.back() += bump;
        credit_total += bump;
        debit_total = kMonthlyFee;
      }

      // Debits: the fee plus a random split of the remainder.
      std::vector<MinorUnits> debits;
      MinorUnits remainder = debit_total - kMonthlyFee;
      const int n_debits = 1 + rng.poisson(2.0);
      std::vector<double> cuts;
      for (int dcut = 0; dcut < n_debits; ++dcut) cuts.push_back(rng.uniform());
      double cut_sum = 0.0;
      for (double c : cuts) cut_sum += c;
      MinorUnits assigned = 0;
      for (int dcut = 0; dcut < n_debits; ++dcut) {
        MinorUnits piece =
            dcut + 1 == n_debits
                ? remainder - assigned
                : static_cast<MinorUnits>(std::llround(
                      static_cast<double>(remainder) * cuts[static_cast<std::size_t>(dcut)] / cut_sum));
        piece = std::clamp<MinorUnits>(piece, 0, remainder - assigned);
        assigned += piece;
        debits.push_back(piece);
      }

      struct Flow {
        unsigned day;
        MinorUnits amount;
        std::string description;
      };
      std::vector<Flow> flows;
      flows.push_back({1, -kMonthlyFee, "BANK SERVICE FEE"});
      const unsigned days = ym.days_in_month();
      for (std::size_t c = 0; c < credits.size(); ++c) {
        const auto day = static_cast<unsigned>(rng.uniform_int(1, days));
        const auto desc = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(kCreditDescriptions.size()) - 1));
        flows.push_back({day, credits[c], kCreditDescriptions[desc]});
      }
      for (std::size_t dd = 0; dd < debits.size(); ++dd) {
        if (debits[dd] == 0) continue;
        const auto day = static_cast<unsigned>(rng.uniform_int(1, days));
        const auto desc = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(kDebitDescriptions.size()) - 1));
        flows.push_back({day, -debits[dd], kDebitDescriptions[desc]});
      }
      // Validation must come back clean: nudge amounts until no duplicate
      // (day, description, amount) triple and no equal-and-opposite pair
      // within two days remains.
      bool dirty = true;
      while (dirty) {
        dirty = false;
        for (std::size_t i = 0; i < flows.size(); ++i) {
          for (std::size_t j = i + 1; j < flows.size(); ++j) {
            const long gap = std::labs(static_cast<long>(flows[i].day) -
                                       static_cast<long>(flows[j].day));
            const bool duplicate = flows[i].day == flows[j].day &&
                                   flows[i].description == flows[j].description &&
                                   flows[i].amount == flows[j].amount;
            const bool round_trip = gap <= 2 && flows[i].amount == -flows[j].amount;
            if (duplicate || round_trip) {
              flows[j].amount += flows[j].amount > 0 ? 1 : -1;
              dirty = true;
            }
          }
        }
      }

      std::stable_sort(flows.begin(), flows.end(),
                       [](const Flow& x, const Flow& y) { return x.day < y.day; });

      for (const auto& f : flows) {
        Transaction txn;
        txn.txn_date = Date{std::chrono::year{ym.year}, std::chrono::month{ym.month},
                            std::chrono::day{f.day}};
        txn.description = f.description;
        txn.amount_minor = f.amount;
        balance += f.amount;
        txn.balance_after_minor = balance;
        txn.category = CategoryRules::defaults().classify(f.description);
        s.transactions.push_back(std::move(txn));
      }
      months.push_back(std::move(s));
      ym = ym.next();
    }

    // 4. label from the latent log-odds
    double log_odds_true = intercept + config.noise_scale * z_noise;
    for (const auto& [name, weight] : config.signal_weights) log_odds_true += weight * t.of(name);
    const int label = rng.bernoulli(sigmoid(log_odds_true)) ? 1 : 0;

    portfolio.truths.push_back({applicant_id, log_odds_true, label});
    portfolio.records.push_back(
        assemble_applicant(std::move(months), std::move(form), label));
  }
  return portfolio;
}

// ---------------------------------------------------------------------------
// export / import

void export_dataset(const Portfolio& portfolio, const std::string& dir) {
  const fs::path root(dir);
  fs::create_directories(root / "statements");

  std::string forms = "applicant_id,years_in_business,location,sector_code,num_directors,"
                      "director_min_age,customer_classification,monthly_installment\n";
  std::string labels = "applicant_id,label\n";
  std::string truth = "applicant_id,true_log_odds,label\n";

  for (std::size_t i = 0; i < portfolio.records.size(); ++i) {
    const auto& rec = portfolio.records[i];
    const fs::path acc_dir = root / "statements" / rec.applicant_id;
    fs::create_directories(acc_dir);
    for (const auto& s : rec.months)
      write_file((acc_dir / (s.month.str() + ".csv")).string(), serialize_statement_csv(s));

    char line[256];
    std::snprintf(line, sizeof(line), "%s,%.1f,%s,%s,%d,%d,%s,%s\n", rec.applicant_id.c_str(),
                  rec.form.years_in_business, rec.form.location.c_str(),
                  rec.form.sector_code.c_str(), rec.form.num_directors, rec.form.director_min_age,
                  rec.form.customer_classification.c_str(),
                  format_money(rec.form.monthly_installment_minor).c_str());
    forms += line;
    if (rec.label) labels += rec.applicant_id + "," + std::to_string(*rec.label) + "\n";

    const auto& gt = portfolio.truths[i];
    std::snprintf(line, sizeof(line), "%s,%.17g,%d\n", gt.applicant_id.c_str(), gt.true_log_odds,
                  gt.label);
    truth += line;
  }
  write_file((root / "forms.csv").string(), forms);
  write_file((root / "labels.csv").string(), labels);
  write_file((root / "ground_truth.csv").string(), truth);
}

namespace {

std::vector<std::string> split_plain(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto at = line.find(sep, start);
    if (at == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, at - start));
    start = at + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

}  // namespace

std::vector<ApplicantRecord> import_dataset(const std::string& dir, const CategoryRules& rules) {
  const fs::path root(dir);

  std::map<std::string, ApplicationForm> forms;
  {
    std::ifstream in(root / "forms.csv");
    if (!in) raise(Errc::io_error, "missing forms.csv under " + dir);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split_plain(line, ',');
      if (f.size() != 8) raise(Errc::malformed_row, "forms.csv: " + line);
      ApplicationForm form;
      form.years_in_business = std::stod(f[1]);
      form.location = f[2];
      form.sector_code = f[3];
      form.num_directors = std::stoi(f[4]);
      form.director_min_age = std::stoi(f[5]);
      form.customer_classification = f[6];
      form.monthly_installment_minor = parse_money(f[7]);
      forms[f[0]] = std::move(form);
    }
  }

  std::map<std::string, int> labels;
  if (fs::exists(root / "labels.csv")) {
    std::ifstream in(root / "labels.csv");
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split_plain(line, ',');
      if (f.size() != 2) raise(Errc::malformed_row, "labels.csv: " + line);
      labels[f[0]] = std::stoi(f[1]);
    }
  }

  std::vector<ApplicantRecord> records;
  std::vector<fs::path> account_dirs;
  for (const auto& entry : fs::directory_iterator(root / "statements"))
    if (entry.is_directory()) account_dirs.push_back(entry.path());
  std::sort(account_dirs.begin(), account_dirs.end());

  for (const auto& acc_dir : account_dirs) {
    const std::string account_id = acc_dir.filename().string();
    const auto form_it = forms.find(account_id);
    if (form_it == forms.end())
      raise(Errc::not_found, "no form row for account " + account_id);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(acc_dir))
      if (entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<BankStatement> statements;
    for (const auto& file : files) {
      CsvContext context;
      context.account_id = account_id;
      context.month = parse_year_month(file.stem().string());
      statements.push_back(
          parse_statement(read_file(file.string()), StatementFormat::csv, context, rules));
    }
    statements = deduplicate(statements);

    std::optional<int> label;
    if (const auto it = labels.find(account_id); it != labels.end()) label = it->second;
    records.push_back(assemble_validated(std::move(statements), form_it->second, label));
  }
  return records;
}

}  // namespace cashflow
