#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>

#include "errors.hpp"
#include "features.hpp"
#include "jsonl.hpp"
#include "rng.hpp"
#include "scorecard.hpp"
#include "synth.hpp"

using namespace cashflow;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("cashflow_synth_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

GeneratorConfig small_config(std::uint64_t seed = 42, int n = 40) {
  GeneratorConfig c = GeneratorConfig::with_default_signal();
  c.seed = seed;
  c.n_applicants = n;
  return c;
}

}  // namespace

TEST_CASE("same seed reproduces the portfolio byte for byte") {
  const auto a = generate_portfolio(small_config());
  const auto b = generate_portfolio(small_config());
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].months == b.records[i].months);
    CHECK(a.truths[i].true_log_odds == b.truths[i].true_log_odds);
    CHECK(a.truths[i].label == b.truths[i].label);
  }
  const auto c = generate_portfolio(small_config(43));
  CHECK(a.records[0].months != c.records[0].months);
}

TEST_CASE("default config event count lands inside the binomial band 93 +- 18") {
  const auto portfolio = generate_portfolio(GeneratorConfig::with_default_signal());
  REQUIRE(portfolio.records.size() == 611);
  long events = 0;
  for (const auto& t : portfolio.truths) events += t.label;
  CHECK(events >= 93 - 18);
  CHECK(events <= 93 + 18);
}

TEST_CASE("realized event rate tracks the target within 0.03 at n >= 500") {
  for (const std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    GeneratorConfig config = GeneratorConfig::with_default_signal();
    config.seed = seed;
    config.n_applicants = 1000;
    const auto portfolio = generate_portfolio(config);
    double events = 0;
    for (const auto& t : portfolio.truths) events += t.label;
    CHECK(std::abs(events / 1000.0 - config.event_rate_target) <= 0.03);
  }
}

TEST_CASE("labels are Bernoulli draws of the latent log-odds") {
  // With everything else pinned, the mean label of high-log-odds applicants
  // must exceed that of low-log-odds ones.
  GeneratorConfig config = GeneratorConfig::with_default_signal();
  config.n_applicants = 2000;
  const auto portfolio = generate_portfolio(config);
  double high = 0, high_n = 0, low = 0, low_n = 0;
  for (const auto& t : portfolio.truths) {
    if (sigmoid(t.true_log_odds) > 0.3) {
      high += t.label;
      high_n += 1;
    } else if (sigmoid(t.true_log_odds) < 0.08) {
      low += t.label;
      low_n += 1;
    }
  }
  REQUIRE(high_n > 20);
  REQUIRE(low_n > 20);
  CHECK(high / high_n > low / low_n);
}

TEST_CASE("every generated statement satisfies balance continuity and validates clean") {
  const auto portfolio = generate_portfolio(small_config(7, 60));
  for (const auto& rec : portfolio.records) {
    REQUIRE(rec.months.size() == 6);
    for (std::size_t m = 0; m < rec.months.size(); ++m) {
      const auto& s = rec.months[m];
      MinorUnits running = s.opening_balance_minor;
      for (const auto& t : s.transactions) {
        running += t.amount_minor;
        CHECK(t.balance_after_minor == running);
        CHECK(t.amount_minor != 0);
      }
      if (m > 0) CHECK(s.opening_balance_minor == rec.months[m - 1].closing_balance());
      const auto report = validate_statement(s);
      CHECK(report.flags.empty());
    }
    for (std::size_t m = 1; m < rec.months.size(); ++m)
      CHECK(rec.months[m].month == rec.months[m - 1].month.next());
  }
}

TEST_CASE("export then import reproduces features exactly (skew check)") {
  TempDir tmp;
  const auto portfolio = generate_portfolio(small_config(11, 30));
  export_dataset(portfolio, tmp.path.string());

  const auto imported = import_dataset(tmp.path.string());
  REQUIRE(imported.size() == portfolio.records.size());
  for (std::size_t i = 0; i < imported.size(); ++i) {
    CHECK(imported[i].applicant_id == portfolio.records[i].applicant_id);
    CHECK(imported[i].label == portfolio.records[i].label);
    const auto direct = compute_features(portfolio.records[i], "t0");
    const auto roundtrip = compute_features(imported[i], "t0");
    CHECK(direct.to_json() == roundtrip.to_json());
  }
}

TEST_CASE("exported statements round-trip losslessly through parse_statement") {
  TempDir tmp;
  const auto portfolio = generate_portfolio(small_config(13, 10));
  export_dataset(portfolio, tmp.path.string());
  for (const auto& rec : portfolio.records) {
    for (const auto& s : rec.months) {
      const auto path =
          tmp.path / "statements" / rec.applicant_id / (s.month.str() + ".csv");
      CsvContext context{rec.applicant_id, s.month, s.opening_balance_minor};
      const auto parsed =
          parse_statement(read_file(path.string()), StatementFormat::csv, context);
      CHECK(parsed == s);
    }
  }
}

TEST_CASE("labels.csv holds one row per applicant") {
  TempDir tmp;
  const auto portfolio = generate_portfolio(small_config(17, 25));
  export_dataset(portfolio, tmp.path.string());
  const auto labels = read_file((tmp.path / "labels.csv").string());
  std::size_t rows = 0;
  for (char c : labels) rows += c == '\n';
  CHECK(rows == 26);  // header + 25
  const auto truth = read_file((tmp.path / "ground_truth.csv").string());
  rows = 0;
  for (char c : truth) rows += c == '\n';
  CHECK(rows == 26);
}

TEST_CASE("invalid generator configs are rejected") {
  GeneratorConfig config = GeneratorConfig::with_default_signal();
  config.n_applicants = 0;
  CHECK_THROWS_AS(generate_portfolio(config), Error);
  config = GeneratorConfig::with_default_signal();
  config.event_rate_target = 1.5;
  CHECK_THROWS_AS(generate_portfolio(config), Error);
  config = GeneratorConfig::with_default_signal();
  config.months = 5;
  CHECK_THROWS_AS(generate_portfolio(config), Error);
  config = GeneratorConfig::with_default_signal();
  config.signal_weights["no_such_feature"] = 1.0;
  try {
    generate_portfolio(config);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_config);
  }
}

TEST_CASE("intercept calibration hits the target rate under the latent normal") {
  for (const double target : {0.05, 0.152, 0.3}) {
    for (const double sd : {0.5, 1.0, 1.5}) {
      const double w0 = calibrate_intercept(target, sd);
      // Monte Carlo check of E[sigmoid(w0 + sd u)].
      Rng rng(99);
      double acc = 0.0;
      const int n = 200000;
      for (int i = 0; i < n; ++i) acc += sigmoid(w0 + sd * rng.normal());
      CHECK(std::abs(acc / n - target) < 0.005);
    }
  }
}

TEST_CASE("stronger signal weights raise label separability (majority over seeds)") {
  // Bayes-optimal AUROC estimate: score by the latent log-odds themselves.
  auto auc_of = [](double weight_scale, std::uint64_t seed) {
    GeneratorConfig config = GeneratorConfig::with_default_signal();
    for (auto& [_, w] : config.signal_weights) w *= weight_scale;
    config.n_applicants = 1200;
    config.seed = seed;
    const auto portfolio = generate_portfolio(config);
    double wins = 0, pairs = 0;
    for (std::size_t i = 0; i < portfolio.truths.size(); ++i)
      for (std::size_t j = 0; j < portfolio.truths.size(); ++j) {
        if (portfolio.truths[i].label != 1 || portfolio.truths[j].label != 0) continue;
        pairs += 1;
        if (portfolio.truths[i].true_log_odds > portfolio.truths[j].true_log_odds) wins += 1;
        else if (portfolio.truths[i].true_log_odds == portfolio.truths[j].true_log_odds)
          wins += 0.5;
      }
    return wins / pairs;
  };
  // Three-point weight grid, five seeds, majority rule.
  int monotone = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const double weak = auc_of(0.25, seed);
    const double medium = auc_of(1.0, seed);
    const double strong = auc_of(2.0, seed);
    if (weak < medium && medium < strong) ++monotone;
  }
  CHECK(monotone >= 3);
}
