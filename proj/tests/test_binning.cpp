#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "binning.hpp"
#include "errors.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace cashflow;

namespace {

FeatureVector row(double x, const std::string& feature = "f") {
  FeatureVector v;
  v.values[feature] = x;
  return v;
}

FeatureVector cat_row(const std::string& code, const std::string& feature = "f") {
  FeatureVector v;
  v.values[feature] = code;
  return v;
}

std::vector<double> iota(int from, int to) {
  std::vector<double> out;
  for (int i = from; i <= to; ++i) out.push_back(i);
  return out;
}

}  // namespace

TEST_CASE("quantile_bin: median cut of 1..10 is 5.5") {
  const auto bins = quantile_bin(iota(1, 10), 2);
  REQUIRE(bins.size() == 2);
  CHECK(std::isinf(bins[0].lower));
  CHECK(bins[0].upper == doctest::Approx(5.5).epsilon(1e-15));
  CHECK(bins[1].lower == doctest::Approx(5.5).epsilon(1e-15));
  CHECK(std::isinf(bins[1].upper));
}

TEST_CASE("quantile_bin: identical values collapse to the single full-line bin") {
  const auto bins = quantile_bin(std::vector<double>(50, 3.25), 4);
  REQUIRE(bins.size() == 1);
  CHECK(std::isinf(bins[0].lower));
  CHECK(std::isinf(bins[0].upper));
}

TEST_CASE("quantile_bin: quartile cuts of 1..100 match the interpolation oracle") {
  const auto values = iota(1, 100);
  const auto bins = quantile_bin(values, 4);
  REQUIRE(bins.size() == 4);
  CHECK(bins[0].upper == doctest::Approx(oracle::quantile_bruteforce(values, 0.25)).epsilon(1e-12));
  CHECK(bins[1].upper == doctest::Approx(oracle::quantile_bruteforce(values, 0.50)).epsilon(1e-12));
  CHECK(bins[2].upper == doctest::Approx(oracle::quantile_bruteforce(values, 0.75)).epsilon(1e-12));
  CHECK(bins[0].upper == doctest::Approx(25.75));
  CHECK(bins[1].upper == doctest::Approx(50.5));
  CHECK(bins[2].upper == doctest::Approx(75.25));
}

TEST_CASE("quantile_bin: every value falls in exactly one bin") {
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> values;
    for (int i = 0; i < 200; ++i) values.push_back(rng.normal());
    const auto bins = quantile_bin(values, 2 + rep % 8);
    for (double v : values) {
      int hits = 0;
      for (const auto& b : bins) hits += b.contains_number(v);
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("quantile_bin errors") {
  CHECK_THROWS_AS(quantile_bin({}, 3), Error);
  CHECK_THROWS_AS(quantile_bin({1.0, 2.0}, 1), Error);
}

// ---------------------------------------------------------------------------
// monotonic binning

namespace {

// Data whose initial 4 quantile bins have event rates [0.1, 0.3, 0.2, 0.5]:
// 40 points per bin at values {10,20,30,40}.
void rate_trace_data(std::vector<double>* values, std::vector<int>* labels) {
  const double centers[4] = {10, 20, 30, 40};
  const int bads[4] = {4, 12, 8, 20};  // of 40 each
  for (int b = 0; b < 4; ++b)
    for (int i = 0; i < 40; ++i) {
      values->push_back(centers[b] + 0.01 * i);
      labels->push_back(i < bads[b] ? 1 : 0);
    }
}

std::vector<double> bin_event_rates(const std::vector<BinDefinition>& bins,
                                    const std::vector<double>& values,
                                    const std::vector<int>& labels) {
  std::vector<double> bad(bins.size(), 0.0), total(bins.size(), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t b = 0; b < bins.size(); ++b)
      if (bins[b].contains_number(values[i])) {
        total[b] += 1.0;
        bad[b] += labels[i];
        break;
      }
  std::vector<double> rates;
  for (std::size_t b = 0; b < bins.size(); ++b) rates.push_back(bad[b] / total[b]);
  return rates;
}

}  // namespace

TEST_CASE("monotonic_bin merges the worst adjacent violation: [.1,.3,.2,.5] -> [.1,.25,.5]") {
  std::vector<double> values;
  std::vector<int> labels;
  rate_trace_data(&values, &labels);
  const auto bins = monotonic_bin(values, labels, 4, 1);
  const auto rates = bin_event_rates(bins, values, labels);
  REQUIRE(rates.size() == 3);
  CHECK(rates[0] == doctest::Approx(0.1));
  CHECK(rates[1] == doctest::Approx(0.25));
  CHECK(rates[2] == doctest::Approx(0.5));
}

TEST_CASE("monotonic_bin keeps already-monotone rates unchanged") {
  std::vector<double> values;
  std::vector<int> labels;
  const double centers[3] = {10, 20, 30};
  const int bads[3] = {4, 8, 16};  // rates .1, .2, .4 of 40
  for (int b = 0; b < 3; ++b)
    for (int i = 0; i < 40; ++i) {
      values.push_back(centers[b] + 0.01 * i);
      labels.push_back(i < bads[b] ? 1 : 0);
    }
  const auto bins = monotonic_bin(values, labels, 3, 4);
  CHECK(bins.size() == 3);
}

TEST_CASE("monotonic_bin follows a negative rank correlation") {
  // Events concentrate at SMALL values.
  std::vector<double> values;
  std::vector<int> labels;
  Rng rng(5);
  for (int i = 0; i < 400; ++i) {
    const double x = rng.uniform(0.0, 1.0);
    values.push_back(x);
    labels.push_back(rng.bernoulli(x < 0.3 ? 0.7 : 0.1) ? 1 : 0);
  }
  const auto bins = monotonic_bin(values, labels, 8, 5);
  const auto rates = bin_event_rates(bins, values, labels);
  for (std::size_t i = 1; i < rates.size(); ++i) CHECK(rates[i] <= rates[i - 1]);
}

TEST_CASE("monotonic_bin: single class raises SINGLE_CLASS") {
  CHECK_THROWS_AS(monotonic_bin({1, 2, 3}, {1, 1, 1}, 2, 1), Error);
}

TEST_CASE("monotonic_bin: random data yields monotone rates and min counts") {
  Rng rng(17);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> values;
    std::vector<int> labels;
    const int n = 300;
    for (int i = 0; i < n; ++i) {
      const double x = rng.normal();
      values.push_back(x);
      labels.push_back(rng.bernoulli(1.0 / (1.0 + std::exp(-x))) ? 1 : 0);
    }
    long pos = 0;
    for (int y : labels) pos += y;
    if (pos == 0 || pos == n) continue;

    const int min_count = 5;
    const auto bins = monotonic_bin(values, labels, 10, min_count);
    const auto rates = bin_event_rates(bins, values, labels);
    const bool increasing = rates.back() >= rates.front();
    for (std::size_t i = 1; i < rates.size(); ++i) {
      if (increasing) CHECK(rates[i] > rates[i - 1]);
      else CHECK(rates[i] < rates[i - 1]);
    }
    if (bins.size() > 1) {
      std::vector<long> good(bins.size(), 0), bad(bins.size(), 0);
      for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t b = 0; b < bins.size(); ++b)
          if (bins[b].contains_number(values[i])) {
            (labels[i] == 1 ? bad[b] : good[b])++;
            break;
          }
      for (std::size_t b = 0; b < bins.size(); ++b) {
        CHECK(good[b] >= min_count);
        CHECK(bad[b] >= min_count);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// rare-category grouping

TEST_CASE("group_rare pools categories short of the per-class minimum") {
  std::vector<std::string> cats;
  std::vector<int> labels;
  auto add = [&](const std::string& c, int good, int bad) {
    for (int i = 0; i < good; ++i) {
      cats.push_back(c);
      labels.push_back(0);
    }
    for (int i = 0; i < bad; ++i) {
      cats.push_back(c);
      labels.push_back(1);
    }
  };
  add("A", 80, 20);  // qualifies at min 5
  add("B", 2, 1);
  add("C", 1, 1);
  const auto groups = group_rare(cats, labels, 5);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].members == std::vector<std::string>{"A"});
  CHECK_FALSE(groups[0].catch_all);
  CHECK(groups[1].members == std::vector<std::string>{"B", "C"});
  CHECK(groups[1].catch_all);
}

TEST_CASE("group_rare keeps abundant categories as singletons") {
  std::vector<std::string> cats;
  std::vector<int> labels;
  for (const char* c : {"X", "Y", "Z"})
    for (int i = 0; i < 20; ++i) {
      cats.push_back(c);
      labels.push_back(i < 8 ? 1 : 0);
    }
  const auto groups = group_rare(cats, labels, 5);
  CHECK(groups.size() == 3);
  for (const auto& g : groups) CHECK(g.members.size() == 1);
}

TEST_CASE("group_rare: everything rare pools into one OTHER group") {
  std::vector<std::string> cats = {"A", "A", "B", "C", "C", "D"};
  std::vector<int> labels = {0, 1, 0, 1, 0, 1};
  const auto groups = group_rare(cats, labels, 5);
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].catch_all);
  CHECK(groups[0].members == std::vector<std::string>{"A", "B", "C", "D"});
}

TEST_CASE("group_rare: an undersized OTHER folds into the smallest qualifying group") {
  std::vector<std::string> cats;
  std::vector<int> labels;
  auto add = [&](const std::string& c, int good, int bad) {
    for (int i = 0; i < good; ++i) {
      cats.push_back(c);
      labels.push_back(0);
    }
    for (int i = 0; i < bad; ++i) {
      cats.push_back(c);
      labels.push_back(1);
    }
  };
  add("BIG", 60, 30);
  add("MID", 10, 6);
  add("TINY", 1, 0);  // OTHER = {TINY}: 1 good, 0 bad -> still short
  const auto groups = group_rare(cats, labels, 5);
  REQUIRE(groups.size() == 2);
  CHECK(groups[1].members == std::vector<std::string>{"MID", "TINY"});
  CHECK(groups[1].catch_all);
}

// ---------------------------------------------------------------------------
// WOE table

TEST_CASE("WOE of a 60/100 vs 2/10 bin is ln 3") {
  // One feature, two bins; bin 1 holds 60 goods of 100 and 2 bads of 10.
  std::vector<FeatureVector> data;
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) { data.push_back(row(1.0)); labels.push_back(0); }
  for (int i = 0; i < 2; ++i) { data.push_back(row(1.0)); labels.push_back(1); }
  for (int i = 0; i < 40; ++i) { data.push_back(row(10.0)); labels.push_back(0); }
  for (int i = 0; i < 8; ++i) { data.push_back(row(10.0)); labels.push_back(1); }

  const auto bins = quantile_bin({1.0, 10.0}, 2, "f");
  const auto table = compute_woe_table({{"f", bins}}, data, labels, 1e-9,
                                       SplitId::train("unit"));
  CHECK(table.feature("f").bins[0].woe == doctest::Approx(std::log(3.0)).epsilon(1e-6));
}

TEST_CASE("equal class distributions give WOE 0 and zero IV contribution") {
  std::vector<FeatureVector> data;
  std::vector<int> labels;
  for (int i = 0; i < 50; ++i) { data.push_back(row(1.0)); labels.push_back(i % 2); }
  for (int i = 0; i < 50; ++i) { data.push_back(row(10.0)); labels.push_back(i % 2); }
  const auto table = compute_woe_table({{"f", quantile_bin({1.0, 10.0}, 2, "f")}}, data, labels,
                                       1e-9, SplitId::train("unit"));
  CHECK(table.feature("f").bins[0].woe == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(table.feature("f").iv == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("two-bin feature with Dist_g (0.6,0.4) vs Dist_b (0.2,0.8): IV ~ 0.7167, suspicious") {
  std::vector<FeatureVector> data;
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) { data.push_back(row(1.0)); labels.push_back(0); }
  for (int i = 0; i < 2; ++i) { data.push_back(row(1.0)); labels.push_back(1); }
  for (int i = 0; i < 40; ++i) { data.push_back(row(10.0)); labels.push_back(0); }
  for (int i = 0; i < 8; ++i) { data.push_back(row(10.0)); labels.push_back(1); }
  const auto table = compute_woe_table({{"f", quantile_bin({1.0, 10.0}, 2, "f")}}, data, labels,
                                       1e-9, SplitId::train("unit"));
  const double expected = 0.4 * std::log(3.0) + (-0.4) * std::log(0.5);
  CHECK(table.feature("f").iv == doctest::Approx(expected).epsilon(1e-6));
  CHECK(table.feature("f").iv_class == IvClass::suspicious);
}

TEST_CASE("iv classes follow the thresholds") {
  CHECK(classify_iv(0.019) == IvClass::not_predictive);
  CHECK(classify_iv(0.02) == IvClass::weak);
  CHECK(classify_iv(0.099) == IvClass::weak);
  CHECK(classify_iv(0.1) == IvClass::medium);
  CHECK(classify_iv(0.299) == IvClass::medium);
  CHECK(classify_iv(0.3) == IvClass::strong);
  CHECK(classify_iv(0.499) == IvClass::strong);
  CHECK(classify_iv(0.5) == IvClass::suspicious);
}

TEST_CASE("a perfectly separating feature hits the clamp and reads suspicious") {
  std::vector<FeatureVector> data;
  std::vector<int> labels;
  for (int i = 0; i < 50; ++i) { data.push_back(row(0.0)); labels.push_back(0); }
  for (int i = 0; i < 50; ++i) { data.push_back(row(1.0)); labels.push_back(1); }
  const auto table = compute_woe_table({{"f", quantile_bin({0.0, 1.0}, 2, "f")}}, data, labels,
                                       kDefaultEpsilon, SplitId::train("unit"));
  CHECK(table.feature("f").bins[0].woe == doctest::Approx(5.0));
  CHECK(table.feature("f").bins[1].woe == doctest::Approx(-5.0));
  CHECK(table.feature("f").iv_class == IvClass::suspicious);
}

TEST_CASE("distributions sum to one across bins") {
  Rng rng(23);
  std::vector<FeatureVector> data;
  std::vector<int> labels;
  std::vector<double> values;
  for (int i = 0; i < 500; ++i) {
    const double x = rng.normal();
    values.push_back(x);
    data.push_back(row(x));
    labels.push_back(rng.bernoulli(0.3) ? 1 : 0);
  }
  const auto table = compute_woe_table({{"f", quantile_bin(values, 6, "f")}}, data, labels,
                                       kDefaultEpsilon, SplitId::train("unit"));
  double sg = 0.0, sb = 0.0;
  for (const auto& b : table.feature("f").bins) {
    sg += b.dist_good;
    sb += b.dist_bad;
  }
  CHECK(sg == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sb == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oracle equivalence on random small datasets") {
  Rng rng(29);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 20 + static_cast<int>(rng.uniform_int(0, 180));
    const int k = 2 + static_cast<int>(rng.uniform_int(0, 4));
    std::vector<double> values;
    std::vector<FeatureVector> data;
    std::vector<int> labels;
    long pos = 0;
    for (int i = 0; i < n; ++i) {
      const double x = rng.uniform(0.0, 1.0);
      values.push_back(x);
      data.push_back(row(x));
      const int y = rng.bernoulli(0.3) ? 1 : 0;
      pos += y;
      labels.push_back(y);
    }
    if (pos == 0 || pos == n) continue;

    const auto bins = quantile_bin(values, k, "f");
    const double epsilon = 1e-6;
    const auto table = compute_woe_table({{"f", bins}}, data, labels, epsilon,
                                         SplitId::train("unit"));

    const auto bin_of = [&](std::size_t i) -> std::size_t {
      for (std::size_t b = 0; b < bins.size(); ++b)
        if (bins[b].contains_number(values[i])) return b;
      return bins.size();
    };
    const auto expected = oracle::woe_iv_bruteforce(static_cast<std::size_t>(n), bins.size(),
                                                    labels, bin_of, epsilon, 5.0);
    const auto& fw = table.feature("f");
    for (std::size_t b = 0; b < bins.size(); ++b) {
      CHECK(fw.bins[b].n_good == expected.bins[b].n_good);
      CHECK(fw.bins[b].n_bad == expected.bins[b].n_bad);
      CHECK(fw.bins[b].woe == doctest::Approx(expected.bins[b].woe).epsilon(1e-12));
    }
    CHECK(fw.iv == doctest::Approx(expected.iv).epsilon(1e-12));
  }
}

TEST_CASE("label permutation drives IV below 0.1 nearly always") {
  Rng rng(31);
  const int n = 2000;
  std::vector<double> values;
  std::vector<FeatureVector> data;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    values.push_back(x);
    data.push_back(row(x));
  }
  const auto bins = quantile_bin(values, 5, "f");

  int below = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> labels(n, 0);
    for (int i = 0; i < n / 5; ++i) labels[static_cast<std::size_t>(i)] = 1;
    rng.shuffle(labels);
    const auto table =
        compute_woe_table({{"f", bins}}, data, labels, kDefaultEpsilon, SplitId::train("unit"));
    if (table.feature("f").iv < 0.1) ++below;
  }
  CHECK(below >= 95);
}

TEST_CASE("label flip negates WOE and preserves IV") {
  Rng rng(37);
  const int n = 400;
  std::vector<double> values;
  std::vector<FeatureVector> data;
  std::vector<int> labels, flipped;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    values.push_back(x);
    data.push_back(row(x));
    const int y = rng.bernoulli(1.0 / (1.0 + std::exp(-x))) ? 1 : 0;
    labels.push_back(y);
    flipped.push_back(1 - y);
  }
  const auto bins = quantile_bin(values, 5, "f");
  const auto a = compute_woe_table({{"f", bins}}, data, labels, kDefaultEpsilon,
                                   SplitId::train("unit"));
  const auto b = compute_woe_table({{"f", bins}}, data, flipped, kDefaultEpsilon,
                                   SplitId::train("unit"));
  for (std::size_t k = 0; k < a.feature("f").bins.size(); ++k)
    CHECK(a.feature("f").bins[k].woe ==
          doctest::Approx(-b.feature("f").bins[k].woe).epsilon(1e-9));
  CHECK(a.feature("f").iv == doctest::Approx(b.feature("f").iv).epsilon(1e-9));
}

TEST_CASE("monotonic_bin output yields a monotone WOE sequence in the table") {
  Rng rng(41);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 500;
    std::vector<double> values;
    std::vector<FeatureVector> data;
    std::vector<int> labels;
    for (int i = 0; i < n; ++i) {
      const double x = rng.normal();
      values.push_back(x);
      data.push_back(row(x));
      labels.push_back(rng.bernoulli(1.0 / (1.0 + std::exp(-1.5 * x))) ? 1 : 0);
    }
    const auto bins = monotonic_bin(values, labels, 10, 5, "f");
    const auto table = compute_woe_table({{"f", bins}}, data, labels, kDefaultEpsilon,
                                         SplitId::train("unit"));
    const auto& fw = table.feature("f");
    // Interval bins only (missing bin sits last with zero counts).
    std::vector<double> woes;
    for (const auto& s : fw.bins)
      if (s.bin.kind == BinKind::interval) woes.push_back(s.woe);
    const bool decreasing = woes.back() <= woes.front();
    for (std::size_t i = 1; i < woes.size(); ++i) {
      if (decreasing) CHECK(woes[i] <= woes[i - 1]);
      else CHECK(woes[i] >= woes[i - 1]);
    }
  }
}

TEST_CASE("leakage guard: non-training splits are a hard error") {
  std::vector<FeatureVector> data = {row(1.0), row(2.0)};
  std::vector<int> labels = {0, 1};
  const auto bins = quantile_bin({1.0, 2.0}, 2, "f");
  for (const auto role : {SplitId::Role::validation, SplitId::Role::full, SplitId::Role::test}) {
    SplitId split;
    split.role = role;
    split.label = "x";
    try {
      compute_woe_table({{"f", bins}}, data, labels, kDefaultEpsilon, split);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::leakage_guard);
    }
  }
}

TEST_CASE("single class or bad epsilon raise") {
  std::vector<FeatureVector> data = {row(1.0), row(2.0)};
  const auto bins = quantile_bin({1.0, 2.0}, 2, "f");
  CHECK_THROWS_AS(compute_woe_table({{"f", bins}}, data, {1, 1}, 1e-6, SplitId::train("u")),
                  Error);
  CHECK_THROWS_AS(compute_woe_table({{"f", bins}}, data, {0, 1}, 0.0, SplitId::train("u")),
                  Error);
}

// ---------------------------------------------------------------------------
// transform

TEST_CASE("transform_woe looks up interval, OTHER-group and missing bins") {
  std::vector<FeatureVector> data;
  std::vector<int> labels;
  for (int i = 0; i < 30; ++i) {
    data.push_back(cat_row(i % 2 ? "A" : "B", "c"));
    data.back().values["x"] = static_cast<double>(i);
    labels.push_back(i % 3 == 0 ? 1 : 0);
  }
  // A couple of rare codes pool into OTHER.
  for (int i = 0; i < 3; ++i) {
    data.push_back(cat_row("RARE", "c"));
    data.back().values["x"] = 100.0;
    labels.push_back(i % 2);
  }

  std::vector<std::string> codes;
  std::vector<double> xs;
  for (const auto& v : data) {
    codes.push_back(as_category(v.values.at("c")));
    xs.push_back(as_number(v.values.at("x")));
  }
  const auto table = compute_woe_table({{"c", group_rare(codes, labels, 5, "c")},
                                        {"x", quantile_bin(xs, 3, "x")}},
                                       data, labels, kDefaultEpsilon, SplitId::train("unit"));

  // Known category.
  FeatureVector probe = cat_row("A", "c");
  probe.values["x"] = 5.0;
  const auto woes = transform_woe(probe, table);
  REQUIRE(woes.size() == 2);
  CHECK(woes[0] == table.woe_of("c", FeatureValue{std::string("A")}));

  // Unseen category routes to the catch-all group.
  FeatureVector unseen = cat_row("NEVER_SEEN", "c");
  unseen.values["x"] = 5.0;
  CHECK(transform_woe(unseen, table)[0] ==
        table.woe_of("c", FeatureValue{std::string("RARE")}));

  // Missing value maps to the missing bin (zero counts -> WOE 0).
  FeatureVector missing;
  missing.values["x"] = 5.0;
  CHECK(transform_woe(missing, table)[0] == doctest::Approx(0.0));
}

TEST_CASE("transform_woe: numeric outside every bin is impossible by construction") {
  // The outermost bins are infinite, so any finite value binds; NaN goes to
  // the missing bin.
  std::vector<FeatureVector> data = {row(1.0), row(2.0), row(3.0), row(4.0)};
  std::vector<int> labels = {0, 1, 0, 1};
  const auto table = compute_woe_table({{"f", quantile_bin({1, 2, 3, 4}, 2, "f")}}, data, labels,
                                       kDefaultEpsilon, SplitId::train("unit"));
  CHECK_NOTHROW(transform_woe(row(1e18), table));
  CHECK_NOTHROW(transform_woe(row(std::nan("")), table));
}

TEST_CASE("WOE table JSON round-trips") {
  std::vector<FeatureVector> data;
  std::vector<int> labels;
  std::vector<double> xs;
  Rng rng(43);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.normal();
    xs.push_back(x);
    data.push_back(row(x));
    labels.push_back(rng.bernoulli(0.4) ? 1 : 0);
  }
  const auto table = compute_woe_table({{"f", quantile_bin(xs, 4, "f")}}, data, labels,
                                       kDefaultEpsilon, SplitId::train("roundtrip"));
  const auto restored = WoeTable::from_json(table.to_json());
  CHECK(restored.to_json() == table.to_json());
  CHECK(restored.feature_order() == table.feature_order());
  CHECK(restored.trained_on() == table.trained_on());
}
