#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <limits>

#include "oracles/exhaustive.h"
#include "toriclab/matching.h"
#include "toriclab/rng.h"
#include "toriclab/splitting.h"

using namespace toriclab;

namespace {

const std::vector<std::uint64_t>& rotated4() {
  static const auto table = oracle::failing_by_weight(CodeGeometry(Orientation::rotated, 4));
  return table;
}

std::vector<std::pair<int, double>> as_pairs(const std::vector<double>& dist) {
  std::vector<std::pair<int, double>> out;
  for (int w = 0; w < static_cast<int>(dist.size()); ++w) {
    if (dist[w] > 0.0) out.emplace_back(w, dist[w]);
  }
  return out;
}

}  // namespace

TEST(Bennett, DetailedBalanceOfG) {
  Rng rng = make_stream(11, 0);
  for (int i = 0; i < 1'000'000; ++i) {
    const double x = std::exp(40.0 * (uniform01(rng) - 0.5));
    EXPECT_NEAR(bennett_g(x), bennett_g(1.0 / x) / x, 4 * std::numeric_limits<double>::epsilon() * bennett_g(x)) << x;
  }
}

TEST(Bennett, TwoAtomRatio) {
  const int n = 16;
  const double pl = 0.03, ph = 0.07;
  auto z = [&](double p) { return 3 * std::pow(p, 2) * std::pow(1 - p, n - 2) + 40 * std::pow(p, 5) * std::pow(1 - p, n - 5); };
  auto dist = [&](double p) {
    return std::vector<std::pair<int, double>>{{2, 3 * std::pow(p, 2) * std::pow(1 - p, n - 2) / z(p)},
                                               {5, 40 * std::pow(p, 5) * std::pow(1 - p, n - 5) / z(p)}};
  };
  const auto r = bennett_crossing(n, pl, ph, dist(pl), dist(ph));
  ASSERT_TRUE(r.ok);
  EXPECT_NEAR(r.ratio / (z(pl) / z(ph)), 1.0, 1e-9);
  EXPECT_EQ(r.scan_c.size(), 100u);
}

TEST(Bennett, EqualRatesGiveOne) {
  const std::vector<std::pair<int, double>> d{{2, 0.7}, {3, 0.3}};
  const auto r = bennett_crossing(16, 0.05, 0.05, d, d);
  ASSERT_TRUE(r.ok);
  EXPECT_NEAR(r.c_star, 1.0, 1e-9);
}

TEST(Bennett, ExactDistributionsMatchOracleRatio) {
  const auto& f = rotated4();
  for (auto [pl, ph] : {std::pair{0.001, 0.002}, {0.02, 0.05}, {0.05, 0.1}}) {
    const auto r = bennett_crossing(16, pl, ph, as_pairs(oracle::failing_weight_distribution(f, pl)),
                                    as_pairs(oracle::failing_weight_distribution(f, ph)));
    ASSERT_TRUE(r.ok);
    EXPECT_NEAR(r.ratio / (oracle::exact_failure(f, pl) / oracle::exact_failure(f, ph)), 1.0, 1e-9);
  }
}

TEST(Chain, RejectsCorrectableStart) {
  const CodeGeometry g(Orientation::rotated, 4);
  EXPECT_THROW(metropolis_chain(g, 0.05, ErrorConfig(g.num_qubits()), 1), std::invalid_argument);
}

TEST(Chain, MinimalFailingConfig) {
  for (auto o : {Orientation::square, Orientation::rotated}) {
    for (int d : {4, 6, 8}) {
      const CodeGeometry g(o, d);
      const auto e = minimal_failing_config(g);
      EXPECT_EQ(e.weight(), d / 2);
      EXPECT_TRUE(decode(g, e).failed());
    }
  }
}

TEST(Chain, BookkeepingAndFailingSamples) {
  const CodeGeometry g(Orientation::square, 6);
  ChainOptions opt;
  opt.steps = 50'000;
  opt.thinning = 10;
  opt.verify_samples = true;
  const auto c = metropolis_chain(g, 0.08, minimal_failing_config(g), 3, opt);
  EXPECT_EQ(c.proposed, opt.steps);
  EXPECT_LE(c.accepted_failing, c.accepted_flip);
  EXPECT_LE(c.accepted_flip, c.proposed);
  EXPECT_GT(c.accepted_failing, 0u);
  EXPECT_EQ(c.weights.size(), (opt.steps - opt.steps / 20 + 9) / 10);
  EXPECT_TRUE(decode(g, c.final_state).failed());
  const auto again = metropolis_chain(g, 0.08, minimal_failing_config(g), 3, opt);
  EXPECT_EQ(again.weights, c.weights);
}

TEST(Chain, StaysMinimalAsPVanishes) {
  const CodeGeometry g(Orientation::rotated, 8);
  ChainOptions opt;
  opt.steps = 100'000;
  const auto c = metropolis_chain(g, 1e-7, minimal_failing_config(g), 5, opt);
  for (int w : c.weights) EXPECT_LE(w, 5);
}

TEST(Chain, StationaryWeightDistribution) {
  const CodeGeometry g(Orientation::rotated, 4);
  const double p = 0.05;
  ChainOptions opt;
  opt.steps = 4'000'000;
  opt.thinning = 64;
  const auto c = metropolis_chain(g, p, minimal_failing_config(g), 21, opt);
  const auto expected = oracle::failing_weight_distribution(rotated4(), p);
  std::vector<double> observed(expected.size(), 0.0);
  for (int w : c.weights) observed[w] += 1;
  const double total = static_cast<double>(c.weights.size());
  double chi2 = 0.0, tail_o = 0.0, tail_e = 0.0;
  int bins = 0;
  for (std::size_t w = 0; w < expected.size(); ++w) {
    const double e = expected[w] * total;
    if (e >= 20) {
      chi2 += (observed[w] - e) * (observed[w] - e) / e;
      ++bins;
    } else {
      tail_o += observed[w];
      tail_e += e;
    }
  }
  if (tail_e > 0) {
    chi2 += (tail_o - tail_e) * (tail_o - tail_e) / tail_e;
    ++bins;
  }
  const boost::math::chi_squared dist(bins - 1);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.01) << "chi2=" << chi2 << " bins=" << bins;
}

TEST(Schedule, GeometricSpacing) {
  const auto r = geometric_schedule(0.1, 0.01, 2.0);
  ASSERT_EQ(r.size(), 5u);
  EXPECT_DOUBLE_EQ(r.front(), 0.1);
  EXPECT_DOUBLE_EQ(r.back(), 0.01);
  for (std::size_t i = 1; i < r.size(); ++i) {
    EXPECT_LT(r[i], r[i - 1]);
    EXPECT_LE(r[i - 1] / r[i], 2.0 + 1e-12);
  }
  EXPECT_THROW(geometric_schedule(0.01, 0.1), std::invalid_argument);
}

TEST(Split, SingleRateReturnsAnchor) {
  const CodeGeometry g(Orientation::rotated, 4);
  const auto res = split_failure_rate(g, {{0.1}, 0.02, 0.001}, {}, 1);
  EXPECT_TRUE(res.complete);
  EXPECT_EQ(res.failure, std::vector<double>{0.02});
  EXPECT_EQ(res.sigma, std::vector<double>{0.001});
  EXPECT_THROW(split_failure_rate(g, {{0.1}, 0.02, 0.01}, {}, 1), std::invalid_argument);
  EXPECT_THROW(split_failure_rate(g, {{0.1, 0.2}, 0.02, 0.001}, {}, 1), std::invalid_argument);
}

TEST(Split, RatiosMatchExhaustiveOracle) {
  const CodeGeometry g(Orientation::rotated, 4);
  const auto& f = rotated4();
  SplitSchedule s;
  s.rates = geometric_schedule(0.1, 0.005, 2.0);
  s.anchor = oracle::exact_failure(f, 0.1);
  s.anchor_sigma = 1e-3 * s.anchor;
  ChainOptions opt;
  opt.steps = 1'000'000;
  const auto res = split_failure_rate(g, s, opt, 99);
  ASSERT_TRUE(res.complete);
  ASSERT_EQ(res.ratios.size(), s.rates.size() - 1);
  for (std::size_t j = 0; j < res.ratios.size(); ++j) {
    const auto& r = res.ratios[j];
    const double exact = oracle::exact_failure(f, r.p_low) / oracle::exact_failure(f, r.p_high);
    EXPECT_GT(r.ratio, 0.0);
    EXPECT_LE(r.ratio, 1.0);
    EXPECT_GT(r.sigma, 0.0);
    EXPECT_NEAR(r.ratio, exact, 3 * r.sigma) << "p_low=" << r.p_low;
  }
  const double exact_low = oracle::exact_failure(f, 0.005);
  EXPECT_NEAR(res.failure.back(), exact_low, 3 * res.sigma.back());
  for (std::size_t j = 1; j < res.failure.size(); ++j) EXPECT_LT(res.failure[j], res.failure[j - 1]);
}
