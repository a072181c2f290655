#include <gtest/gtest.h>

#include <cmath>

#include "oracles/exhaustive.h"
#include "toriclab/matching.h"
#include "toriclab/montecarlo.h"
#include "toriclab/noise.h"

using namespace toriclab;

namespace {

const std::vector<std::uint64_t>& rotated4() {
  static const auto table = oracle::failing_by_weight(CodeGeometry(Orientation::rotated, 4));
  return table;
}

FailureEstimate synthetic(Orientation o, int d, double p, double rate) {
  FailureEstimate e;
  e.orientation = o;
  e.d = d;
  e.n = CodeGeometry(o, d).num_qubits();
  e.p = p;
  e.trials = 1'000'000'000'000ull;
  e.failures = static_cast<std::uint64_t>(std::llround(rate * static_cast<double>(e.trials)));
  return e;
}

}  // namespace

TEST(ExactOracle, LowWeightCounts) {
  const auto& f = rotated4();
  EXPECT_EQ(f[0], 0u);
  EXPECT_EQ(f[1], 0u);
  EXPECT_EQ(f[2], 56u);
}

TEST(MonteCarlo, AgreesWithExhaustiveSum) {
  const CodeGeometry g(Orientation::rotated, 4);
  for (double p : {0.02, 0.05, 0.10}) {
    const auto est = estimate_failure_rate(g, p, 100'000, 17);
    const double exact = oracle::exact_failure(rotated4(), p);
    const double sigma = std::sqrt(exact * (1 - exact) / est.trials);
    EXPECT_NEAR(est.rate(), exact, 3 * sigma) << "p=" << p;
    EXPECT_EQ(est.failures, est.classes[1] + est.classes[2] + est.classes[3]);
    EXPECT_EQ(est.trials, 100'000u);
  }
}

TEST(MonteCarlo, UnbiasedAcrossSeeds) {
  const CodeGeometry g(Orientation::rotated, 4);
  const double p = 0.08;
  const double exact = oracle::exact_failure(rotated4(), p);
  double sum = 0.0;
  const int seeds = 100;
  const std::uint64_t trials = 2000;
  for (int s = 0; s < seeds; ++s) sum += estimate_failure_rate(g, p, trials, 1000 + s).rate();
  const double mean = sum / seeds;
  const double sigma = std::sqrt(exact * (1 - exact) / (seeds * trials));
  EXPECT_NEAR(mean, exact, 3 * sigma);
}

TEST(MonteCarlo, IndependentOfWorkersAndResumable) {
  const CodeGeometry g(Orientation::square, 6);
  McOptions one;
  one.chunk_size = 500;
  McOptions three = one;
  three.workers = 3;
  const auto a = estimate_failure_rate(g, 0.09, 7300, 5, one);
  const auto b = estimate_failure_rate(g, 0.09, 7300, 5, three);
  EXPECT_EQ(a.classes, b.classes);
  const std::uint64_t chunks = chunk_count(7300, 500);
  ASSERT_EQ(chunks, 15u);
  auto first = run_chunks(g, 0.09, 7300, 5, 0, 6, one);
  first.merge(run_chunks(g, 0.09, 7300, 5, 6, chunks - 6, three));
  EXPECT_EQ(first.classes, a.classes);
  EXPECT_EQ(first.trials, 7300u);
  EXPECT_NE(estimate_failure_rate(g, 0.09, 7300, 6, one).classes, a.classes);
}

TEST(MonteCarlo, StopFlagMarksInterrupted) {
  const CodeGeometry g(Orientation::rotated, 4);
  std::atomic<bool> stop{true};
  McOptions opt;
  opt.stop = &stop;
  const auto est = estimate_failure_rate(g, 0.1, 5000, 1, opt);
  EXPECT_TRUE(est.interrupted);
  EXPECT_LT(est.trials, 5000u);
}

TEST(MonteCarlo, RejectsBadInput) {
  const CodeGeometry g(Orientation::rotated, 4);
  EXPECT_THROW(estimate_failure_rate(g, 0.5, 10, 1), std::invalid_argument);
  EXPECT_THROW(estimate_failure_rate(g, 0.0, 10, 1), std::invalid_argument);
  EXPECT_THROW(estimate_failure_rate(g, 0.1, 0, 1), std::invalid_argument);
  McOptions opt;
  opt.chunk_size = 0;
  EXPECT_THROW(estimate_failure_rate(g, 0.1, 10, 1, opt), std::invalid_argument);
}

TEST(Wilson, EndpointsSolveScoreEquation) {
  const double z = 1.959963984540054;
  for (auto [k, n] : {std::pair<int, int>{0, 10}, {3, 10}, {7, 1000}, {50, 100}}) {
    const auto w = wilson_interval(k, n);
    const double ph = static_cast<double>(k) / n;
    for (double q : {w.lower, w.upper}) {
      if (q == 0.0) continue;
      EXPECT_NEAR(std::abs(ph - q), z * std::sqrt(q * (1 - q) / n), 1e-12);
    }
    EXPECT_LE(w.lower, ph);
    EXPECT_GE(w.upper, ph);
  }
  EXPECT_NEAR(wilson_interval(0, 10).upper, z * z / (10 + z * z), 1e-12);
}

TEST(Estimate, LogSigma) {
  FailureEstimate e;
  e.trials = 10000;
  e.failures = 400;
  EXPECT_NEAR(e.sigma(), std::sqrt(0.04 * 0.96 / 10000), 1e-15);
  EXPECT_NEAR(e.log_sigma(), e.sigma() / 0.04, 1e-15);
  e.failures = 3;
  EXPECT_GT(e.log_sigma(), 0.3);
  EXPECT_TRUE(std::isfinite(e.log_sigma()));
  e.failures = 0;
  EXPECT_TRUE(std::isinf(e.log_sigma()));
}

TEST(AnsatzFit, RecoversSyntheticParameters) {
  const double p = 0.06, p_th = 0.103, alpha = 0.35, a = 0.2;
  std::vector<FailureEstimate> data;
  for (int d : {8, 10, 12, 14, 16}) {
    const int n = CodeGeometry(Orientation::rotated, d).num_qubits();
    const double rate = a * std::pow(p / p_th, alpha * std::sqrt(n));
    data.push_back(synthetic(Orientation::rotated, d, p, rate));
  }
  const auto fit = fit_ansatz(data, p_th);
  EXPECT_NEAR(fit.alpha, alpha, 1e-5);
  EXPECT_NEAR(fit.log10_a, std::log10(a), 1e-5);
  EXPECT_NEAR(fit.slope, alpha * std::log10(p / p_th), 1e-6);
  EXPECT_EQ(fit.dof, 3);
  EXPECT_LT(fit.chi2, 1.0);
  EXPECT_GT(fit.alpha_se, 0.0);
  EXPECT_DOUBLE_EQ(fit.min_sqrt_n, 8.0);
  EXPECT_DOUBLE_EQ(fit.max_sqrt_n, 16.0);
}

TEST(AnsatzFit, NeedsThreeSizesWithFailures) {
  std::vector<FailureEstimate> data{synthetic(Orientation::square, 4, 0.05, 1e-2),
                                    synthetic(Orientation::square, 6, 0.05, 1e-3),
                                    synthetic(Orientation::square, 8, 0.05, 0.0)};
  EXPECT_THROW(fit_ansatz(data, 0.1), std::invalid_argument);
  data.push_back(synthetic(Orientation::square, 10, 0.06, 1e-4));
  EXPECT_THROW(fit_ansatz(data, 0.1), std::invalid_argument);
}

TEST(ThresholdFit, RecoversSyntheticParameters) {
  ThresholdFit truth;
  truth.p_th = 0.103;
  truth.mu = 0.75;
  truth.a = std::log(0.25);
  truth.b = 9.0;
  truth.c = -4.0;
  std::vector<FailureEstimate> data;
  for (int d : {8, 10, 12, 14, 16}) {
    for (double p : {0.095, 0.099, 0.103, 0.107, 0.111}) {
      data.push_back(synthetic(Orientation::square, d, p, std::exp(truth.predict_log(p, d))));
    }
  }
  const auto fit = fit_threshold(data);
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.p_th, truth.p_th, 1e-5);
  EXPECT_NEAR(fit.mu, truth.mu, 1e-3);
  EXPECT_NEAR(fit.b, truth.b, 1e-2);
  EXPECT_EQ(fit.dof, 20);
  EXPECT_EQ(fit.residuals.size(), 25u);
  EXPECT_GT(fit.p_th_se, 0.0);
  EXPECT_LT(fit.p_th_se, 1e-3);
}

TEST(ThresholdFit, NeedsFourSizes) {
  std::vector<FailureEstimate> data;
  for (int d : {8, 10, 12}) {
    for (double p : {0.09, 0.1, 0.11}) data.push_back(synthetic(Orientation::square, d, p, 0.1));
  }
  EXPECT_THROW(fit_threshold(data), std::invalid_argument);
}

TEST(Crossing, MeetsWhereLinesIntersect) {
  AnsatzFit a, b;
  a.log10_a = -1.0;
  a.slope = -0.20;
  b.log10_a = -2.0;
  b.slope = -0.10;
  a.slope_se = b.slope_se = 0.001;
  a.log10_a_se = b.log10_a_se = 0.01;
  const auto c = find_crossings(a, b);
  ASSERT_TRUE(c.defined);
  EXPECT_NEAR(c.sqrt_n, 10.0, 1e-12);
  EXPECT_GT(c.sqrt_n_se, 0.0);
  b.slope = -0.2005;
  EXPECT_FALSE(find_crossings(a, b).defined);
  b = a;
  const auto same = find_crossings(a, b);
  EXPECT_FALSE(same.defined);
  EXPECT_TRUE(same.degenerate);
}
