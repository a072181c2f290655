#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toriclab/enumeration.h"
#include "toriclab/geometry.h"

namespace toriclab {

struct FailureEstimate {
  Orientation orientation = Orientation::square;
  int d = 0;
  int n = 0;
  double p = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  ClassCounts classes{};
  std::uint64_t seed = 0;
  bool interrupted = false;

  double rate() const noexcept;
  // Normal-approximation standard error sqrt((1-P)P/trials).
  double sigma() const noexcept;
  // Standard error of log(P), from the Wilson interval when failures are scarce.
  double log_sigma() const;
  void merge(const FailureEstimate& other);
};

struct Interval {
  double lower;
  double upper;
};
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

struct McOptions {
  int workers = 1;
  std::uint64_t chunk_size = 1000;
  int neighbor_limit = 0;
  const std::atomic<bool>* stop = nullptr;
};

// Trials are cut into fixed chunks, chunk c drawing from stream (seed, c), so the
// result is independent of the worker count.
FailureEstimate estimate_failure_rate(const CodeGeometry& geom, double p, std::uint64_t trials,
                                      std::uint64_t seed, const McOptions& options = {});
// Runs chunks [first_chunk, first_chunk + num_chunks) of the same sequence; the last
// chunk of the full run may be partial when total_trials is not a multiple of the chunk size.
FailureEstimate run_chunks(const CodeGeometry& geom, double p, std::uint64_t total_trials, std::uint64_t seed,
                           std::uint64_t first_chunk, std::uint64_t num_chunks, const McOptions& options);
std::uint64_t chunk_count(std::uint64_t trials, std::uint64_t chunk_size);

// log10 P = log10 A + alpha * log10(p / p_th) * sqrt(n), fitted per p.
struct AnsatzFit {
  double p = 0.0;
  double p_th = 0.0;
  double slope = 0.0;  // d log10 P / d sqrt(n)
  double slope_se = 0.0;
  double log10_a = 0.0;
  double log10_a_se = 0.0;
  double alpha = 0.0;
  double alpha_se = 0.0;
  double chi2 = 0.0;
  int dof = 0;
  double min_sqrt_n = 0.0;
  double max_sqrt_n = 0.0;
  int excluded = 0;
  std::vector<double> residuals;
};

AnsatzFit fit_ansatz(const std::vector<FailureEstimate>& estimates, double p_th);

// log P = a + b x + c x^2 with x = (p - p_th) d^mu.
struct ThresholdFit {
  double p_th = 0.0;
  double mu = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double p_th_se = 0.0;
  double mu_se = 0.0;
  double a_se = 0.0;
  double b_se = 0.0;
  double c_se = 0.0;
  double chi2 = 0.0;
  int dof = 0;
  bool converged = false;
  std::vector<double> residuals;

  double predict_log(double p, int d) const;
};

struct ThresholdFitOptions {
  double p_th0 = 0.10;
  double mu0 = 0.7;
  double spread = 0.5;
  int grid = 5;
  int max_iterations = 200;
};

ThresholdFit fit_threshold(const std::vector<FailureEstimate>& estimates, const ThresholdFitOptions& options = {});

struct Crossing {
  bool defined = false;
  bool degenerate = false;
  double sqrt_n = 0.0;
  double sqrt_n_se = 0.0;
};

// sqrt(n) where the two fitted lines meet.
Crossing find_crossings(const AnsatzFit& first, const AnsatzFit& second, double parallel_sigmas = 2.0);

}  // namespace toriclab
