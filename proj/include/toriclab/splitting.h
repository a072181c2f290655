#pragma once

#include <atomic>
#include <cstdint>
#include <utility>
#include <vector>

#include "toriclab/geometry.h"
#include "toriclab/noise.h"

namespace toriclab {

struct ChainOptions {
  std::uint64_t steps = 10'000'000;
  double burn_in = 0.05;
  int thinning = 0;  // 0 means one sweep (n proposals)
  int batches = 32;
  bool verify_samples = false;
};

struct ChainSample {
  double p = 0.0;
  int n = 0;
  std::vector<int> weights;  // error weight of each retained sample
  std::uint64_t proposed = 0;
  std::uint64_t accepted_flip = 0;
  std::uint64_t accepted_failing = 0;
  ErrorConfig final_state;
};

// Lowest-weight failing configuration along a minimal logical path.
ErrorConfig minimal_failing_config(const CodeGeometry& geom);

// Single-qubit Metropolis moves restricted to configurations the decoder fails on.
ChainSample metropolis_chain(const CodeGeometry& geom, double p, const ErrorConfig& init, std::uint64_t seed,
                             const ChainOptions& options = {}, std::uint64_t stream = 0);

inline double bennett_g(double x) { return 1.0 / (1.0 + x); }

struct RatioEstimate {
  double p_low = 0.0;
  double p_high = 0.0;
  bool ok = false;
  double c_star = 0.0;
  double ratio = 0.0;  // P(p_low) / P(p_high)
  double sigma = 0.0;
  std::vector<double> scan_c;
  std::vector<double> scan_low;   // <g(C A)> under p_low
  std::vector<double> scan_high;  // <g(1/(C A))> under p_high
};

// Weight distributions are lists of (weight, probability) pairs. A(w) is the
// ratio of the unnormalised weight-w probabilities at p_high and p_low.
RatioEstimate bennett_crossing(int n, double p_low, double p_high, const std::vector<std::pair<int, double>>& low,
                               const std::vector<std::pair<int, double>>& high);
RatioEstimate bennett_ratio(const ChainSample& low, const ChainSample& high, int batches = 32);

struct SplitSchedule {
  std::vector<double> rates;  // strictly decreasing; rates.front() carries the anchor
  double anchor = 0.0;
  double anchor_sigma = 0.0;
};

// Rates from p_high down to p_low with equal ratios no larger than max_factor.
std::vector<double> geometric_schedule(double p_high, double p_low, double max_factor = 2.0);

struct SplitResult {
  std::vector<double> rates;
  std::vector<double> failure;  // estimate at each rate reached
  std::vector<double> sigma;
  std::vector<RatioEstimate> ratios;
  std::vector<ChainSample> chains;
  bool complete = false;
};

SplitResult split_failure_rate(const CodeGeometry& geom, const SplitSchedule& schedule, const ChainOptions& options,
                               std::uint64_t seed, int workers = 1, const std::atomic<bool>* stop = nullptr);

}  // namespace toriclab
