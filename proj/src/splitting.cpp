#include "toriclab/splitting.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "toriclab/matching.h"
#include "toriclab/parallel.h"
#include "toriclab/rng.h"

namespace toriclab {

ErrorConfig minimal_failing_config(const CodeGeometry& geom) {
  const auto path = geom.logical_generator(0);
  Decoder decoder(geom);
  const int len = static_cast<int>(path.size());
  for (int take = (len + 1) / 2; take <= len; ++take) {
    for (int offset = 0; offset < len; ++offset) {
      ErrorConfig e(geom.num_qubits());
      for (int k = 0; k < take; ++k) e.flip(path[(offset + k) % len]);
      if (decoder.failure_class(e).bits() != 0) return e;
    }
  }
  throw std::logic_error("no failing configuration along the logical path");
}

ChainSample metropolis_chain(const CodeGeometry& geom, double p, const ErrorConfig& init, std::uint64_t seed,
                             const ChainOptions& options, std::uint64_t stream) {
  const NoiseParams noise(p);
  if (!(p > 0.0)) throw std::invalid_argument("p must lie in (0, 1/2)");
  if (init.size() != geom.num_qubits()) throw std::invalid_argument("initial configuration has the wrong size");
  if (options.burn_in < 0.0 || options.burn_in >= 1.0) throw std::invalid_argument("burn-in fraction must be in [0, 1)");
  Decoder decoder(geom);
  if (decoder.failure_class(init).bits() == 0) throw std::invalid_argument("initial configuration does not fail");

  ChainSample out;
  out.p = p;
  out.n = geom.num_qubits();
  const std::uint64_t thin = options.thinning > 0 ? options.thinning : static_cast<std::uint64_t>(out.n);
  const auto burn = static_cast<std::uint64_t>(options.burn_in * static_cast<double>(options.steps));
  const double up = p / (1.0 - p);
  Rng rng = make_stream(seed, stream);
  ErrorConfig state = init;
  out.weights.reserve((options.steps - burn) / thin + 1);
  for (std::uint64_t step = 0; step < options.steps; ++step) {
    const int q = static_cast<int>(uniform_below(rng, out.n));
    ++out.proposed;
    const bool adding = !state.test(q);
    if (!adding || uniform01(rng) < up) {
      ++out.accepted_flip;
      state.flip(q);
      if (decoder.failure_class(state).bits() != 0) {
        ++out.accepted_failing;
      } else {
        state.flip(q);
      }
    }
    if (step >= burn && (step - burn) % thin == 0) {
      if (options.verify_samples && decoder.failure_class(state).bits() == 0) {
        throw std::logic_error("chain holds a configuration that decodes correctly");
      }
      out.weights.push_back(state.weight());
    }
  }
  out.final_state = std::move(state);
  return out;
}

namespace {

using Distribution = std::vector<std::pair<int, double>>;

struct Evaluator {
  int n;
  double log_up;    // log(p_high / p_low)
  double log_down;  // log((1 - p_high) / (1 - p_low))

  double log_a(int w) const { return w * log_up + (n - w) * log_down; }
  // <g(C A)> under the low distribution.
  double low(const Distribution& dist, double log_c) const {
    double s = 0.0;
    for (const auto& [w, m] : dist) s += m * bennett_g(std::exp(log_c + log_a(w)));
    return s;
  }
  // <g(1 / (C A))> under the high distribution.
  double high(const Distribution& dist, double log_c) const {
    double s = 0.0;
    for (const auto& [w, m] : dist) s += m * bennett_g(std::exp(-log_c - log_a(w)));
    return s;
  }
};

Distribution histogram(const std::vector<int>& weights, std::size_t begin, std::size_t end) {
  std::map<int, double> counts;
  for (std::size_t i = begin; i < end; ++i) counts[weights[i]] += 1.0;
  Distribution out(counts.begin(), counts.end());
  const double total = static_cast<double>(end - begin);
  for (auto& entry : out) entry.second /= total;
  return out;
}

double batch_variance_of_mean(const std::vector<double>& batch_means) {
  const double k = static_cast<double>(batch_means.size());
  if (k < 2) return 0.0;
  double mean = 0.0;
  for (double v : batch_means) mean += v;
  mean /= k;
  double ss = 0.0;
  for (double v : batch_means) ss += (v - mean) * (v - mean);
  return ss / (k - 1) / k;
}

}  // namespace

RatioEstimate bennett_crossing(int n, double p_low, double p_high, const Distribution& low, const Distribution& high) {
  if (low.empty() || high.empty()) throw std::invalid_argument("empty weight distribution");
  if (!(p_low > 0.0) || !(p_high < 0.5) || p_low > p_high) throw std::invalid_argument("need 0 < p_low <= p_high < 1/2");
  RatioEstimate r;
  r.p_low = p_low;
  r.p_high = p_high;
  const Evaluator ev{n, std::log(p_high / p_low), std::log1p(-p_high) - std::log1p(-p_low)};
  auto h = [&](double log_c) { return ev.low(low, log_c) - ev.high(high, log_c); };

  double lo = std::log(1e-4);
  double hi = std::log(10.0);
  bool bracketed = false;
  for (int widen = 0; widen < 4 && !bracketed; ++widen) {
    r.scan_c.clear();
    r.scan_low.clear();
    r.scan_high.clear();
    for (int i = 0; i < 100; ++i) {
      const double lc = lo + (hi - lo) * i / 99.0;
      r.scan_c.push_back(std::exp(lc));
      r.scan_low.push_back(ev.low(low, lc));
      r.scan_high.push_back(ev.high(high, lc));
    }
    for (int i = 0; i + 1 < 100; ++i) {
      const double a = r.scan_low[i] - r.scan_high[i];
      const double b = r.scan_low[i + 1] - r.scan_high[i + 1];
      if (a == 0.0 || (a > 0.0) != (b > 0.0)) {
        lo = std::log(r.scan_c[i]);
        hi = std::log(r.scan_c[i + 1]);
        bracketed = true;
        break;
      }
    }
    if (!bracketed) {
      lo -= std::log(1e4);
      hi += std::log(1e4);
    }
  }
  if (!bracketed) return r;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  r.ok = true;
  r.c_star = std::exp(0.5 * (lo + hi));
  r.ratio = r.c_star;
  return r;
}

RatioEstimate bennett_ratio(const ChainSample& low, const ChainSample& high, int batches) {
  if (low.weights.empty() || high.weights.empty()) throw std::invalid_argument("empty chain");
  if (low.n != high.n) throw std::invalid_argument("chains belong to different codes");
  RatioEstimate r = bennett_crossing(low.n, low.p, high.p, histogram(low.weights, 0, low.weights.size()),
                                     histogram(high.weights, 0, high.weights.size()));
  if (!r.ok) return r;
  const Evaluator ev{low.n, std::log(high.p / low.p), std::log1p(-high.p) - std::log1p(-low.p)};
  const double log_c = std::log(r.c_star);
  auto batch_means = [&](const ChainSample& chain, bool is_low) {
    std::vector<double> means;
    const std::size_t total = chain.weights.size();
    const std::size_t k = std::max<std::size_t>(1, std::min<std::size_t>(batches, total));
    for (std::size_t b = 0; b < k; ++b) {
      const auto dist = histogram(chain.weights, b * total / k, (b + 1) * total / k);
      means.push_back(is_low ? ev.low(dist, log_c) : ev.high(dist, log_c));
    }
    return means;
  };
  const double num = ev.high(histogram(high.weights, 0, high.weights.size()), log_c);
  const double den = ev.low(histogram(low.weights, 0, low.weights.size()), log_c);
  const double rel2 = batch_variance_of_mean(batch_means(high, false)) / (num * num) +
                      batch_variance_of_mean(batch_means(low, true)) / (den * den);
  r.sigma = r.ratio * std::sqrt(rel2);
  return r;
}

std::vector<double> geometric_schedule(double p_high, double p_low, double max_factor) {
  if (!(p_low > 0.0) || !(p_high < 0.5) || !(p_low < p_high)) throw std::invalid_argument("need 0 < p_low < p_high < 1/2");
  if (!(max_factor > 1.0)) throw std::invalid_argument("schedule factor must exceed 1");
  const int steps = static_cast<int>(std::ceil(std::log(p_high / p_low) / std::log(max_factor) - 1e-12));
  std::vector<double> rates;
  for (int i = 0; i <= steps; ++i) rates.push_back(p_high * std::pow(p_low / p_high, static_cast<double>(i) / steps));
  rates.back() = p_low;
  return rates;
}

SplitResult split_failure_rate(const CodeGeometry& geom, const SplitSchedule& schedule, const ChainOptions& options,
                               std::uint64_t seed, int workers, const std::atomic<bool>* stop) {
  const auto& rates = schedule.rates;
  if (rates.empty()) throw std::invalid_argument("empty schedule");
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] > 0.0) || !(rates[i] < 0.5)) throw std::invalid_argument("schedule rate outside (0, 1/2)");
    if (i > 0 && !(rates[i] < rates[i - 1])) throw std::invalid_argument("schedule must be strictly decreasing");
  }
  if (!(schedule.anchor > 0.0) || schedule.anchor_sigma < 0.0 || schedule.anchor_sigma > 0.1 * schedule.anchor) {
    throw std::invalid_argument("anchor needs relative error at most 0.1");
  }
  SplitResult out;
  out.rates = rates;
  out.failure.push_back(schedule.anchor);
  out.sigma.push_back(schedule.anchor_sigma);
  if (rates.size() == 1) {
    out.complete = true;
    return out;
  }
  const ErrorConfig init = minimal_failing_config(geom);
  out.chains.resize(rates.size());
  std::vector<char> done(rates.size(), 0);
  parallel_for_chunks(rates.size(), std::max(1, workers), [&](std::size_t i, int) {
    out.chains[i] = metropolis_chain(geom, rates[i], init, seed, options, i);
    done[i] = 1;
  }, stop);

  double rel2 = std::pow(schedule.anchor_sigma / schedule.anchor, 2);
  for (std::size_t j = 1; j < rates.size(); ++j) {
    if (!done[j - 1] || !done[j]) return out;
    RatioEstimate r = bennett_ratio(out.chains[j], out.chains[j - 1], options.batches);
    out.ratios.push_back(r);
    if (!r.ok) return out;
    rel2 += std::pow(r.sigma / r.ratio, 2);
    out.failure.push_back(out.failure.back() * r.ratio);
    out.sigma.push_back(out.failure.back() * std::sqrt(rel2));
  }
  out.complete = true;
  return out;
}

}  // namespace toriclab
