#include "toriclab/montecarlo.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

#include "toriclab/matching.h"
#include "toriclab/noise.h"
#include "toriclab/parallel.h"
#include "toriclab/rng.h"

namespace toriclab {

double FailureEstimate::rate() const noexcept {
  return trials == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(trials);
}

double FailureEstimate::sigma() const noexcept {
  if (trials == 0) return 0.0;
  const double r = rate();
  return std::sqrt((1.0 - r) * r / static_cast<double>(trials));
}

double FailureEstimate::log_sigma() const {
  if (failures == 0) return std::numeric_limits<double>::infinity();
  if (failures >= 10) return sigma() / rate();
  const Interval w = wilson_interval(failures, trials);
  return 0.5 * (std::log(w.upper) - std::log(w.lower)) / 1.959963984540054;
}

void FailureEstimate::merge(const FailureEstimate& other) {
  trials += other.trials;
  failures += other.failures;
  for (int k = 0; k < 4; ++k) classes[k] += other.classes[k];
  interrupted = interrupted || other.interrupted;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (ph + z2 / (2 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::uint64_t chunk_count(std::uint64_t trials, std::uint64_t chunk_size) {
  if (chunk_size == 0) throw std::invalid_argument("chunk size must be positive");
  return (trials + chunk_size - 1) / chunk_size;
}

FailureEstimate run_chunks(const CodeGeometry& geom, double p, std::uint64_t total_trials, std::uint64_t seed,
                           std::uint64_t first_chunk, std::uint64_t num_chunks, const McOptions& options) {
  const NoiseParams noise(p);
  if (!(p > 0.0)) throw std::invalid_argument("p must lie in (0, 1/2)");
  const std::uint64_t all_chunks = chunk_count(total_trials, options.chunk_size);
  if (first_chunk + num_chunks > all_chunks) throw std::invalid_argument("chunk range beyond the run");
  const int workers = std::max(1, options.workers);

  std::vector<std::unique_ptr<Decoder>> decoders;
  std::vector<ErrorConfig> scratch;
  for (int w = 0; w < workers; ++w) {
    decoders.push_back(std::make_unique<Decoder>(geom, options.neighbor_limit));
    scratch.emplace_back(geom.num_qubits());
  }
  std::vector<ClassCounts> per_chunk(num_chunks, ClassCounts{});
  std::vector<char> done(num_chunks, 0);

  parallel_for_chunks(num_chunks, workers, [&](std::size_t local, int worker) {
    const std::uint64_t chunk = first_chunk + local;
    const std::uint64_t begin = chunk * options.chunk_size;
    const std::uint64_t count = std::min(options.chunk_size, total_trials - begin);
    Rng rng = make_stream(seed, chunk);
    ClassCounts counts{};
    for (std::uint64_t t = 0; t < count; ++t) {
      sample_error_into(scratch[worker], noise, rng);
      ++counts[decoders[worker]->failure_class(scratch[worker]).bits()];
    }
    per_chunk[local] = counts;
    done[local] = 1;
  }, options.stop);

  FailureEstimate est;
  est.orientation = geom.orientation();
  est.d = geom.distance();
  est.n = geom.num_qubits();
  est.p = p;
  est.seed = seed;
  for (std::uint64_t c = 0; c < num_chunks; ++c) {
    if (!done[c]) {
      est.interrupted = true;
      continue;
    }
    for (int k = 0; k < 4; ++k) {
      est.classes[k] += per_chunk[c][k];
      est.trials += per_chunk[c][k];
    }
  }
  est.failures = est.classes[1] + est.classes[2] + est.classes[3];
  return est;
}

FailureEstimate estimate_failure_rate(const CodeGeometry& geom, double p, std::uint64_t trials,
                                      std::uint64_t seed, const McOptions& options) {
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  return run_chunks(geom, p, trials, seed, 0, chunk_count(trials, options.chunk_size), options);
}

AnsatzFit fit_ansatz(const std::vector<FailureEstimate>& estimates, double p_th) {
  if (estimates.empty()) throw std::invalid_argument("no estimates to fit");
  AnsatzFit fit;
  fit.p = estimates.front().p;
  fit.p_th = p_th;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> ss;
  std::set<int> sizes;
  for (const auto& e : estimates) {
    if (std::abs(e.p - fit.p) > 1e-12 * std::max(1.0, fit.p)) {
      throw std::invalid_argument("fit_ansatz expects estimates at a single p");
    }
    if (e.failures == 0 || e.failures == e.trials) {
      ++fit.excluded;
      continue;
    }
    xs.push_back(std::sqrt(static_cast<double>(e.n)));
    ys.push_back(std::log10(e.rate()));
    ss.push_back(e.log_sigma() / std::log(10.0));
    sizes.insert(e.n);
  }
  if (sizes.size() < 3) throw std::invalid_argument("fewer than three system sizes with failures");
  const int m = static_cast<int>(xs.size());
  Eigen::MatrixXd a(m, 2);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    a(i, 0) = 1.0 / ss[i];
    a(i, 1) = xs[i] / ss[i];
    y(i) = ys[i] / ss[i];
  }
  const Eigen::Vector2d beta = a.colPivHouseholderQr().solve(y);
  const Eigen::Matrix2d cov = (a.transpose() * a).inverse();
  fit.log10_a = beta(0);
  fit.slope = beta(1);
  fit.log10_a_se = std::sqrt(cov(0, 0));
  fit.slope_se = std::sqrt(cov(1, 1));
  const double lr = std::log10(fit.p / p_th);
  fit.alpha = lr == 0.0 ? std::numeric_limits<double>::quiet_NaN() : fit.slope / lr;
  fit.alpha_se = lr == 0.0 ? std::numeric_limits<double>::quiet_NaN() : fit.slope_se / std::abs(lr);
  for (int i = 0; i < m; ++i) {
    const double r = (ys[i] - beta(0) - beta(1) * xs[i]) / ss[i];
    fit.residuals.push_back(r);
    fit.chi2 += r * r;
  }
  fit.dof = m - 2;
  fit.min_sqrt_n = *std::min_element(xs.begin(), xs.end());
  fit.max_sqrt_n = *std::max_element(xs.begin(), xs.end());
  return fit;
}

double ThresholdFit::predict_log(double p, int d) const {
  const double x = (p - p_th) * std::pow(static_cast<double>(d), mu);
  return a + b * x + c * x * x;
}

namespace {

struct ThresholdData {
  std::vector<double> p;
  std::vector<double> logd;
  std::vector<double> y;
  std::vector<double> s;
};

Eigen::VectorXd threshold_residuals(const ThresholdData& data, const Eigen::VectorXd& t) {
  const int m = static_cast<int>(data.p.size());
  Eigen::VectorXd r(m);
  for (int i = 0; i < m; ++i) {
    const double x = (data.p[i] - t(3)) * std::exp(t(4) * data.logd[i]);
    r(i) = (data.y[i] - (t(0) + t(1) * x + t(2) * x * x)) / data.s[i];
  }
  return r;
}

Eigen::MatrixXd threshold_jacobian(const ThresholdData& data, const Eigen::VectorXd& t) {
  const int m = static_cast<int>(data.p.size());
  Eigen::MatrixXd j(m, 5);
  for (int i = 0; i < m; ++i) {
    const double scale = std::exp(t(4) * data.logd[i]);
    const double x = (data.p[i] - t(3)) * scale;
    const double dfdx = t(1) + 2 * t(2) * x;
    j(i, 0) = -1.0 / data.s[i];
    j(i, 1) = -x / data.s[i];
    j(i, 2) = -x * x / data.s[i];
    j(i, 3) = dfdx * scale / data.s[i];
    j(i, 4) = -dfdx * x * data.logd[i] / data.s[i];
  }
  return j;
}

// Weighted linear solve for (a, b, c) at fixed (p_th, mu).
Eigen::VectorXd linear_start(const ThresholdData& data, double p_th, double mu) {
  const int m = static_cast<int>(data.p.size());
  Eigen::MatrixXd a(m, 3);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    const double x = (data.p[i] - p_th) * std::exp(mu * data.logd[i]);
    a(i, 0) = 1.0 / data.s[i];
    a(i, 1) = x / data.s[i];
    a(i, 2) = x * x / data.s[i];
    y(i) = data.y[i] / data.s[i];
  }
  Eigen::VectorXd t(5);
  t.head(3) = a.colPivHouseholderQr().solve(y);
  t(3) = p_th;
  t(4) = mu;
  return t;
}

bool levenberg_marquardt(const ThresholdData& data, Eigen::VectorXd& t, int max_iterations, double& chi2) {
  double lambda = 1e-3;
  Eigen::VectorXd r = threshold_residuals(data, t);
  chi2 = r.squaredNorm();
  for (int iter = 0; iter < max_iterations; ++iter) {
    const Eigen::MatrixXd j = threshold_jacobian(data, t);
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const Eigen::VectorXd g = j.transpose() * r;
    bool improved = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      Eigen::MatrixXd h = jtj;
      for (int k = 0; k < 5; ++k) h(k, k) += lambda * std::max(jtj(k, k), 1e-12);
      const Eigen::VectorXd step = h.ldlt().solve(-g);
      const Eigen::VectorXd trial = t + step;
      if (!trial.allFinite() || trial(4) <= 0.0) {
        lambda *= 10;
        continue;
      }
      const Eigen::VectorXd rt = threshold_residuals(data, trial);
      const double c2 = rt.squaredNorm();
      if (c2 <= chi2) {
        const double change = chi2 - c2;
        t = trial;
        r = rt;
        chi2 = c2;
        lambda = std::max(lambda / 10, 1e-12);
        improved = true;
        if (change <= 1e-12 * std::max(1.0, chi2) && step.norm() <= 1e-10 * (1.0 + t.norm())) return true;
        break;
      }
      lambda *= 10;
    }
    if (!improved) return true;
  }
  return false;
}

}  // namespace

ThresholdFit fit_threshold(const std::vector<FailureEstimate>& estimates, const ThresholdFitOptions& options) {
  ThresholdData data;
  std::set<int> sizes;
  for (const auto& e : estimates) {
    if (e.failures == 0 || e.failures == e.trials) continue;
    data.p.push_back(e.p);
    data.logd.push_back(std::log(static_cast<double>(e.d)));
    data.y.push_back(std::log(e.rate()));
    data.s.push_back(e.log_sigma());
    sizes.insert(e.d);
  }
  if (sizes.size() < 4) throw std::invalid_argument("threshold fit needs at least four system sizes");
  if (data.p.size() < 6) throw std::invalid_argument("threshold fit needs more than five points");

  ThresholdFit best;
  double best_chi2 = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_t;
  bool best_converged = false;
  const int g = std::max(1, options.grid);
  for (int i = 0; i < g; ++i) {
    for (int k = 0; k < g; ++k) {
      const double u = g == 1 ? 0.0 : -1.0 + 2.0 * i / (g - 1);
      const double v = g == 1 ? 0.0 : -1.0 + 2.0 * k / (g - 1);
      Eigen::VectorXd t = linear_start(data, options.p_th0 * (1 + options.spread * u), options.mu0 * (1 + options.spread * v));
      double chi2 = 0;
      const bool ok = levenberg_marquardt(data, t, options.max_iterations, chi2);
      if (t.allFinite() && chi2 < best_chi2) {
        best_chi2 = chi2;
        best_t = t;
        best_converged = ok;
      }
    }
  }
  if (best_t.size() != 5) throw std::runtime_error("threshold fit produced no finite solution");
  best.a = best_t(0);
  best.b = best_t(1);
  best.c = best_t(2);
  best.p_th = best_t(3);
  best.mu = best_t(4);
  best.chi2 = best_chi2;
  best.dof = static_cast<int>(data.p.size()) - 5;
  best.converged = best_converged;
  const Eigen::MatrixXd j = threshold_jacobian(data, best_t);
  const double scale = best.dof > 0 ? std::max(1.0, best_chi2 / best.dof) : 1.0;
  const Eigen::MatrixXd cov = (j.transpose() * j).inverse() * scale;
  best.a_se = std::sqrt(cov(0, 0));
  best.b_se = std::sqrt(cov(1, 1));
  best.c_se = std::sqrt(cov(2, 2));
  best.p_th_se = std::sqrt(cov(3, 3));
  best.mu_se = std::sqrt(cov(4, 4));
  const Eigen::VectorXd r = threshold_residuals(data, best_t);
  best.residuals.assign(r.data(), r.data() + r.size());
  return best;
}

Crossing find_crossings(const AnsatzFit& first, const AnsatzFit& second, double parallel_sigmas) {
  Crossing out;
  const double ds = first.slope - second.slope;
  const double da = second.log10_a - first.log10_a;
  const double ds_se = std::sqrt(first.slope_se * first.slope_se + second.slope_se * second.slope_se);
  if (ds == 0.0 || std::abs(ds) <= parallel_sigmas * ds_se) {
    out.degenerate = ds == 0.0 && da == 0.0;
    return out;
  }
  out.defined = true;
  out.sqrt_n = da / ds;
  const double da_se = std::sqrt(first.log10_a_se * first.log10_a_se + second.log10_a_se * second.log10_a_se);
  out.sqrt_n_se = std::abs(out.sqrt_n) * std::sqrt(std::pow(da_se / (da == 0.0 ? 1.0 : da), 2) + std::pow(ds_se / ds, 2));
  return out;
}

}  // namespace toriclab
