#include "toriclab/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

namespace toriclab {

namespace {

void require_p(double p) {
  if (!(p > 0.0) || !(p < 0.5)) throw std::invalid_argument("p must lie in (0, 1/2)");
}

Rational rational_power(const Rational& base, int e) {
  Rational out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

double FreeEnergyProfile::failure_rate() const {
  double s = 0.0;
  for (const auto& t : terms) s += std::exp(n * std::log1p(-p) - beta * t.free_energy);
  return s;
}

int FreeEnergyProfile::dominant_weight() const {
  if (terms.empty()) throw std::logic_error("empty profile");
  return std::min_element(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
           return a.free_energy < b.free_energy;
         })->weight;
}

FreeEnergyProfile free_energy_profile(int n, int d, double p, const TallyResult& tallies) {
  require_p(p);
  FreeEnergyProfile prof;
  prof.n = n;
  prof.d = d;
  prof.p = p;
  prof.beta = std::log((1 - p) / p);
  for (int w = d / 2; w <= n; ++w) {
    if (!tallies.has_weight(w)) {
      prof.missing.push_back(w);
      continue;
    }
    const std::uint64_t f = tallies.failures(w);
    if (f == 0) continue;
    FreeEnergyTerm t;
    t.weight = w;
    t.failing = f;
    t.entropy = std::log(static_cast<double>(f));
    t.free_energy = w - t.entropy / prof.beta;
    prof.terms.push_back(t);
  }
  return prof;
}

Rational exact_failure_rate(const FreeEnergyProfile& profile, long long num, long long den) {
  const Rational p(num, den);
  Rational s = 0;
  for (const auto& t : profile.terms) {
    s += Rational(t.failing) * rational_power(p, t.weight) * rational_power(1 - p, profile.n - t.weight);
  }
  return s;
}

Rational exact_free_energy_sum(const FreeEnergyProfile& profile, long long num, long long den) {
  const Rational p(num, den);
  const Rational odds = p / (1 - p);
  Rational s = 0;
  for (const auto& t : profile.terms) s += Rational(t.failing) * rational_power(odds, t.weight);
  return rational_power(1 - p, profile.n) * s;
}

ModelValue model_failure_rate(const NconTable& ncon, double p, double xi) {
  require_p(p);
  if (!(xi > 0.0)) throw std::invalid_argument("xi must be positive");
  if (ncon.counts.empty()) throw std::invalid_argument("empty path table");
  ModelValue out;
  const double log_step = std::log(xi) + 0.5 * std::log(p * (1 - p));
  double last = 0.0, before = 0.0;
  for (const auto& [l, count] : ncon.counts) {
    if (count <= 0.0) continue;
    before = last;
    last = std::exp(std::log(count) + l * log_step);
    out.value += last;
    out.last_length = l;
  }
  out.truncated = last >= 1e-3 * out.value;
  const double q = before > 0.0 ? last / before : 0.0;
  out.tail = q < 1.0 ? last * q / (1.0 - q) : std::numeric_limits<double>::infinity();
  return out;
}

std::pair<double, double> path_error_sum(int l, double p) {
  require_p(p);
  const double r = p / (1 - p);
  double s = 0.0;
  for (int u = (l + 1) / 2; u <= l; ++u) s += to_double(binomial(l, u)) * std::pow(r, u);
  return {s, std::pow(2.0, l) * std::pow(r, l / 2.0)};
}

UpperBound rigorous_upper_bound(const NconTable& ncon, double p) {
  require_p(p);
  UpperBound out;
  for (const auto& [l, count] : ncon.counts) {
    if (count <= 0.0) continue;
    const auto [exact, bound] = path_error_sum(l, p);
    out.full += count * std::pow(1 - p, l) * exact;
    out.simplified += count * std::pow(1 - p, l) * bound;
  }
  return out;
}

double threshold_lower_bound(double c) {
  if (!(c >= 1.0)) throw std::domain_error("no bound for c < 1");
  return 0.5 - std::sqrt(0.25 - 1.0 / (4 * c * c));
}

double critical_p(double xi_th, double c) {
  if (!(xi_th > 0.0) || !(c > 0.0) || xi_th * c < 2.0) throw std::domain_error("need xi * c >= 2");
  return 0.5 - std::sqrt(0.25 - 1.0 / (xi_th * xi_th * c * c));
}

double critical_xi(double p, double c) {
  require_p(p);
  if (!(c > 0.0)) throw std::domain_error("c must be positive");
  return 1.0 / (c * std::sqrt(p * (1 - p)));
}

XiPoint fit_xi(const NconTable& ncon, double p, double failure, double sigma) {
  XiPoint out;
  out.p = p;
  out.failure = failure;
  out.sigma = sigma;
  if (!(failure > 0.0)) return out;
  auto solve = [&](double target, double& xi) {
    auto f = [&](double x) { return std::log(model_failure_rate(ncon, p, x).value) - std::log(target); };
    const double lo = 0.5, hi = 2.5;
    if (f(lo) > 0.0 || f(hi) < 0.0) return false;
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
    xi = 0.5 * (r.first + r.second);
    return true;
  };
  out.ok = solve(failure, out.xi);
  if (!out.ok) return out;
  out.truncated = model_failure_rate(ncon, p, out.xi).truncated;
  if (!solve(std::max(failure - sigma, failure * 1e-3), out.xi_low)) out.xi_low = 0.5;
  if (!solve(failure + sigma, out.xi_high)) out.xi_high = 2.5;
  out.outside_unit_range = out.xi < 1.0 || out.xi > 2.0;
  return out;
}

}  // namespace toriclab
