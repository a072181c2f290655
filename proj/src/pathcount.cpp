#include "toriclab/pathcount.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace toriclab {

namespace {

void require_even(int d, int min_d) {
  if (d < min_d || d % 2 != 0) {
    throw std::invalid_argument("distance must be even and at least " + std::to_string(min_d));
  }
}

BigInt pow2(int e) {
  BigInt r = 1;
  r <<= e;
  return r;
}

}  // namespace

BigInt binomial(long long n, long long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

double to_double(const BigInt& x) { return x.convert_to<double>(); }

double log_of(const BigInt& x) {
  if (x <= 0) throw std::domain_error("log of a nonpositive count");
  const unsigned bits = boost::multiprecision::msb(x);
  if (bits < 1000) return std::log(to_double(x));
  const unsigned shift = bits - 60;
  const BigInt top = x >> shift;
  return std::log(to_double(top)) + shift * std::numbers::ln2;
}

BigInt square_min_weight(int d) {
  require_even(d, 4);
  return BigInt(d) * binomial(d, d / 2);
}

BigInt turn_configurations(int T, int d) {
  require_even(d, 2);
  if (T < 0 || T > d / 2) throw std::invalid_argument("turn count out of range");
  BigInt total = 0;
  for (int w = 0; w <= std::min(T, d / 4); ++w) {
    total += pow2(T - w) * binomial(T, w) * binomial(d - 2 * T, d / 2 - T - w);
  }
  return total;
}

BigInt staircases_with_turns(int T, int d) {
  require_even(d, 2);
  const int h = d / 2;
  const BigInt a = binomial(h, T);
  const BigInt b = binomial(h - 1, T);
  const BigInt c = binomial(h - 1, T - 1);
  return a * a - b * b + c * c;
}

BigInt rotated_upper_bound(int d) {
  require_even(d, 4);
  BigInt sum = 0;
  for (int T = 0; T <= d / 2; ++T) sum += staircases_with_turns(T, d) * turn_configurations(T, d);
  return BigInt(d) * sum + BigInt(d) * binomial(d, d / 2) - BigInt(2) * d * d;
}

BigInt pair_sum(int a, int b, int d) {
  require_even(d, 4);
  BigInt sum = 0;
  for (int T = 0; T <= d / 4; ++T) {
    const BigInt c = binomial(d / 2 - b, T - a);
    sum += c * c * pow2(T) * binomial(d - 2 * T, d / 2 - T);
  }
  return sum;
}

BigInt rotated_lower_bound(int d) { return pair_sum(0, 0, d) - pair_sum(1, 0, d) + pair_sum(1, 1, d); }

double log_upper_asymptote(int d) {
  require_even(d, 2);
  return std::log(4.0 * std::numbers::pi * d * d / (27.0 * std::sqrt(3.0))) + 0.5 * d * std::log(13.5);
}

GammaBounds gamma_asymptotics(Orientation orientation) {
  if (orientation == Orientation::square) {
    const double g = std::pow(2.0, 1.0 / std::numbers::sqrt2);
    return {g, g};
  }
  return {2.0 + std::numbers::sqrt2, std::sqrt(13.5)};
}

double LowPEstimate::operator()(double p) const {
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("p must lie in (0, 1/2)");
  return std::exp(log_of(coefficient) + exponent * std::log(p));
}

LowPEstimate low_p_estimate(const CodeGeometry& geom) {
  const int d = geom.distance();
  BigInt c = geom.orientation() == Orientation::square ? square_min_weight(d) : rotated_upper_bound(d);
  return {geom.num_qubits(), d, std::move(c), d / 2};
}

double low_p_failure(const CodeGeometry& geom, double p) { return low_p_estimate(geom)(p); }

double delta_ratio(double p, double n, double gamma_rotated) {
  const double d_rot = std::sqrt(n);
  const double d_sq = std::sqrt(n / 2.0);
  const double gamma_sq = gamma_asymptotics(Orientation::square).lower;
  return gamma_rotated / gamma_sq * std::pow(p, (d_rot - d_sq) / (2.0 * std::sqrt(n)));
}

}  // namespace toriclab
