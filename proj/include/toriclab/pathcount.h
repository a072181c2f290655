#pragma once

#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "toriclab/geometry.h"

namespace toriclab {

using BigInt = boost::multiprecision::cpp_int;

// Zero whenever k < 0 or k > n.
BigInt binomial(long long n, long long k);
double to_double(const BigInt& x);
double log_of(const BigInt& x);

// Minimum-weight failing errors on the square torus.
BigInt square_min_weight(int d);

// Weight-d/2 placements on a length-d staircase with T right turns that leave every
// right-turn vertex next to an error (so the no-right-turn decoder completes the loop).
BigInt turn_configurations(int T, int d);

// Staircases of d/2 + d/2 steps from a fixed start whose cyclic move sequence has T
// right turns.
BigInt staircases_with_turns(int T, int d);

BigInt rotated_upper_bound(int d);
BigInt pair_sum(int a, int b, int d);
BigInt rotated_lower_bound(int d);

// Natural log of the Gaussian-integral asymptote of the leading term of the upper bound.
double log_upper_asymptote(int d);

struct GammaBounds {
  double lower;
  double upper;
};
GammaBounds gamma_asymptotics(Orientation orientation);

struct LowPEstimate {
  int n;
  int d;
  BigInt coefficient;
  int exponent;

  double operator()(double p) const;
};

LowPEstimate low_p_estimate(const CodeGeometry& geom);
double low_p_failure(const CodeGeometry& geom, double p);

// Rotated over square failure ratio at equal qubit count n in the low-p regime.
double delta_ratio(double p, double n, double gamma_rotated);

}  // namespace toriclab
