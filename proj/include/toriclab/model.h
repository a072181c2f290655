#pragma once

#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "toriclab/enumeration.h"
#include "toriclab/pathcount.h"

namespace toriclab {

using Rational = boost::multiprecision::cpp_rational;

struct FreeEnergyTerm {
  int weight = 0;
  BigInt failing;
  double entropy = 0.0;      // log N_fail(w)
  double free_energy = 0.0;  // w - entropy / beta
};

struct FreeEnergyProfile {
  int n = 0;
  int d = 0;
  double p = 0.0;
  double beta = 0.0;
  std::vector<FreeEnergyTerm> terms;  // weights with N_fail(w) > 0, increasing
  std::vector<int> missing;           // weights in [d/2, n] absent from the tallies
  bool partial() const { return !missing.empty(); }

  double failure_rate() const;  // (1-p)^n sum_w exp(-beta F(w))
  int dominant_weight() const;  // argmin F
};

FreeEnergyProfile free_energy_profile(int n, int d, double p, const TallyResult& tallies);
// Sum of N_fail(w) p^w (1-p)^(n-w) with p = num / den, in exact arithmetic.
Rational exact_failure_rate(const FreeEnergyProfile& profile, long long num, long long den);
// (1-p)^n sum_w N_fail(w) (p / (1-p))^w, the free-energy form, in exact arithmetic.
Rational exact_free_energy_sum(const FreeEnergyProfile& profile, long long num, long long den);

// N_con(l) by length.
struct NconTable {
  int d = 0;
  int n = 0;
  std::vector<std::pair<int, double>> counts;  // increasing l
};

struct ModelValue {
  double value = 0.0;
  double tail = 0.0;       // geometric estimate of the omitted terms
  int last_length = 0;
  bool truncated = false;  // table ran out before terms became negligible
};

// sum_l N_con(l) xi^l (p (1-p))^(l/2)
ModelValue model_failure_rate(const NconTable& ncon, double p, double xi);

struct UpperBound {
  double full = 0.0;        // exact inner sums over errors on and off each path
  double simplified = 0.0;  // 2^l (p (1-p))^(l/2) per path
};

UpperBound rigorous_upper_bound(const NconTable& ncon, double p);
// sum_{u >= l/2} C(l, u) r^u with r = p / (1-p), and the 2^l r^(l/2) it is bounded by.
std::pair<double, double> path_error_sum(int l, double p);

double threshold_lower_bound(double c);
double critical_p(double xi_th, double c);
double critical_xi(double p, double c);

struct XiPoint {
  double p = 0.0;
  double failure = 0.0;
  double sigma = 0.0;
  bool ok = false;
  double xi = 0.0;
  double xi_low = 0.0;
  double xi_high = 0.0;
  bool outside_unit_range = false;  // xi outside [1, 2]
  bool truncated = false;
};

// Solves P_model(xi) = P for xi in [0.5, 2.5] at each point.
XiPoint fit_xi(const NconTable& ncon, double p, double failure, double sigma);

}  // namespace toriclab
