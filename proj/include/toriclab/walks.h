#pragma once

#include <cstdint>
#include <vector>

#include "toriclab/geometry.h"
#include "toriclab/pathcount.h"
#include "toriclab/rng.h"

namespace toriclab {

// Length-l walks on the infinite square lattice from the origin to (x, y).
BigInt count_unconstrained(int l, int x, int y);

// Gaussian approximation to log N_unc about the peak of the summand; needs |x| + |y| < l.
double log_unconstrained_closed_form(int l, int x, int y);
// The same with Stirling's formula applied to every factorial.
double log_unconstrained_stirling(int l, int x, int y);
// Large-l series to fourth order in r / l.
double log_unconstrained_expansion(int l, int x, int y);

// A primitive lattice vector of the torus, one per +/- pair.
struct WindingFamily {
  int m = 0;  // coefficients on the generators (width, 0) and (shear, height)
  int k = 0;
  Displacement t;
  WindingClass cls;
};

std::vector<WindingFamily> winding_families(const CodeGeometry& geom, int max_length);

// Non-contractible self-avoiding closed paths of length l, by depth-first search.
BigInt exact_constrained_small(const CodeGeometry& geom, int l, std::uint64_t max_nodes = 1'000'000'000);

// Uniform length-l walks from the origin to t, as direction codes 0..3 (+x, +y, -x, -y).
class WalkSampler {
 public:
  WalkSampler(int l, Displacement t);
  void draw(std::vector<int>& steps, Rng& rng) const;
  const BigInt& total() const noexcept { return total_; }

 private:
  int l_;
  Displacement t_;
  std::vector<int> ups_;
  std::vector<double> cdf_;
  BigInt total_;
};

struct ConstrainedPoint {
  Orientation orientation = Orientation::square;
  int d = 0;
  int l = 0;
  double estimate = 0.0;
  double sigma = 0.0;
  double upper = 0.0;  // estimate plus a 95% bound for families with no accepted sample
  std::uint64_t samples = 0;
  std::uint64_t accepted = 0;
  double unconstrained_total = 0.0;
};

struct SamplingOptions {
  std::uint64_t min_samples = 100'000;  // per winding family
  std::uint64_t max_samples = 100'000;
  double target_rel = 0.0;  // keep doubling a family's samples until its relative error is below this
  int workers = 1;
};

// Uniform walks per winding family, counted when they project to a simple cycle.
ConstrainedPoint sample_constrained(const CodeGeometry& geom, int l, const SamplingOptions& options,
                                    std::uint64_t seed);
ConstrainedPoint sample_constrained(const CodeGeometry& geom, int l, std::uint64_t samples_per_family,
                                    std::uint64_t seed, int workers = 1);

struct CurvePoint {
  int l = 0;
  double log_n = 0.0;
};

struct ConstrainedCurve {
  int d = 0;
  int n = 0;
  std::vector<CurvePoint> points;  // increasing l
};

// log N / sqrt(n/2) = A - (B / sqrt(n)) log(C sqrt(n)) at fixed l_hat = l / sqrt(n/2).
struct ExtrapolationPoint {
  double l_hat = 0.0;
  bool ok = false;
  int sizes = 0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  std::vector<double> residuals;
};

std::vector<ExtrapolationPoint> extrapolate_ncon(const std::vector<ConstrainedCurve>& curves,
                                                 const std::vector<double>& l_hats);

// Monotone piecewise-cubic value of the curve at a real l inside its range.
double interpolate_log(const ConstrainedCurve& curve, double l);

}  // namespace toriclab
