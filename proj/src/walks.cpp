#include "toriclab/walks.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/interpolators/pchip.hpp>

#include "toriclab/parallel.h"

namespace toriclab {

namespace {

bool walk_exists(int l, int x, int y) {
  return l >= 0 && std::abs(x) + std::abs(y) <= l && ((l + x + y) % 2 + 2) % 2 == 0;
}

void require_interior(int l, int x, int y) {
  if (l <= 0 || std::abs(x) + std::abs(y) >= l) throw std::domain_error("need |x| + |y| < l");
}

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

}  // namespace

BigInt count_unconstrained(int l, int x, int y) {
  if (!walk_exists(l, x, y)) return 0;
  std::vector<BigInt> fact(l + 1);
  fact[0] = 1;
  for (int i = 1; i <= l; ++i) fact[i] = fact[i - 1] * i;
  BigInt total = 0;
  for (int up = std::max(0, y); 2 * up - y <= l - std::abs(x); ++up) {
    const int down = up - y;
    const int h = l - up - down;
    const int right = (h + x) / 2;
    const int left = (h - x) / 2;
    total += fact[l] / (fact[up] * fact[down] * fact[right] * fact[left]);
  }
  return total;
}

double log_unconstrained_closed_form(int l, int x, int y) {
  require_interior(l, x, y);
  const double L = l, X = x, Y = y;
  const double mu = (L * L - X * X + 2 * L * Y + Y * Y) / (4 * L);
  const double var = (std::pow(L, 4) + std::pow(X * X - Y * Y, 2) - 2 * L * L * (X * X + Y * Y)) / (8 * std::pow(L, 3));
  const double h = L - 2 * mu + Y;
  const double b = std::lgamma(L + 1) - std::lgamma(mu + 1) - std::lgamma(mu - Y + 1) - std::lgamma((h + X) / 2 + 1) -
                   std::lgamma((h - X) / 2 + 1);
  return 0.5 * std::log(2 * M_PI * var) + b;
}

double log_unconstrained_stirling(int l, int x, int y) {
  if (l <= 0 || std::abs(x) + std::abs(y) > l) throw std::domain_error("need |x| + |y| <= l");
  const double L = l, X = x, Y = y;
  const double per = std::log(4.0) + 2 * std::log(L) -
                     (xlogx(L + X + Y) + xlogx(L + X - Y) + xlogx(L - X + Y) + xlogx(L - X - Y)) / (2 * L);
  return L * per;
}

double log_unconstrained_expansion(int l, int x, int y) {
  if (l <= 0) throw std::domain_error("need l > 0");
  const double L = l, r2 = double(x) * x + double(y) * y;
  return L * std::log(4.0) - r2 / L - r2 * r2 / (6 * L * L * L) - 2.0 * x * x * double(y) * y / (3 * L * L * L);
}

std::vector<WindingFamily> winding_families(const CodeGeometry& geom, int max_length) {
  const int w = geom.width(), h = geom.height(), s = geom.shear();
  std::vector<WindingFamily> out;
  const int kmax = max_length / h + 1;
  for (int k = 0; k <= kmax; ++k) {
    const int mlo = static_cast<int>(std::floor(double(-max_length - k * s) / w)) - 1;
    const int mhi = static_cast<int>(std::ceil(double(max_length - k * s) / w)) + 1;
    for (int m = mlo; m <= mhi; ++m) {
      if (k == 0 && m <= 0) continue;
      if (std::gcd(std::abs(m), k) != 1) continue;
      const Displacement t{m * w + k * s, k * h};
      if (t.manhattan() > max_length) continue;
      WindingFamily f;
      f.m = m;
      f.k = k;
      f.t = t;
      f.cls = geom.orientation() == Orientation::square ? WindingClass::from_bits((m & 1) | (k & 1) << 1)
                                                        : WindingClass::from_bits(((m + k) & 1) | (m & 1) << 1);
      out.push_back(f);
    }
  }
  std::sort(out.begin(), out.end(), [](const WindingFamily& a, const WindingFamily& b) {
    if (a.t.manhattan() != b.t.manhattan()) return a.t.manhattan() < b.t.manhattan();
    return std::pair(a.m, a.k) < std::pair(b.m, b.k);
  });
  return out;
}

BigInt exact_constrained_small(const CodeGeometry& geom, int l, std::uint64_t max_nodes) {
  const int nv = geom.num_vertices();
  if (l < 3) return 0;
  std::vector<std::array<VertexId, 4>> nb(nv);
  std::vector<int> dist(nv);
  for (int v = 0; v < nv; ++v) {
    nb[v] = geom.neighbors(v);
    dist[v] = geom.defect_distance(v, 0);
  }
  constexpr int kdx[4] = {1, 0, -1, 0};
  constexpr int kdy[4] = {0, 1, 0, -1};
  std::vector<char> visited(nv, 0);
  visited[0] = 1;
  std::uint64_t nodes = 0;
  std::uint64_t rooted = 0;
  auto dfs = [&](auto&& self, VertexId v, int depth, int x, int y) -> void {
    if (++nodes > max_nodes) throw std::length_error("search exceeded node budget");
    for (int dir = 0; dir < 4; ++dir) {
      const VertexId u = nb[v][dir];
      const int nx = x + kdx[dir], ny = y + kdy[dir];
      if (depth + 1 == l) {
        if (u == 0 && (nx != 0 || ny != 0)) ++rooted;
        continue;
      }
      if (visited[u] || dist[u] > l - depth - 1) continue;
      visited[u] = 1;
      self(self, u, depth + 1, nx, ny);
      visited[u] = 0;
    }
  };
  dfs(dfs, 0, 0, 0, 0);
  const BigInt total = BigInt(rooted) * nv;
  if (total % (2 * l) != 0) throw std::logic_error("rooted cycle count not divisible by orbit size");
  return total / (2 * l);
}

WalkSampler::WalkSampler(int l, Displacement t) : l_(l), t_(t) {
  if (!walk_exists(l, t.dx, t.dy)) throw std::invalid_argument("no walk of this length reaches the target");
  std::vector<double> logw;
  for (int up = std::max(0, t.dy); 2 * up - t.dy <= l - std::abs(t.dx); ++up) {
    const int down = up - t.dy;
    const int h = l - up - down;
    ups_.push_back(up);
    logw.push_back(-std::lgamma(up + 1.0) - std::lgamma(down + 1.0) - std::lgamma((h + t.dx) / 2 + 1.0) -
                   std::lgamma((h - t.dx) / 2 + 1.0));
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double acc = 0.0;
  for (double lw : logw) {
    acc += std::exp(lw - top);
    cdf_.push_back(acc);
  }
  for (double& c : cdf_) c /= acc;
  cdf_.back() = 1.0;
  total_ = count_unconstrained(l, t.dx, t.dy);
}

void WalkSampler::draw(std::vector<int>& steps, Rng& rng) const {
  const double u = uniform01(rng);
  const auto idx = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
  const int up = ups_[std::min(idx, ups_.size() - 1)];
  const int down = up - t_.dy;
  const int h = l_ - up - down;
  steps.clear();
  steps.insert(steps.end(), (h + t_.dx) / 2, 0);
  steps.insert(steps.end(), up, 1);
  steps.insert(steps.end(), (h - t_.dx) / 2, 2);
  steps.insert(steps.end(), down, 3);
  for (std::size_t i = steps.size(); i > 1; --i) {
    std::swap(steps[i - 1], steps[uniform_below(rng, i)]);
  }
}

ConstrainedPoint sample_constrained(const CodeGeometry& geom, int l, std::uint64_t samples_per_family,
                                    std::uint64_t seed, int workers) {
  SamplingOptions options;
  options.min_samples = options.max_samples = samples_per_family;
  options.workers = workers;
  return sample_constrained(geom, l, options, seed);
}

ConstrainedPoint sample_constrained(const CodeGeometry& geom, int l, const SamplingOptions& options,
                                    std::uint64_t seed) {
  if (options.min_samples == 0 || options.max_samples < options.min_samples) {
    throw std::invalid_argument("need 0 < min_samples <= max_samples");
  }
  ConstrainedPoint out;
  out.orientation = geom.orientation();
  out.d = geom.distance();
  out.l = l;
  std::vector<WindingFamily> families;
  for (const auto& f : winding_families(geom, l)) {
    if ((l - f.t.manhattan()) % 2 == 0) families.push_back(f);
  }
  if (families.empty()) return out;

  const int nv = geom.num_vertices();
  std::vector<std::array<VertexId, 4>> nb(nv);
  for (int v = 0; v < nv; ++v) nb[v] = geom.neighbors(v);
  std::vector<WalkSampler> samplers;
  for (const auto& f : families) samplers.emplace_back(l, f.t);

  const int nw = std::max(1, options.workers);
  std::vector<std::vector<std::uint32_t>> stamps(nw, std::vector<std::uint32_t>(nv, 0));
  std::vector<std::uint32_t> generation(nw, 0);
  std::vector<std::vector<int>> steps(nw);
  auto run_chunk = [&](std::size_t fam, std::uint64_t c, std::uint64_t count, int worker) {
    Rng rng = make_stream(seed, (static_cast<std::uint64_t>(fam) << 32) | c);
    auto& stamp = stamps[worker];
    auto& gen = generation[worker];
    std::uint64_t ok = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      samplers[fam].draw(steps[worker], rng);
      if (++gen == 0) {
        std::fill(stamp.begin(), stamp.end(), 0);
        gen = 1;
      }
      VertexId v = 0;
      stamp[0] = gen;
      bool simple = true;
      for (int s = 0; s + 1 < l; ++s) {
        v = nb[v][steps[worker][s]];
        if (stamp[v] == gen) {
          simple = false;
          break;
        }
        stamp[v] = gen;
      }
      if (simple) ++ok;
    }
    return ok;
  };

  constexpr std::uint64_t chunk = 4096;
  std::vector<std::uint64_t> drawn(families.size(), 0);
  std::vector<std::uint64_t> hits(families.size(), 0);
  std::vector<std::uint64_t> goal(families.size(), options.min_samples);
  for (;;) {
    struct Task {
      std::size_t fam;
      std::uint64_t c;
      std::uint64_t count;
    };
    std::vector<Task> tasks;
    for (std::size_t f = 0; f < families.size(); ++f) {
      for (std::uint64_t at = drawn[f]; at < goal[f]; at += std::min(chunk, goal[f] - at)) {
        tasks.push_back({f, at / chunk, std::min(chunk, goal[f] - at)});
      }
    }
    if (tasks.empty()) break;
    std::vector<std::uint64_t> result(tasks.size(), 0);
    parallel_for_chunks(tasks.size(), nw, [&](std::size_t i, int worker) {
      result[i] = run_chunk(tasks[i].fam, tasks[i].c, tasks[i].count, worker);
    });
    for (std::size_t i = 0; i < tasks.size(); ++i) hits[tasks[i].fam] += result[i];
    for (std::size_t f = 0; f < families.size(); ++f) {
      drawn[f] = goal[f];
      if (options.target_rel <= 0.0 || drawn[f] >= options.max_samples) continue;
      const double frac = static_cast<double>(hits[f]) / static_cast<double>(drawn[f]);
      const bool precise = hits[f] > 0 && std::sqrt((1 - frac) / (frac * drawn[f])) <= options.target_rel;
      if (!precise) goal[f] = std::min(options.max_samples, 2 * drawn[f]);
    }
  }

  double var = 0.0;
  const double scale = static_cast<double>(nv) / l;
  for (std::size_t f = 0; f < families.size(); ++f) {
    const double s = static_cast<double>(drawn[f]);
    const double total = scale * to_double(samplers[f].total());
    const double frac = static_cast<double>(hits[f]) / s;
    out.samples += drawn[f];
    out.accepted += hits[f];
    out.unconstrained_total += total;
    out.estimate += total * frac;
    var += total * total * frac * (1 - frac) / s;
    if (hits[f] == 0) out.upper += total * (1.0 - std::pow(0.05, 1.0 / s));
  }
  out.sigma = std::sqrt(var);
  out.upper += out.estimate;
  return out;
}

double interpolate_log(const ConstrainedCurve& curve, double l) {
  const auto& pts = curve.points;
  if (pts.empty()) throw std::invalid_argument("empty curve");
  if (l < pts.front().l || l > pts.back().l) throw std::out_of_range("length outside the curve");
  for (const auto& p : pts) {
    if (p.l == l) return p.log_n;
  }
  std::vector<double> xs, ys;
  for (const auto& p : pts) {
    xs.push_back(p.l);
    ys.push_back(p.log_n);
  }
  if (xs.size() < 4) {
    const auto it = std::upper_bound(xs.begin(), xs.end(), l);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double t = (l - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + t * (ys[i] - ys[i - 1]);
  }
  boost::math::interpolators::pchip<std::vector<double>> spline(std::move(xs), std::move(ys));
  return spline(l);
}

std::vector<ExtrapolationPoint> extrapolate_ncon(const std::vector<ConstrainedCurve>& curves,
                                                 const std::vector<double>& l_hats) {
  std::vector<ExtrapolationPoint> out;
  for (double lh : l_hats) {
    ExtrapolationPoint pt;
    pt.l_hat = lh;
    std::vector<double> sq, ys;
    for (const auto& c : curves) {
      if (c.points.empty()) continue;
      const double half = std::sqrt(c.n / 2.0);
      const double l = lh * half;
      if (l < c.points.front().l - 1e-9 || l > c.points.back().l + 1e-9) continue;
      const double lc = std::clamp(l, double(c.points.front().l), double(c.points.back().l));
      double value = 0.0;
      bool exact = false;
      for (const auto& p : c.points) {
        if (std::abs(p.l - l) < 1e-9) {
          value = p.log_n;
          exact = true;
        }
      }
      if (!exact) value = interpolate_log(c, lc);
      sq.push_back(std::sqrt(static_cast<double>(c.n)));
      ys.push_back(value / half);
    }
    pt.sizes = static_cast<int>(sq.size());
    if (pt.sizes >= 4) {
      Eigen::MatrixXd a(pt.sizes, 3);
      Eigen::VectorXd y(pt.sizes);
      for (int i = 0; i < pt.sizes; ++i) {
        a(i, 0) = 1.0;
        a(i, 1) = -std::log(sq[i]) / sq[i];
        a(i, 2) = -1.0 / sq[i];
        y(i) = ys[i];
      }
      const Eigen::Vector3d beta = a.colPivHouseholderQr().solve(y);
      pt.a = beta(0);
      pt.b = beta(1);
      pt.c = beta(1) != 0.0 ? std::exp(beta(2) / beta(1)) : std::nan("");
      pt.ok = std::isfinite(pt.a) && std::isfinite(pt.c) && beta(1) != 0.0;
      const Eigen::VectorXd r = y - a * beta;
      pt.residuals.assign(r.data(), r.data() + r.size());
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace toriclab
