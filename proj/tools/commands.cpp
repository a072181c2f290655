#include "commands.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

#include "output.h"
#include "toriclab/enumeration.h"
#include "toriclab/geometry.h"
#include "toriclab/matching.h"
#include "toriclab/model.h"
#include "toriclab/montecarlo.h"
#include "toriclab/pathcount.h"
#include "toriclab/rng.h"
#include "toriclab/splitting.h"
#include "toriclab/walks.h"

namespace toriclab::cli {

namespace fs = std::filesystem;

namespace {

struct Context {
  const ExperimentConfig& cfg;
  const std::atomic<bool>& stop;
  std::ostream& out;
  fs::path dir;
  RunRecord record;

  void write(const std::string& file, const CsvTable& table) {
    table.write(dir / file, cfg);
    record.files.push_back(file);
  }
};

std::vector<Orientation> orientations(const ExperimentConfig& cfg) {
  std::vector<Orientation> out;
  for (const auto& o : cfg.orientations) out.push_back(parse_orientation(o));
  return out;
}

std::string name(Orientation o) { return std::string(to_string(o)); }

std::uint64_t point_seed(std::uint64_t seed, Orientation o, int d, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof bits);
  std::uint64_t s = seed;
  s = splitmix64(s) ^ ((o == Orientation::rotated ? 1ULL << 32 : 0ULL) | static_cast<std::uint64_t>(d));
  s = splitmix64(s) ^ bits;
  return splitmix64(s);
}

double sqrt_half(int n) { return std::sqrt(n / 2.0); }

std::string flag(bool b) { return b ? "1" : "0"; }

// ---- enumerate

void enumerate(Context& ctx) {
  const auto& cfg = ctx.cfg;
  EnumerationOptions opt;
  opt.workers = cfg.workers;
  std::vector<DecoderPolicy> policies;
  if (cfg.policy == "all") {
    policies = {DecoderPolicy::implemented, DecoderPolicy::best, DecoderPolicy::worst};
  } else {
    policies = {parse_policy(cfg.policy)};
  }
  for (Orientation o : orientations(cfg)) {
    CsvTable table({"orientation", "d", "w", "policy", "class", "count"});
    for (int d : cfg.distances) {
      if (ctx.stop) break;
      const CodeGeometry geom(o, d);
      const int w = d / 2;
      if (combination_count(geom.num_qubits(), w) > opt.max_combinations) {
        throw ConfigError("enumeration of " + name(o) + " d=" + std::to_string(d) + " exceeds the combination guard");
      }
      const CosetReport report = coset_report(geom, w, opt);
      const std::string od = std::to_string(d);
      nlohmann::json s{{"total_errors", report.total_errors},
                       {"syndromes", report.syndromes},
                       {"random_expectation", random_decoder_expectation(report)}};
      for (DecoderPolicy pol : policies) {
        const TallyResult t = pol == DecoderPolicy::implemented ? enumerate_failures(geom, w, pol, opt)
                                                                 : tally_from_report(geom, report, pol);
        const std::string pn(to_string(pol));
        for (unsigned bits = 1; bits < 4; ++bits) {
          const WindingClass c = WindingClass::from_bits(bits);
          table.add({name(o), od, std::to_string(w), pn, std::string(class_name(c)), std::to_string(t.count(w, c))});
        }
        table.add({name(o), od, std::to_string(w), pn, "axis", std::to_string(t.axis_failures(w))});
        table.add({name(o), od, std::to_string(w), pn, "failures", std::to_string(t.failures(w))});
        s[pn] = t.failures(w);
      }
      table.add({name(o), od, std::to_string(w), "all", "total", std::to_string(report.total_errors)});
      ctx.record.summary[name(o)][od] = s;
      ctx.out << name(o) << " d=" << d << " w=" << w << " total=" << report.total_errors << "\n";
    }
    ctx.write(o == Orientation::rotated ? "table1_rotated.csv" : "table2_square.csv", table);
  }
}

// ---- pathcount

void pathcount(Context& ctx) {
  std::vector<int> ds = ctx.cfg.distances;
  if (ds.empty()) {
    for (int d = 4; d <= 20; d += 2) ds.push_back(d);
  }
  CsvTable table({"orientation", "d", "n", "lower", "upper", "log_upper_asymptote", "gamma_lower", "gamma_upper"});
  for (Orientation o : orientations(ctx.cfg)) {
    double prev_lo = 0.0, prev_hi = 0.0, prev_root = 0.0;
    bool have_prev = false;
    for (int d : ds) {
      const CodeGeometry geom(o, d);
      BigInt lo, hi;
      std::string asym;
      if (o == Orientation::square) {
        lo = hi = square_min_weight(d);
      } else {
        lo = rotated_lower_bound(d);
        hi = rotated_upper_bound(d);
        asym = num(log_upper_asymptote(d));
      }
      const double root = std::sqrt(static_cast<double>(geom.num_qubits()));
      std::string g_lo, g_hi;
      if (have_prev && lo > 0 && prev_lo > 0.0) {
        g_lo = num(std::exp((log_of(lo) - prev_lo) / (root - prev_root)));
        g_hi = num(std::exp((log_of(hi) - prev_hi) / (root - prev_root)));
      }
      table.add({name(o), std::to_string(d), std::to_string(geom.num_qubits()), lo.str(), hi.str(), asym, g_lo, g_hi});
      prev_lo = lo > 0 ? log_of(lo) : 0.0;
      prev_hi = hi > 0 ? log_of(hi) : 0.0;
      prev_root = root;
      have_prev = true;
    }
    const GammaBounds g = gamma_asymptotics(o);
    ctx.record.summary[name(o)] = {{"gamma_lower", g.lower}, {"gamma_upper", g.upper}};
    ctx.out << name(o) << " gamma in [" << num(g.lower) << ", " << num(g.upper) << "]\n";
  }
  ctx.write("pathcount_bounds.csv", table);
}

// ---- Monte Carlo with checkpoints

struct McPoint {
  Orientation orientation;
  int d;
  double p;
};

struct McProgress {
  std::uint64_t chunks = 0;
  FailureEstimate estimate;
};

nlohmann::json progress_json(const McPoint& pt, const McProgress& pr) {
  return {{"orientation", name(pt.orientation)}, {"d", pt.d},
          {"p", pt.p},
          {"chunks", pr.chunks},
          {"trials", pr.estimate.trials},
          {"failures", pr.estimate.failures},
          {"classes", pr.estimate.classes}};
}

std::vector<FailureEstimate> collect(Context& ctx, const std::vector<McPoint>& points, const std::string& tag) {
  const auto& cfg = ctx.cfg;
  const fs::path ckpt = ctx.dir / (tag + ".checkpoint.json");
  std::vector<McProgress> progress(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const CodeGeometry geom(points[i].orientation, points[i].d);
    auto& e = progress[i].estimate;
    e.orientation = points[i].orientation;
    e.d = points[i].d;
    e.n = geom.num_qubits();
    e.p = points[i].p;
    e.seed = point_seed(cfg.seed, points[i].orientation, points[i].d, points[i].p);
  }
  if (cfg.resume && fs::exists(ckpt)) {
    std::ifstream in(ckpt);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("unreadable checkpoint: ") + e.what());
    }
    if (j.at("config") != to_json(cfg)) throw ConfigError("checkpoint was written with a different configuration");
    const auto& saved = j.at("points");
    if (saved.size() != points.size()) throw ConfigError("checkpoint does not match the configured points");
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto& pr = progress[i];
      pr.chunks = saved[i].at("chunks").get<std::uint64_t>();
      pr.estimate.trials = saved[i].at("trials").get<std::uint64_t>();
      pr.estimate.failures = saved[i].at("failures").get<std::uint64_t>();
      pr.estimate.classes = saved[i].at("classes").get<ClassCounts>();
    }
  }
  auto save = [&] {
    nlohmann::json pts = nlohmann::json::array();
    for (std::size_t i = 0; i < points.size(); ++i) pts.push_back(progress_json(points[i], progress[i]));
    write_atomically(ckpt, nlohmann::json{{"config", to_json(cfg)}, {"points", pts}}.dump() + "\n");
  };

  McOptions opt;
  opt.workers = cfg.workers;
  opt.chunk_size = cfg.chunk_size;
  opt.neighbor_limit = cfg.neighbor_limit;
  opt.stop = &ctx.stop;
  const std::uint64_t total = chunk_count(cfg.trials, cfg.chunk_size);
  const std::uint64_t batch = cfg.checkpoint_every > 0 ? cfg.checkpoint_every : total;
  for (std::size_t i = 0; i < points.size() && !ctx.stop; ++i) {
    const CodeGeometry geom(points[i].orientation, points[i].d);
    auto& pr = progress[i];
    while (pr.chunks < total) {
      const std::uint64_t count = std::min(batch, total - pr.chunks);
      FailureEstimate part = run_chunks(geom, points[i].p, cfg.trials, pr.estimate.seed, pr.chunks, count, opt);
      if (part.interrupted || ctx.stop) break;
      pr.estimate.merge(part);
      pr.chunks += count;
      if (cfg.checkpoint_every > 0) save();
    }
    if (ctx.stop) break;
    ctx.out << name(points[i].orientation) << " d=" << points[i].d << " p=" << num(points[i].p)
            << " P=" << num(pr.estimate.rate()) << " (" << pr.estimate.failures << "/" << pr.estimate.trials << ")\n";
  }
  if (cfg.checkpoint_every > 0 || ctx.stop) save();
  std::vector<FailureEstimate> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto e = progress[i].estimate;
    e.interrupted = progress[i].chunks < total;
    out.push_back(e);
  }
  ctx.record.interrupted = ctx.stop;
  return out;
}

CsvTable failure_table(const std::vector<FailureEstimate>& estimates) {
  CsvTable t({"orientation", "d", "n", "p", "eta", "failures", "P", "sigma", "horizontal", "vertical", "diagonal"});
  for (const auto& e : estimates) {
    if (e.trials == 0) continue;
    t.add({name(e.orientation), std::to_string(e.d), std::to_string(e.n), num(e.p), std::to_string(e.trials),
           std::to_string(e.failures), num(e.rate()), num(e.sigma()), std::to_string(e.classes[1]),
           std::to_string(e.classes[2]), std::to_string(e.classes[3])});
  }
  return t;
}

std::vector<McPoint> grid(const ExperimentConfig& cfg, const std::vector<double>& rates) {
  std::vector<McPoint> pts;
  for (Orientation o : orientations(cfg)) {
    for (int d : cfg.distances) {
      for (double p : rates) pts.push_back({o, d, p});
    }
  }
  return pts;
}

void mc(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto estimates = collect(ctx, grid(cfg, cfg.rates), "mc");
  ctx.write("fig2_failure_rates.csv", failure_table(estimates));
  if (ctx.stop) return;

  std::map<std::pair<Orientation, double>, AnsatzFit> fits;
  CsvTable ansatz({"orientation", "p", "p_th", "alpha", "alpha_se", "log10_A", "log10_A_se", "slope", "slope_se", "chi2",
                   "dof", "min_sqrt_n", "max_sqrt_n", "excluded"});
  for (Orientation o : orientations(cfg)) {
    for (double p : cfg.rates) {
      if (p >= cfg.p_th) continue;
      std::vector<FailureEstimate> group;
      for (const auto& e : estimates) {
        if (e.orientation == o && e.p == p) group.push_back(e);
      }
      AnsatzFit f;
      try {
        f = fit_ansatz(group, cfg.p_th);
      } catch (const std::exception&) {
        continue;
      }
      fits[{o, p}] = f;
      ansatz.add({name(o), num(p), num(f.p_th), num(f.alpha), num(f.alpha_se), num(f.log10_a), num(f.log10_a_se),
                  num(f.slope), num(f.slope_se), num(f.chi2), std::to_string(f.dof), num(f.min_sqrt_n),
                  num(f.max_sqrt_n), std::to_string(f.excluded)});
    }
  }
  if (ansatz.rows().empty()) return;
  ctx.write("fig3_ansatz.csv", ansatz);

  const auto os = orientations(cfg);
  if (os.size() < 2) return;
  CsvTable crossings({"p", "defined", "degenerate", "sqrt_n", "sqrt_n_se"});
  for (double p : cfg.rates) {
    auto sq = fits.find({Orientation::square, p});
    auto rot = fits.find({Orientation::rotated, p});
    if (sq == fits.end() || rot == fits.end()) continue;
    const Crossing c = find_crossings(sq->second, rot->second);
    crossings.add({num(p), flag(c.defined), flag(c.degenerate), c.defined ? num(c.sqrt_n) : "",
                   c.defined ? num(c.sqrt_n_se) : ""});
  }
  ctx.write("fig3_crossings.csv", crossings);

  // Rotated over square failure rate at the closest qubit counts.
  CsvTable ratio({"p", "d_square", "n_square", "d_rotated", "n_rotated", "ratio", "sigma"});
  for (const auto& s : estimates) {
    if (s.orientation != Orientation::square || s.failures == 0) continue;
    const FailureEstimate* best = nullptr;
    for (const auto& r : estimates) {
      if (r.orientation != Orientation::rotated || r.p != s.p || r.failures == 0) continue;
      if (!best || std::abs(r.n - s.n) < std::abs(best->n - s.n)) best = &r;
    }
    if (!best) continue;
    const double q = best->rate() / s.rate();
    const double rel = std::hypot(best->sigma() / best->rate(), s.sigma() / s.rate());
    ratio.add({num(s.p), std::to_string(s.d), std::to_string(s.n), std::to_string(best->d), std::to_string(best->n),
               num(q), num(q * rel)});
  }
  ctx.write("fig2_ratio.csv", ratio);
}

void threshold(Context& ctx) {
  const auto& cfg = ctx.cfg;
  std::vector<double> rates = cfg.rates;
  if (rates.empty()) rates = {0.095, 0.0975, 0.1, 0.1025, 0.105};
  const auto estimates = collect(ctx, grid(cfg, rates), "threshold");
  ctx.write("table3_points.csv", failure_table(estimates));
  if (ctx.stop) return;
  CsvTable table({"orientation", "p_th", "p_th_se", "mu", "mu_se", "a", "a_se", "b", "b_se", "c", "c_se", "chi2", "dof",
                  "converged"});
  bool all_converged = true;
  for (Orientation o : orientations(cfg)) {
    std::vector<FailureEstimate> group;
    for (const auto& e : estimates) {
      if (e.orientation == o) group.push_back(e);
    }
    ThresholdFit f;
    try {
      f = fit_threshold(group);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("threshold fit: ") + e.what());
    }
    all_converged = all_converged && f.converged;
    table.add({name(o), num(f.p_th), num(f.p_th_se), num(f.mu), num(f.mu_se), num(f.a), num(f.a_se), num(f.b),
               num(f.b_se), num(f.c), num(f.c_se), num(f.chi2), std::to_string(f.dof), flag(f.converged)});
    ctx.record.summary[name(o)] = {{"p_th", f.p_th}, {"p_th_se", f.p_th_se}, {"mu", f.mu}, {"converged", f.converged}};
    ctx.out << name(o) << " p_th=" << num(f.p_th) << " +- " << num(f.p_th_se) << " mu=" << num(f.mu) << "\n";
  }
  ctx.write("table3_threshold.csv", table);
  if (!all_converged) throw NumericalFailure("threshold fit did not converge");
}

// ---- splitting

void split(Context& ctx) {
  const auto& cfg = ctx.cfg;
  CsvTable rates({"orientation", "d", "n", "p", "P", "sigma", "low_p", "ratio_to_low_p"});
  CsvTable steps({"orientation", "d", "j", "p_high", "p_low", "ok", "c_star", "R", "sigma", "proposed",
                  "accept_flip", "accept_failing"});
  ChainOptions chain;
  chain.steps = cfg.steps;
  chain.burn_in = cfg.burn_in;
  chain.thinning = cfg.thinning;
  chain.batches = cfg.batches;
  bool complete = true;
  McOptions mc;
  mc.workers = cfg.workers;
  mc.chunk_size = cfg.chunk_size;
  mc.neighbor_limit = cfg.neighbor_limit;
  mc.stop = &ctx.stop;
  for (Orientation o : orientations(cfg)) {
    for (int d : cfg.distances) {
      if (ctx.stop) break;
      const CodeGeometry geom(o, d);
      const auto seed = point_seed(cfg.seed, o, d, cfg.p_high);
      const FailureEstimate anchor = estimate_failure_rate(geom, cfg.p_high, cfg.anchor_trials, seed, mc);
      if (anchor.interrupted) break;
      if (anchor.failures == 0 || anchor.sigma() > 0.1 * anchor.rate()) {
        throw NumericalFailure("anchor estimate at p=" + num(cfg.p_high) + " for " + name(o) + " d=" +
                               std::to_string(d) + " has relative error above 0.1");
      }
      SplitSchedule schedule{geometric_schedule(cfg.p_high, cfg.p_low, cfg.factor), anchor.rate(), anchor.sigma()};
      const SplitResult r = split_failure_rate(geom, schedule, chain, seed + 1, cfg.workers, &ctx.stop);
      const std::string od = std::to_string(d);
      for (std::size_t j = 0; j < r.failure.size(); ++j) {
        const double low = low_p_failure(geom, r.rates[j]);
        rates.add({name(o), od, std::to_string(geom.num_qubits()), num(r.rates[j]), num(r.failure[j]), num(r.sigma[j]),
                   num(low), num(r.failure[j] / low)});
      }
      for (std::size_t j = 0; j < r.ratios.size(); ++j) {
        const auto& q = r.ratios[j];
        const auto& c = r.chains[j + 1];
        const double prop = static_cast<double>(std::max<std::uint64_t>(c.proposed, 1));
        steps.add({name(o), od, std::to_string(j), num(q.p_high), num(q.p_low), flag(q.ok), num(q.c_star),
                   num(q.ratio), num(q.sigma), std::to_string(c.proposed), num(c.accepted_flip / prop),
                   num(c.accepted_failing / prop)});
      }
      ctx.record.summary[name(o)][od] = {{"anchor", anchor.rate()},
                                         {"p_low", r.rates.back()},
                                         {"complete", r.complete},
                                         {"P", r.failure.back()},
                                         {"sigma", r.sigma.back()}};
      ctx.out << name(o) << " d=" << d << " P(" << num(r.rates[r.failure.size() - 1]) << ")=" << num(r.failure.back())
              << " +- " << num(r.sigma.back()) << "\n";
      if (!r.complete && !ctx.stop) complete = false;
    }
  }
  ctx.record.interrupted = ctx.stop;
  ctx.write("fig5_splitting.csv", rates);
  ctx.write("fig5_ratios.csv", steps);
  if (!complete) throw NumericalFailure("a Bennett crossing was not found; see fig5_ratios.csv");
}

// ---- walks

std::vector<int> walk_lengths(const CodeGeometry& geom, double l_factor) {
  std::vector<int> ls;
  const int top = static_cast<int>(std::floor(l_factor * sqrt_half(geom.num_qubits()) + 1e-9));
  for (int l = geom.distance(); l <= top; l += 2) ls.push_back(l);
  return ls;
}

SamplingOptions sampling(const ExperimentConfig& cfg) {
  SamplingOptions s;
  s.min_samples = cfg.min_samples;
  s.max_samples = cfg.max_samples;
  s.target_rel = cfg.target_rel;
  s.workers = cfg.workers;
  return s;
}

std::vector<double> default_l_hats(double l_factor) {
  std::vector<double> out;
  for (int i = 10; i <= static_cast<int>(std::floor(10 * l_factor + 1e-9)); ++i) out.push_back(i / 10.0);
  return out;
}

void walks(Context& ctx) {
  const auto& cfg = ctx.cfg;
  CsvTable table({"orientation", "d", "n", "l", "l_hat", "N", "sigma", "upper", "log_N_per_root", "log_sigma",
                  "samples", "accepted"});
  for (Orientation o : orientations(cfg)) {
    std::vector<ConstrainedCurve> curves;
    for (int d : cfg.distances) {
      const CodeGeometry geom(o, d);
      const int n = geom.num_qubits();
      ConstrainedCurve curve{d, n, {}};
      for (int l : walk_lengths(geom, cfg.l_factor)) {
        if (ctx.stop) break;
        const auto pt = sample_constrained(geom, l, sampling(cfg), point_seed(cfg.seed, o, d, l));
        const double root = sqrt_half(n);
        const bool pos = pt.estimate > 0.0;
        table.add({name(o), std::to_string(d), std::to_string(n), std::to_string(l), num(l / root), num(pt.estimate),
                   num(pt.sigma), num(pt.upper), pos ? num(std::log(pt.estimate) / root) : "",
                   pos ? num(pt.sigma / pt.estimate / root) : "", std::to_string(pt.samples),
                   std::to_string(pt.accepted)});
        if (pos) curve.points.push_back({l, std::log(pt.estimate)});
      }
      if (ctx.stop) break;
      ctx.out << name(o) << " d=" << d << " lengths=" << curve.points.size() << "\n";
      curves.push_back(std::move(curve));
    }
    if (ctx.stop) break;
    const auto l_hats = cfg.l_hats.empty() ? default_l_hats(cfg.l_factor) : cfg.l_hats;
    CsvTable fit({"orientation", "l_hat", "ok", "sizes", "A", "B", "C"});
    for (const auto& e : extrapolate_ncon(curves, l_hats)) {
      fit.add({name(o), num(e.l_hat), flag(e.ok), std::to_string(e.sizes), e.ok ? num(e.a) : "",
               e.ok ? num(e.b) : "", e.ok ? num(e.c) : ""});
    }
    ctx.write(o == Orientation::square ? "fig13_extrapolation.csv" : "fig14_extrapolation.csv", fit);
  }
  ctx.record.interrupted = ctx.stop;
  ctx.write("fig6_constrained.csv", table);
}

// ---- model

bool has_column(const CsvTable& t, const std::string& c) {
  for (const auto& h : t.header()) {
    if (h == c) return true;
  }
  return false;
}

bool row_matches(const CsvTable& t, const std::vector<std::string>& row, Orientation o, int d) {
  if (has_column(t, "orientation") && row[t.column("orientation")] != name(o)) return false;
  if (has_column(t, "d") && std::stoi(row[t.column("d")]) != d) return false;
  return true;
}

// N_con from walks CSVs among --data, sampled on the spot otherwise.
NconTable ncon_table(Context& ctx, Orientation o, int d) {
  const CodeGeometry geom(o, d);
  NconTable t{d, geom.num_qubits(), {}};
  for (const auto& file : ctx.cfg.data) {
    const CsvTable csv = CsvTable::read(file);
    if (!has_column(csv, "N") || !has_column(csv, "l")) continue;
    for (const auto& row : csv.rows()) {
      if (!row_matches(csv, row, o, d)) continue;
      const double v = std::stod(row[csv.column("N")]);
      if (v > 0.0) t.counts.push_back({std::stoi(row[csv.column("l")]), v});
    }
  }
  std::sort(t.counts.begin(), t.counts.end());
  if (!t.counts.empty()) return t;
  for (int l : walk_lengths(geom, ctx.cfg.l_factor)) {
    if (ctx.stop) break;
    const auto pt = sample_constrained(geom, l, sampling(ctx.cfg), point_seed(ctx.cfg.seed, o, d, l));
    if (pt.estimate > 0.0) t.counts.push_back({l, pt.estimate});
  }
  return t;
}

void model(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const double p_bound = threshold_lower_bound(cfg.c);
  const double p_c = critical_p(cfg.xi_th, cfg.c);
  ctx.record.summary["p_bound"] = p_bound;
  ctx.record.summary["p_c"] = p_c;
  char buf[32];
  if (cfg.op == "threshold-bound") {
    std::snprintf(buf, sizeof buf, "%.4f", p_bound);
    ctx.out << buf << "\n";
    return;
  }
  if (cfg.op == "critical-p") {
    std::snprintf(buf, sizeof buf, "%.4f", p_c);
    ctx.out << buf << "\n";
    return;
  }
  const Orientation o = parse_orientation(cfg.orientations.front());
  const int d = cfg.distances.front();
  const NconTable ncon = ncon_table(ctx, o, d);
  if (ctx.stop) {
    ctx.record.interrupted = true;
    return;
  }
  if (ncon.counts.empty()) throw NumericalFailure("no constrained path counts available");
  if (cfg.op == "bound") {
    CsvTable table({"orientation", "d", "p", "full", "simplified"});
    for (double p : cfg.rates) {
      const UpperBound b = rigorous_upper_bound(ncon, p);
      table.add({name(o), std::to_string(d), num(p), num(b.full), num(b.simplified)});
    }
    ctx.write("model_bound.csv", table);
    return;
  }
  CsvTable table({"orientation", "d", "p", "P", "sigma", "xi", "xi_low", "xi_high", "ok", "outside_unit_range",
                  "truncated"});
  int solved = 0;
  for (const auto& file : cfg.data) {
    const CsvTable csv = CsvTable::read(file);
    if (!has_column(csv, "P") || !has_column(csv, "sigma") || !has_column(csv, "p")) continue;
    for (const auto& row : csv.rows()) {
      if (!row_matches(csv, row, o, d)) continue;
      const double p = std::stod(row[csv.column("p")]);
      const double P = std::stod(row[csv.column("P")]);
      const double s = std::stod(row[csv.column("sigma")]);
      if (!(P > 0.0)) continue;
      const XiPoint x = fit_xi(ncon, p, P, s);
      solved += x.ok;
      table.add({name(o), std::to_string(d), num(p), num(P), num(s), x.ok ? num(x.xi) : "",
                 x.ok ? num(x.xi_low) : "", x.ok ? num(x.xi_high) : "", flag(x.ok), flag(x.outside_unit_range),
                 flag(x.truncated)});
    }
  }
  ctx.write("fig7_xi.csv", table);
  if (solved == 0) throw NumericalFailure("no failure rate could be matched by the model");
}

// ---- verify

void verify(Context& ctx) {
  CsvTable table({"check", "expected", "observed", "pass"});
  bool all = true;
  auto check = [&](const std::string& what, const std::string& expected, const std::string& observed) {
    const bool ok = expected == observed;
    all = all && ok;
    table.add({what, expected, observed, flag(ok)});
    ctx.out << (ok ? "PASS " : "FAIL ") << what << ": expected " << expected << ", got " << observed << "\n";
  };

  {
    const CodeGeometry g(Orientation::rotated, 4);
    const auto t = enumerate_failures(g, 2, DecoderPolicy::best);
    check("rotated d=4 best axis/diagonal", "48/8", std::to_string(t.axis_failures(2)) + "/" +
                                                       std::to_string(t.count(2, WindingClass{1, 1})));
  }
  {
    const CodeGeometry g(Orientation::square, 4);
    const auto t = enumerate_failures(g, 2, DecoderPolicy::worst);
    check("square d=4 horizontal/vertical/diagonal", "12/12/0",
          std::to_string(t.count(2, WindingClass{1, 0})) + "/" + std::to_string(t.count(2, WindingClass{0, 1})) + "/" +
              std::to_string(t.count(2, WindingClass{1, 1})));
    check("square d=4 enumeration matches path count", square_min_weight(4).str(), std::to_string(t.failures(2)));
  }
  {
    // Exhaustive failure rate of rotated d=4 at p=0.05 against sampling.
    const CodeGeometry g(Orientation::rotated, 4);
    Decoder dec(g);
    const int n = g.num_qubits();
    const double p = 0.05;
    double exact = 0.0;
    ErrorConfig e(n);
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      for (int q = 0; q < n; ++q) e.set(q, (mask >> q) & 1U);
      if (!dec.failure_class(e).trivial()) exact += std::exp(log_probability(n, e.weight(), p));
    }
    McOptions opt;
    opt.workers = ctx.cfg.workers;
    const auto est = estimate_failure_rate(g, p, 200'000, ctx.cfg.seed, opt);
    const bool ok = std::abs(est.rate() - exact) < 4.0 * est.sigma();
    check("rotated d=4 sampling within 4 sigma of exhaustive", "1", flag(ok));
  }
  {
    bool ok = true;
    for (int l = 0; l <= 12; ++l) {
      std::vector<BigInt> grid(4 * l + 3, 0);
      for (int x = -l; x <= l; ++x) {
        for (int y = -l; y <= l; ++y) {
          if (std::abs(x) + std::abs(y) > l || (l - x - y) % 2 != 0) continue;
          // N(l, x, y) = C(l, (l+x+y)/2) C(l, (l+x-y)/2).
          const BigInt expect = binomial(l, (l + x + y) / 2) * binomial(l, (l + x - y) / 2);
          ok = ok && count_unconstrained(l, x, y) == expect;
        }
      }
    }
    check("unconstrained walk counts, l <= 12", "1", flag(ok));
  }
  check("rotated d=4 tight non-contractible cycles", "28",
        exact_constrained_small(CodeGeometry(Orientation::rotated, 4), 4).str());
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", threshold_lower_bound(2.638));
    check("threshold lower bound", "0.0373", buf);
  }
  ctx.write("verify.csv", table);
  ctx.record.summary["passed"] = all;
  if (!all) throw NumericalFailure("verification failed");
}

}  // namespace

int run(const ExperimentConfig& config, const std::atomic<bool>& stop, std::ostream& out) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  Context ctx{config, stop, out, fs::path(config.output), {}};
  ctx.record.name = config.command == "model" ? "model_" + config.op : config.command;
  fs::create_directories(ctx.dir);
  auto finish = [&] {
    ctx.record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_sidecar(ctx.dir, config, ctx.record);
  };
  try {
    if (config.command == "enumerate") {
      enumerate(ctx);
    } else if (config.command == "pathcount") {
      pathcount(ctx);
    } else if (config.command == "mc") {
      mc(ctx);
    } else if (config.command == "threshold") {
      threshold(ctx);
    } else if (config.command == "split") {
      split(ctx);
    } else if (config.command == "walks") {
      walks(ctx);
    } else if (config.command == "model") {
      model(ctx);
    } else {
      verify(ctx);
    }
  } catch (const NumericalFailure&) {
    finish();
    throw;
  }
  if (stop) ctx.record.interrupted = true;
  finish();
  return ctx.record.interrupted ? 130 : 0;
}

}  // namespace toriclab::cli
