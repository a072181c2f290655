#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.h"
#include "config.h"
#include "toriclab/parallel.h"

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_interrupt(int) { g_stop = true; }

void diagnose(const char* kind, const std::string& message) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
}

std::uint64_t count_value(double v, const char* what) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19) {
    throw toriclab::cli::ConfigError(std::string(what) + " must be a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace toriclab::cli;

  CLI::App app{"Toric code failure-rate experiments"};
  std::string command, config_file;
  std::vector<std::string> orientations, data;
  std::vector<int> distances;
  std::vector<double> rates, l_hats;
  double eta = 0, chunk = 0, anchor = 0, steps = 0, min_s = 0, max_s = 0, every = 0;
  std::uint64_t seed = 0;
  int neighbor_limit = 0, thinning = 0, batches = 0, workers = 0;
  double p_high = 0, p_low = 0, factor = 0, burn_in = 0, l_factor = 0, target_rel = 0, p_th = 0, c = 0, xi = 0;
  std::string policy, op, output;
  bool resume = false;

  app.add_option("command", command, "enumerate | pathcount | mc | threshold | split | walks | model | verify")
      ->required();
  app.add_option("--config", config_file, "JSON configuration; flags given on the command line take precedence");
  auto* o_orient = app.add_option("--orientation", orientations, "square, rotated (repeatable)")->delimiter(',');
  auto* o_d = app.add_option("--d", distances, "code distances")->delimiter(',');
  auto* o_p = app.add_option("--p", rates, "physical error rates")->delimiter(',');
  auto* o_eta = app.add_option("--eta", eta, "Monte Carlo trials per point");
  auto* o_chunk = app.add_option("--chunk", chunk, "trials per chunk");
  auto* o_nl = app.add_option("--neighbor-limit", neighbor_limit, "matching graph pruning (0 = complete graph)");
  auto* o_seed = app.add_option("--seed", seed, "master seed");
  auto* o_policy = app.add_option("--policy", policy, "implemented | best | worst | all");
  auto* o_op = app.add_option("--op", op, "threshold-bound | critical-p | xi | bound");
  auto* o_ph = app.add_option("--p-high", p_high, "splitting anchor rate");
  auto* o_pl = app.add_option("--p-low", p_low, "lowest splitting rate");
  auto* o_factor = app.add_option("--factor", factor, "largest ratio between neighbouring splitting rates");
  auto* o_anchor = app.add_option("--anchor-trials", anchor, "Monte Carlo trials at the anchor");
  auto* o_steps = app.add_option("--steps", steps, "Metropolis proposals per chain");
  auto* o_burn = app.add_option("--burn-in", burn_in, "discarded fraction of each chain");
  auto* o_thin = app.add_option("--thinning", thinning, "proposals between retained samples (0 = n)");
  auto* o_batches = app.add_option("--batches", batches, "batches for batch-means errors");
  auto* o_lf = app.add_option("--l-factor", l_factor, "longest path as a multiple of sqrt(n/2)");
  auto* o_lh = app.add_option("--l-hat", l_hats, "l / sqrt(n/2) values for the extrapolation")->delimiter(',');
  auto* o_min = app.add_option("--min-samples", min_s, "walk samples per winding family, at least");
  auto* o_max = app.add_option("--max-samples", max_s, "walk samples per winding family, at most");
  auto* o_rel = app.add_option("--target-rel", target_rel, "target relative error per winding family");
  auto* o_pth = app.add_option("--p-th", p_th, "threshold used by the per-p ansatz");
  auto* o_c = app.add_option("--c", c, "connective constant");
  auto* o_xi = app.add_option("--xi", xi, "xi at threshold");
  auto* o_data = app.add_option("--data", data, "input CSV files for model --op xi|bound");
  auto* o_every = app.add_option("--checkpoint-every", every, "chunks between checkpoints (0 = none)");
  auto* o_workers = app.add_option("--workers", workers, "worker threads (default: TORICLAB_WORKERS or all cores)");
  auto* o_out = app.add_option("--output,-o", output, "output directory");
  app.add_flag("--resume", resume, "continue from the checkpoint in the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    diagnose("usage", e.what());
    return 2;
  }

  try {
    ExperimentConfig cfg;
    bool workers_given = o_workers->count() > 0;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw ConfigError("cannot read " + config_file);
      try {
        const auto j = nlohmann::json::parse(in);
        cfg = from_json(j);
        workers_given = workers_given || j.contains("workers");
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON in ") + config_file + ": " + e.what());
      }
    }
    cfg.command = command;
    if (!workers_given) cfg.workers = toriclab::default_workers();
    auto set = [](CLI::Option* opt, auto& field, const auto& value) {
      if (opt->count()) field = value;
    };
    set(o_orient, cfg.orientations, orientations);
    set(o_d, cfg.distances, distances);
    set(o_p, cfg.rates, rates);
    if (o_eta->count()) cfg.trials = count_value(eta, "--eta");
    if (o_chunk->count()) cfg.chunk_size = count_value(chunk, "--chunk");
    set(o_nl, cfg.neighbor_limit, neighbor_limit);
    set(o_seed, cfg.seed, seed);
    set(o_policy, cfg.policy, policy);
    set(o_op, cfg.op, op);
    set(o_ph, cfg.p_high, p_high);
    set(o_pl, cfg.p_low, p_low);
    set(o_factor, cfg.factor, factor);
    if (o_anchor->count()) cfg.anchor_trials = count_value(anchor, "--anchor-trials");
    if (o_steps->count()) cfg.steps = count_value(steps, "--steps");
    set(o_burn, cfg.burn_in, burn_in);
    set(o_thin, cfg.thinning, thinning);
    set(o_batches, cfg.batches, batches);
    set(o_lf, cfg.l_factor, l_factor);
    set(o_lh, cfg.l_hats, l_hats);
    if (o_min->count()) cfg.min_samples = count_value(min_s, "--min-samples");
    if (o_max->count()) cfg.max_samples = count_value(max_s, "--max-samples");
    set(o_rel, cfg.target_rel, target_rel);
    set(o_pth, cfg.p_th, p_th);
    set(o_c, cfg.c, c);
    set(o_xi, cfg.xi_th, xi);
    set(o_data, cfg.data, data);
    if (o_every->count()) cfg.checkpoint_every = count_value(every, "--checkpoint-every");
    set(o_workers, cfg.workers, workers);
    set(o_out, cfg.output, output);
    cfg.resume = resume;

    std::signal(SIGINT, on_interrupt);
    const int status = run(cfg, g_stop, std::cout);
    if (status == 130) diagnose("interrupted", "partial results written to " + cfg.output);
    return status;
  } catch (const ConfigError& e) {
    diagnose("config", e.what());
    return 2;
  } catch (const NumericalFailure& e) {
    diagnose("numerical", e.what());
    return 3;
  } catch (const std::exception& e) {
    diagnose("runtime", e.what());
    return 1;
  }
}
