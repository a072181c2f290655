#include "config.h"

#include <algorithm>
#include <set>

#include "toriclab/enumeration.h"
#include "toriclab/geometry.h"

namespace toriclab::cli {

namespace {

const std::set<std::string> kCommands{"enumerate", "pathcount", "mc", "threshold", "split", "walks", "model", "verify"};
const std::set<std::string> kModelOps{"threshold-bound", "critical-p", "xi", "bound"};

void check(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void ExperimentConfig::validate() const {
  check(kCommands.count(command) != 0, "unknown command '" + command + "'");
  for (const auto& o : orientations) {
    try {
      parse_orientation(o);
    } catch (const std::exception&) {
      throw ConfigError("unknown orientation '" + o + "'");
    }
  }
  check(!orientations.empty(), "need at least one orientation");
  for (int d : distances) check(d >= 2 && d % 2 == 0, "distances must be even and at least 2");
  for (double p : rates) check(p > 0.0 && p < 0.5, "error rates must lie in (0, 1/2)");
  check(trials >= 1, "trials must be at least 1");
  check(chunk_size >= 1, "chunk size must be at least 1");
  check(neighbor_limit >= 0, "neighbor limit must be non-negative");
  if (policy != "all") {
    try {
      parse_policy(policy);
    } catch (const std::exception&) {
      throw ConfigError("unknown policy '" + policy + "'");
    }
  }
  check(p_low > 0.0 && p_high < 0.5 && p_low < p_high, "need 0 < p_low < p_high < 1/2");
  check(factor > 1.0, "schedule factor must exceed 1");
  check(anchor_trials >= 1 && steps >= 1, "sample budgets must be positive");
  check(burn_in >= 0.0 && burn_in < 1.0, "burn-in fraction must be in [0, 1)");
  check(thinning >= 0 && batches >= 2, "thinning must be >= 0 and batches >= 2");
  check(l_factor >= 1.0, "l factor must be at least 1");
  check(min_samples >= 1 && max_samples >= min_samples, "need 1 <= min samples <= max samples");
  check(target_rel >= 0.0, "target relative error must be non-negative");
  check(c > 0.0 && xi_th > 0.0, "c and xi must be positive");
  check(p_th > 0.0 && p_th < 0.5, "p_th must lie in (0, 1/2)");
  check(workers >= 1, "workers must be at least 1");
  if (command == "model") check(kModelOps.count(op) != 0, "model needs --op threshold-bound|critical-p|xi|bound");
  if (command == "mc" || command == "threshold" || command == "split" || command == "walks" || command == "enumerate") {
    check(!distances.empty(), command + " needs at least one distance");
  }
  if (command == "mc") check(!rates.empty(), "mc needs at least one error rate");
  if (command == "model" && op == "xi") check(!data.empty() && distances.size() == 1 && orientations.size() == 1,
                                              "model --op xi needs --data files and one orientation and distance");
  if (command == "model" && op == "bound") check(distances.size() == 1 && orientations.size() == 1 && !rates.empty(),
                                                 "model --op bound needs one orientation, one distance and --p");
}

nlohmann::json to_json(const ExperimentConfig& c) {
  return nlohmann::json{{"command", c.command},
                        {"orientations", c.orientations},
                        {"distances", c.distances},
                        {"rates", c.rates},
                        {"trials", c.trials},
                        {"chunk_size", c.chunk_size},
                        {"neighbor_limit", c.neighbor_limit},
                        {"seed", c.seed},
                        {"policy", c.policy},
                        {"op", c.op},
                        {"p_high", c.p_high},
                        {"p_low", c.p_low},
                        {"factor", c.factor},
                        {"anchor_trials", c.anchor_trials},
                        {"steps", c.steps},
                        {"burn_in", c.burn_in},
                        {"thinning", c.thinning},
                        {"batches", c.batches},
                        {"l_factor", c.l_factor},
                        {"l_hats", c.l_hats},
                        {"min_samples", c.min_samples},
                        {"max_samples", c.max_samples},
                        {"target_rel", c.target_rel},
                        {"p_th", c.p_th},
                        {"c", c.c},
                        {"xi_th", c.xi_th},
                        {"data", c.data},
                        {"checkpoint_every", c.checkpoint_every}};
}

ExperimentConfig from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  ExperimentConfig c;
  const auto known = to_json(c);
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key) && key != "workers" && key != "output") throw ConfigError("unknown configuration key '" + key + "'");
  }
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    get("command", c.command);
    get("orientations", c.orientations);
    get("distances", c.distances);
    get("rates", c.rates);
    get("trials", c.trials);
    get("chunk_size", c.chunk_size);
    get("neighbor_limit", c.neighbor_limit);
    get("seed", c.seed);
    get("policy", c.policy);
    get("op", c.op);
    get("p_high", c.p_high);
    get("p_low", c.p_low);
    get("factor", c.factor);
    get("anchor_trials", c.anchor_trials);
    get("steps", c.steps);
    get("burn_in", c.burn_in);
    get("thinning", c.thinning);
    get("batches", c.batches);
    get("l_factor", c.l_factor);
    get("l_hats", c.l_hats);
    get("min_samples", c.min_samples);
    get("max_samples", c.max_samples);
    get("target_rel", c.target_rel);
    get("p_th", c.p_th);
    get("c", c.c);
    get("xi_th", c.xi_th);
    get("data", c.data);
    get("checkpoint_every", c.checkpoint_every);
    get("workers", c.workers);
    get("output", c.output);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  }
  return c;
}

}  // namespace toriclab::cli
