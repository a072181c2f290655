#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace toriclab::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a computation finishes without a usable answer.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string command;
  std::vector<std::string> orientations{"rotated"};
  std::vector<int> distances;
  std::vector<double> rates;
  std::uint64_t trials = 100'000;
  std::uint64_t chunk_size = 1000;
  int neighbor_limit = 0;
  std::uint64_t seed = 1;
  std::string policy = "all";
  std::string op;
  double p_high = 0.06;
  double p_low = 2e-4;
  double factor = 2.0;
  std::uint64_t anchor_trials = 200'000;
  std::uint64_t steps = 10'000'000;
  double burn_in = 0.05;
  int thinning = 0;
  int batches = 32;
  double l_factor = 3.0;
  std::vector<double> l_hats;
  std::uint64_t min_samples = 20'000;
  std::uint64_t max_samples = 20'000'000;
  double target_rel = 0.02;
  double p_th = 0.1035;
  double c = 2.638;
  double xi_th = 1.2471;
  std::vector<std::string> data;
  std::uint64_t checkpoint_every = 0;

  // Execution settings; not part of the recorded configuration.
  int workers = 1;
  std::string output = ".";
  bool resume = false;

  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
// Unknown keys are rejected; missing keys keep their defaults.
ExperimentConfig from_json(const nlohmann::json& j);

}  // namespace toriclab::cli
