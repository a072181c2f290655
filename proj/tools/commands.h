#pragma once

#include <atomic>
#include <ostream>

#include "config.h"

namespace toriclab::cli {

// Runs one subcommand and writes its CSV files and JSON sidecar into config.output.
// Returns 0, or 130 when stop was raised and partial results were written.
int run(const ExperimentConfig& config, const std::atomic<bool>& stop, std::ostream& out);

}  // namespace toriclab::cli
