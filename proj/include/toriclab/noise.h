#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "toriclab/geometry.h"
#include "toriclab/rng.h"

namespace toriclab {

class ErrorConfig {
 public:
  ErrorConfig() = default;
  explicit ErrorConfig(int num_qubits);
  static ErrorConfig from_edges(int num_qubits, std::span<const EdgeId> edges);

  int size() const noexcept { return static_cast<int>(bits_.size()); }
  int weight() const noexcept { return weight_; }
  bool test(EdgeId e) const { return bits_.at(e) != 0; }
  void flip(EdgeId e);
  void set(EdgeId e, bool value);
  void clear();
  std::vector<EdgeId> support() const;
  const std::uint8_t* data() const noexcept { return bits_.data(); }

  ErrorConfig& operator^=(const ErrorConfig& other);
  friend ErrorConfig operator^(ErrorConfig a, const ErrorConfig& b) { return a ^= b; }
  bool operator==(const ErrorConfig& other) const { return bits_ == other.bits_; }

 private:
  std::vector<std::uint8_t> bits_;
  int weight_ = 0;
};

class NoiseParams {
 public:
  explicit NoiseParams(double p);
  double p() const noexcept { return p_; }
  double beta() const noexcept;

 private:
  double p_;
};

ErrorConfig sample_error(const CodeGeometry& geom, const NoiseParams& params, Rng& rng);
// Same distribution, written into an existing config to avoid allocation.
void sample_error_into(ErrorConfig& out, const NoiseParams& params, Rng& rng);

double log_probability(const CodeGeometry& geom, const ErrorConfig& e, const NoiseParams& params);
double log_probability(int num_qubits, int weight, double p);

}  // namespace toriclab
