#include "toriclab/noise.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace toriclab {

ErrorConfig::ErrorConfig(int num_qubits) {
  if (num_qubits < 0) throw std::invalid_argument("negative qubit count");
  bits_.assign(static_cast<std::size_t>(num_qubits), 0);
}

ErrorConfig ErrorConfig::from_edges(int num_qubits, std::span<const EdgeId> edges) {
  ErrorConfig out(num_qubits);
  for (EdgeId e : edges) out.flip(e);
  return out;
}

void ErrorConfig::flip(EdgeId e) {
  std::uint8_t& b = bits_.at(e);
  b ^= 1U;
  weight_ += b ? 1 : -1;
}

void ErrorConfig::set(EdgeId e, bool value) {
  if (test(e) != value) flip(e);
}

void ErrorConfig::clear() {
  std::fill(bits_.begin(), bits_.end(), 0);
  weight_ = 0;
}

std::vector<EdgeId> ErrorConfig::support() const {
  std::vector<EdgeId> out;
  out.reserve(static_cast<std::size_t>(weight_));
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out.push_back(static_cast<EdgeId>(i));
  }
  return out;
}

ErrorConfig& ErrorConfig::operator^=(const ErrorConfig& other) {
  if (other.size() != size()) throw std::invalid_argument("config size mismatch");
  weight_ = 0;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    bits_[i] ^= other.bits_[i];
    weight_ += bits_[i];
  }
  return *this;
}

NoiseParams::NoiseParams(double p) : p_(p) {
  if (!(p >= 0.0 && p < 0.5)) throw std::invalid_argument("p must lie in [0, 1/2)");
}

double NoiseParams::beta() const noexcept {
  if (p_ == 0.0) return std::numeric_limits<double>::infinity();
  return std::log((1.0 - p_) / p_);
}

void sample_error_into(ErrorConfig& out, const NoiseParams& params, Rng& rng) {
  out.clear();
  const double p = params.p();
  if (p == 0.0) return;
  // Geometric gaps between flipped qubits.
  const double log_q = std::log1p(-p);
  const long long n = out.size();
  long long pos = -1;
  while (true) {
    const double u = 1.0 - uniform01(rng);
    const double gap = std::floor(std::log(u) / log_q);
    if (gap >= static_cast<double>(n)) break;
    pos += 1 + static_cast<long long>(gap);
    if (pos >= n) break;
    out.flip(static_cast<EdgeId>(pos));
  }
}

ErrorConfig sample_error(const CodeGeometry& geom, const NoiseParams& params, Rng& rng) {
  ErrorConfig out(geom.num_qubits());
  sample_error_into(out, params, rng);
  return out;
}

double log_probability(int num_qubits, int weight, double p) {
  if (!(p >= 0.0 && p < 0.5)) throw std::invalid_argument("p must lie in [0, 1/2)");
  if (p == 0.0) return weight > 0 ? -std::numeric_limits<double>::infinity() : 0.0;
  return (num_qubits - weight) * std::log1p(-p) + weight * std::log(p);
}

double log_probability(const CodeGeometry& geom, const ErrorConfig& e, const NoiseParams& params) {
  if (e.size() != geom.num_qubits()) throw std::invalid_argument("config size mismatch");
  return log_probability(geom.num_qubits(), e.weight(), params.p());
}

}  // namespace toriclab
