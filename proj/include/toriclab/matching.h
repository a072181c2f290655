#pragma once

#include <utility>
#include <vector>

#include "toriclab/blossom.h"
#include "toriclab/geometry.h"
#include "toriclab/noise.h"

namespace toriclab {

struct Syndrome {
  std::vector<VertexId> defects;  // sorted
};

using VertexPair = std::pair<VertexId, VertexId>;

struct DecodeOutcome {
  ErrorConfig correction;
  WindingClass winding;
  std::vector<VertexPair> matched_pairs;

  bool failed() const noexcept { return !winding.trivial(); }
};

Syndrome extract_syndrome(const CodeGeometry& geom, const ErrorConfig& e);
WindingClass winding_class(const CodeGeometry& geom, const ErrorConfig& cycle);
// Crossing parities of an arbitrary edge set; no syndrome check.
WindingClass cut_parity(const CodeGeometry& geom, const ErrorConfig& e);

// Reusable decoding workspace. Not thread-safe; use one per worker.
class Decoder {
 public:
  explicit Decoder(const CodeGeometry& geom, int neighbor_limit = 0);

  const CodeGeometry& geometry() const noexcept { return *geom_; }

  // Minimum total-distance pairing of the defects (pairs as vertex ids).
  std::vector<VertexPair> match(const std::vector<VertexId>& defects);
  int matching_weight(const std::vector<VertexId>& defects);
  ErrorConfig correction(const Syndrome& s);
  DecodeOutcome decode(const ErrorConfig& e);
  // Winding class of C*E only; skips building the correction.
  WindingClass failure_class(const ErrorConfig& e);
  WindingClass failure_class(const std::vector<VertexId>& defects, WindingClass error_cut);

 private:
  void solve(const std::vector<VertexId>& defects);
  void build_edges(const std::vector<VertexId>& defects, bool pruned);

  const CodeGeometry* geom_;
  int neighbor_limit_;
  MaxWeightMatcher matcher_;
  std::vector<WeightedEdge> edges_;
  std::vector<int> mate_;
  std::vector<int> coords_;
  std::vector<int> order_;
  std::vector<char> parity_;
  std::vector<VertexId> defects_;
};

ErrorConfig mwpm_correction(const CodeGeometry& geom, const Syndrome& s);
DecodeOutcome decode(const CodeGeometry& geom, const ErrorConfig& e);

}  // namespace toriclab
