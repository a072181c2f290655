#include "toriclab/matching.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace toriclab {

Syndrome extract_syndrome(const CodeGeometry& geom, const ErrorConfig& e) {
  if (e.size() != geom.num_qubits()) throw std::invalid_argument("config size mismatch");
  std::vector<char> parity(static_cast<std::size_t>(geom.num_vertices()), 0);
  const std::uint8_t* bits = e.data();
  for (EdgeId k = 0; k < e.size(); ++k) {
    if (!bits[k]) continue;
    const auto ends = geom.endpoints(k);
    parity[ends[0]] ^= 1;
    parity[ends[1]] ^= 1;
  }
  Syndrome s;
  for (VertexId v = 0; v < geom.num_vertices(); ++v) {
    if (parity[v]) s.defects.push_back(v);
  }
  return s;
}

WindingClass cut_parity(const CodeGeometry& geom, const ErrorConfig& e) {
  unsigned mask = 0;
  const std::uint8_t* bits = e.data();
  const std::uint8_t* cuts = geom.cut_masks();
  for (EdgeId k = 0; k < e.size(); ++k) {
    if (bits[k]) mask ^= cuts[k];
  }
  return WindingClass::from_bits(mask);
}

WindingClass winding_class(const CodeGeometry& geom, const ErrorConfig& cycle) {
  if (!extract_syndrome(geom, cycle).defects.empty()) {
    throw std::logic_error("winding class requested for an edge set with boundary");
  }
  return cut_parity(geom, cycle);
}

Decoder::Decoder(const CodeGeometry& geom, int neighbor_limit)
    : geom_(&geom), neighbor_limit_(neighbor_limit) {
  if (neighbor_limit < 0) throw std::invalid_argument("neighbor limit must be nonnegative");
  parity_.assign(static_cast<std::size_t>(geom.num_vertices()), 0);
}

void Decoder::build_edges(const std::vector<VertexId>& defects, bool pruned) {
  const int m = static_cast<int>(defects.size());
  const int width = geom_->width();
  edges_.clear();
  coords_.resize(2 * static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    coords_[2 * i] = defects[i] % width;
    coords_[2 * i + 1] = defects[i] / width;
  }
  auto dist = [&](int i, int j) {
    const int t = geom_->vertex_at(coords_[2 * j] - coords_[2 * i], coords_[2 * j + 1] - coords_[2 * i + 1]);
    return geom_->class_distance(t);
  };
  if (!pruned) {
    edges_.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) edges_.push_back({i, j, dist(i, j)});
    }
    return;
  }
  // Keep each defect's neighbor_limit_ nearest partners (ties by index), symmetrized.
  std::vector<std::vector<char>> keep(m, std::vector<char>(m, 0));
  order_.resize(m);
  std::vector<int> d(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) d[j] = i == j ? 0 : dist(i, j);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) { return d[a] < d[b]; });
    int taken = 0;
    for (int j : order_) {
      if (j == i) continue;
      if (taken++ >= neighbor_limit_) break;
      keep[std::min(i, j)][std::max(i, j)] = 1;
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (keep[i][j]) edges_.push_back({i, j, dist(i, j)});
    }
  }
}

void Decoder::solve(const std::vector<VertexId>& defects) {
  const int m = static_cast<int>(defects.size());
  if (m % 2 != 0) throw std::invalid_argument("odd number of defects");
  if (m == 0) {
    mate_.clear();
    return;
  }
  if (neighbor_limit_ > 0 && neighbor_limit_ + 1 < m) {
    build_edges(defects, true);
    try {
      mate_ = min_cost_perfect_matching(m, edges_, matcher_);
      return;
    } catch (const std::runtime_error&) {
      // sparse graph had no perfect matching; fall through to the complete graph
    }
  }
  build_edges(defects, false);
  mate_ = min_cost_perfect_matching(m, edges_, matcher_);
}

std::vector<VertexPair> Decoder::match(const std::vector<VertexId>& defects) {
  solve(defects);
  std::vector<VertexPair> pairs;
  for (int i = 0; i < static_cast<int>(defects.size()); ++i) {
    if (i < mate_[i]) pairs.emplace_back(defects[i], defects[mate_[i]]);
  }
  return pairs;
}

int Decoder::matching_weight(const std::vector<VertexId>& defects) {
  int total = 0;
  for (const auto& [u, v] : match(defects)) total += geom_->defect_distance(u, v);
  return total;
}

ErrorConfig Decoder::correction(const Syndrome& s) {
  ErrorConfig c(geom_->num_qubits());
  for (const auto& [u, v] : match(s.defects)) {
    for (EdgeId e : geom_->canonical_path(u, v)) c.flip(e);
  }
  return c;
}

DecodeOutcome Decoder::decode(const ErrorConfig& e) {
  const Syndrome s = extract_syndrome(*geom_, e);
  DecodeOutcome out;
  out.matched_pairs = match(s.defects);
  out.correction = ErrorConfig(geom_->num_qubits());
  for (const auto& [u, v] : out.matched_pairs) {
    for (EdgeId k : geom_->canonical_path(u, v)) out.correction.flip(k);
  }
  out.winding = winding_class(*geom_, out.correction ^ e);
  return out;
}

WindingClass Decoder::failure_class(const std::vector<VertexId>& defects, WindingClass error_cut) {
  solve(defects);
  unsigned mask = error_cut.bits();
  for (int i = 0; i < static_cast<int>(defects.size()); ++i) {
    if (i < mate_[i]) mask ^= geom_->path_cut_mask(defects[i], defects[mate_[i]]);
  }
  return WindingClass::from_bits(mask);
}

WindingClass Decoder::failure_class(const ErrorConfig& e) {
  const std::uint8_t* bits = e.data();
  const std::uint8_t* cuts = geom_->cut_masks();
  unsigned mask = 0;
  defects_.clear();
  for (EdgeId k = 0; k < e.size(); ++k) {
    if (!bits[k]) continue;
    mask ^= cuts[k];
    const auto ends = geom_->endpoints(k);
    parity_[ends[0]] ^= 1;
    parity_[ends[1]] ^= 1;
    defects_.push_back(ends[0]);
    defects_.push_back(ends[1]);
  }
  std::sort(defects_.begin(), defects_.end());
  defects_.erase(std::unique(defects_.begin(), defects_.end()), defects_.end());
  std::erase_if(defects_, [&](VertexId v) {
    const bool odd = parity_[v] != 0;
    parity_[v] = 0;
    return !odd;
  });
  return failure_class(defects_, WindingClass::from_bits(mask));
}

ErrorConfig mwpm_correction(const CodeGeometry& geom, const Syndrome& s) {
  Decoder decoder(geom);
  return decoder.correction(s);
}

DecodeOutcome decode(const CodeGeometry& geom, const ErrorConfig& e) {
  Decoder decoder(geom);
  return decoder.decode(e);
}

}  // namespace toriclab
