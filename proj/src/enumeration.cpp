#include "toriclab/enumeration.h"

#include <algorithm>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>

#include "toriclab/matching.h"
#include "toriclab/parallel.h"

namespace toriclab {

namespace {

struct SyndromeKey {
  std::uint64_t lo;
  std::uint64_t hi;  // upper defect bits shifted left by 2; low 2 bits hold the class label

  std::uint64_t group_hi() const noexcept { return hi >> 2; }
  unsigned label() const noexcept { return static_cast<unsigned>(hi & 3U); }
};

struct EdgeMask {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  unsigned cut = 0;
};

std::vector<EdgeMask> edge_masks(const CodeGeometry& geom) {
  if (geom.num_vertices() > 126) {
    throw std::length_error("enumeration supports at most 126 defect vertices");
  }
  std::vector<EdgeMask> out(static_cast<std::size_t>(geom.num_qubits()));
  for (EdgeId e = 0; e < geom.num_qubits(); ++e) {
    for (VertexId v : geom.endpoints(e)) {
      if (v < 64) {
        out[e].lo ^= 1ULL << v;
      } else {
        out[e].hi ^= 1ULL << (v - 64);
      }
    }
    out[e].cut = geom.cut_mask(e);
  }
  return out;
}

// Visits every weight-w edge subset whose smallest edge is `first`.
template <typename F>
void visit_chunk(const std::vector<EdgeMask>& masks, int weight, int first, F&& emit) {
  const int n = static_cast<int>(masks.size());
  std::vector<int> idx(static_cast<std::size_t>(weight));
  std::vector<EdgeMask> acc(static_cast<std::size_t>(weight) + 1);
  idx[0] = first;
  acc[1] = masks[first];
  int depth = 1;
  if (weight == 1) {
    emit(acc[1]);
    return;
  }
  idx[1] = first;
  while (depth >= 1) {
    ++idx[depth];
    if (idx[depth] > n - weight + depth) {
      --depth;
      continue;
    }
    const EdgeMask& m = masks[idx[depth]];
    acc[depth + 1] = {acc[depth].lo ^ m.lo, acc[depth].hi ^ m.hi, acc[depth].cut ^ m.cut};
    if (depth + 1 == weight) {
      emit(acc[depth + 1]);
    } else {
      ++depth;
      idx[depth] = idx[depth - 1];
    }
  }
}

void check_guard(const CodeGeometry& geom, int weight, const EnumerationOptions& options) {
  if (weight < 0 || weight > geom.num_qubits()) throw std::invalid_argument("weight out of range");
  const std::uint64_t count = combination_count(geom.num_qubits(), weight);
  if (count > options.max_combinations) {
    throw std::length_error("enumeration of " + std::to_string(count) + " configurations exceeds the guard");
  }
}

std::vector<VertexId> defects_of(const EdgeMask& m) {
  std::vector<VertexId> out;
  for (std::uint64_t bits = m.lo; bits; bits &= bits - 1) out.push_back(__builtin_ctzll(bits));
  for (std::uint64_t bits = m.hi; bits; bits &= bits - 1) out.push_back(64 + __builtin_ctzll(bits));
  return out;
}

}  // namespace

std::string_view to_string(DecoderPolicy policy) {
  switch (policy) {
    case DecoderPolicy::implemented: return "implemented";
    case DecoderPolicy::best: return "best";
    default: return "worst";
  }
}

DecoderPolicy parse_policy(std::string_view text) {
  if (text == "implemented") return DecoderPolicy::implemented;
  if (text == "best") return DecoderPolicy::best;
  if (text == "worst") return DecoderPolicy::worst;
  throw std::invalid_argument("unknown decoder policy '" + std::string(text) + "'");
}

TallyResult::TallyResult(Orientation orientation, int distance, DecoderPolicy policy)
    : orientation_(orientation), distance_(distance), policy_(policy) {}

void TallyResult::add(int weight, WindingClass c, std::uint64_t count) {
  counts_[weight][c.bits()] += count;
}

std::uint64_t TallyResult::count(int weight, WindingClass c) const {
  const auto it = counts_.find(weight);
  return it == counts_.end() ? 0 : it->second[c.bits()];
}

std::uint64_t TallyResult::failures(int weight) const {
  const auto it = counts_.find(weight);
  return it == counts_.end() ? 0 : it->second[1] + it->second[2] + it->second[3];
}

std::uint64_t TallyResult::axis_failures(int weight) const {
  const auto it = counts_.find(weight);
  return it == counts_.end() ? 0 : it->second[1] + it->second[2];
}

std::uint64_t TallyResult::total(int weight) const {
  const auto it = counts_.find(weight);
  return it == counts_.end() ? 0 : failures(weight) + it->second[0];
}

std::vector<int> TallyResult::weights() const {
  std::vector<int> out;
  for (const auto& kv : counts_) out.push_back(kv.first);
  return out;
}

void TallyResult::merge(const TallyResult& other) {
  if (other.orientation_ != orientation_ || other.distance_ != distance_ || other.policy_ != policy_) {
    throw std::invalid_argument("cannot merge tallies of different experiments");
  }
  for (const auto& [w, c] : other.counts_) {
    for (unsigned k = 0; k < 4; ++k) counts_[w][k] += c[k];
  }
}

ClassCounts CosetReport::sorted_sizes(const ClassCounts& m) {
  ClassCounts s = m;
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

std::uint64_t combination_count(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > ~0ULL) return ~0ULL;
  }
  return static_cast<std::uint64_t>(r);
}

CosetReport coset_report(const CodeGeometry& geom, int weight, const EnumerationOptions& options) {
  check_guard(geom, weight, options);
  const auto masks = edge_masks(geom);
  CosetReport report;
  report.weight = weight;
  std::vector<SyndromeKey> keys;
  keys.reserve(combination_count(geom.num_qubits(), weight));
  auto push = [&](const EdgeMask& m) { keys.push_back({m.lo, (m.hi << 2) | m.cut}); };
  if (weight == 0) {
    push(EdgeMask{});
  } else {
    for (int first = 0; first <= geom.num_qubits() - weight; ++first) visit_chunk(masks, weight, first, push);
  }
  std::sort(keys.begin(), keys.end(), [](const SyndromeKey& a, const SyndromeKey& b) {
    if (a.group_hi() != b.group_hi()) return a.group_hi() < b.group_hi();
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.label() < b.label();
  });
  report.total_errors = keys.size();
  std::size_t i = 0;
  while (i < keys.size()) {
    ClassCounts m{};
    std::size_t j = i;
    while (j < keys.size() && keys[j].lo == keys[i].lo && keys[j].group_hi() == keys[i].group_hi()) {
      ++m[keys[j].label()];
      ++j;
    }
    ++report.syndromes;
    const int classes = static_cast<int>(std::count_if(m.begin(), m.end(), [](auto x) { return x > 0; }));
    if (classes == 1) {
      ++report.single_class_syndromes;
      report.single_class_errors += j - i;
    } else {
      report.ambiguous.push_back(m);
    }
    i = j;
  }
  return report;
}

TallyResult tally_from_report(const CodeGeometry& geom, const CosetReport& report, DecoderPolicy policy) {
  if (policy == DecoderPolicy::implemented) {
    throw std::invalid_argument("the implemented decoder is not determined by coset sizes");
  }
  TallyResult tally(geom.orientation(), geom.distance(), policy);
  std::uint64_t failed = 0;
  for (const ClassCounts& m : report.ambiguous) {
    unsigned chosen = 4;
    for (unsigned j = 0; j < 4; ++j) {
      if (m[j] == 0) continue;
      if (chosen == 4) {
        chosen = j;
      } else if (policy == DecoderPolicy::best ? m[j] > m[chosen] : m[j] < m[chosen]) {
        chosen = j;
      }
    }
    for (unsigned j = 0; j < 4; ++j) {
      if (j == chosen || m[j] == 0) continue;
      tally.add(report.weight, WindingClass::from_bits(j ^ chosen), m[j]);
      failed += m[j];
    }
  }
  tally.add(report.weight, WindingClass{}, report.total_errors - failed);
  return tally;
}

TallyResult enumerate_failures(const CodeGeometry& geom, int weight, DecoderPolicy policy,
                               const EnumerationOptions& options) {
  if (policy != DecoderPolicy::implemented) {
    return tally_from_report(geom, coset_report(geom, weight, options), policy);
  }
  check_guard(geom, weight, options);
  const auto masks = edge_masks(geom);
  TallyResult tally(geom.orientation(), geom.distance(), policy);
  if (weight == 0) {
    tally.add(0, WindingClass{}, 1);
    return tally;
  }
  const int workers = std::max(1, options.workers);
  std::vector<std::unique_ptr<Decoder>> decoders;
  std::vector<TallyResult> partial;
  for (int w = 0; w < workers; ++w) {
    decoders.push_back(std::make_unique<Decoder>(geom));
    partial.emplace_back(geom.orientation(), geom.distance(), policy);
  }
  const std::size_t chunks = static_cast<std::size_t>(geom.num_qubits() - weight + 1);
  parallel_for_chunks(chunks, workers, [&](std::size_t chunk, int worker) {
    ClassCounts local{};
    Decoder& dec = *decoders[worker];
    visit_chunk(masks, weight, static_cast<int>(chunk), [&](const EdgeMask& m) {
      ++local[dec.failure_class(defects_of(m), WindingClass::from_bits(m.cut)).bits()];
    });
    for (unsigned k = 0; k < 4; ++k) {
      if (local[k]) partial[worker].add(weight, WindingClass::from_bits(k), local[k]);
    }
  });
  for (const auto& p : partial) tally.merge(p);
  if (!tally.has_weight(weight)) tally.add(weight, WindingClass{}, 0);
  return tally;
}

double random_decoder_expectation(const CosetReport& report) {
  double expected = 0.0;
  for (const ClassCounts& m : report.ambiguous) {
    const double total = static_cast<double>(std::accumulate(m.begin(), m.end(), std::uint64_t{0}));
    double sq = 0.0;
    for (auto x : m) sq += (static_cast<double>(x) / total) * (static_cast<double>(x) / total);
    expected += (1.0 - sq) * total;
  }
  return expected;
}

}  // namespace toriclab
