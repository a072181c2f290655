#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "toriclab/geometry.h"

namespace toriclab {

enum class DecoderPolicy { implemented, best, worst };

std::string_view to_string(DecoderPolicy policy);
DecoderPolicy parse_policy(std::string_view text);

using ClassCounts = std::array<std::uint64_t, 4>;  // indexed by WindingClass::bits()

class TallyResult {
 public:
  TallyResult(Orientation orientation, int distance, DecoderPolicy policy);

  Orientation orientation() const noexcept { return orientation_; }
  int distance() const noexcept { return distance_; }
  DecoderPolicy policy() const noexcept { return policy_; }

  void add(int weight, WindingClass c, std::uint64_t count);
  std::uint64_t count(int weight, WindingClass c) const;
  std::uint64_t failures(int weight) const;
  std::uint64_t total(int weight) const;
  // Horizontal plus vertical failures, the quantity quoted without a diagonal split.
  std::uint64_t axis_failures(int weight) const;
  std::vector<int> weights() const;
  bool has_weight(int weight) const { return counts_.count(weight) != 0; }
  void merge(const TallyResult& other);

 private:
  Orientation orientation_;
  int distance_;
  DecoderPolicy policy_;
  std::map<int, ClassCounts> counts_;
};

// Minimum-weight errors grouped by syndrome and split by the crossing parity of the
// error itself. Syndromes with a single class cannot cause ambiguity and are kept only
// as totals.
struct CosetReport {
  int weight = 0;
  std::uint64_t total_errors = 0;
  std::uint64_t syndromes = 0;
  std::uint64_t single_class_syndromes = 0;
  std::uint64_t single_class_errors = 0;
  std::vector<ClassCounts> ambiguous;

  // M1 >= M2 >= M3 >= M4 for one entry.
  static ClassCounts sorted_sizes(const ClassCounts& m);
};

struct EnumerationOptions {
  int workers = 1;
  std::uint64_t max_combinations = 100'000'000;
};

std::uint64_t combination_count(int n, int k);

CosetReport coset_report(const CodeGeometry& geom, int weight, const EnumerationOptions& options = {});
TallyResult tally_from_report(const CodeGeometry& geom, const CosetReport& report, DecoderPolicy policy);
TallyResult enumerate_failures(const CodeGeometry& geom, int weight, DecoderPolicy policy,
                               const EnumerationOptions& options = {});
double random_decoder_expectation(const CosetReport& report);

}  // namespace toriclab
