#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace toriclab {

struct WeightedEdge {
  int u = 0;
  int v = 0;
  long long weight = 0;
};

// Maximum-weight matching on a general graph by Edmonds' blossom algorithm with
// integer dual variables (O(V^3) on dense graphs). Buffers are kept between calls so a
// single instance can serve many small problems on one thread.
class MaxWeightMatcher {
 public:
  // Returns mate[v] (or -1). With max_cardinality set, the result is the heaviest
  // among the matchings of maximum cardinality.
  const std::vector<int>& solve(int num_vertices, std::span<const WeightedEdge> edges,
                                bool max_cardinality);

 private:
  long long slack(int k) const;
  template <typename F>
  void for_each_leaf(int b, F&& f) const;
  void assign_label(int w, int t, int p);
  int scan_blossom(int v, int w);
  void add_blossom(int base, int k);
  void expand_blossom(int b, bool endstage);
  void augment_blossom(int b, int v);
  void augment_matching(int k);
  int endpoint(int p) const { return (p & 1) ? edges_[p / 2].v : edges_[p / 2].u; }

  int nv_ = 0;
  std::span<const WeightedEdge> edges_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_;
  std::vector<int> label_;
  std::vector<int> labelend_;
  std::vector<int> inblossom_;
  std::vector<int> blossomparent_;
  std::vector<std::vector<int>> blossomchilds_;
  std::vector<int> blossombase_;
  std::vector<std::vector<int>> blossomendps_;
  std::vector<int> bestedge_;
  std::vector<std::vector<int>> blossombestedges_;
  std::vector<char> has_bestedges_;
  std::vector<int> unusedblossoms_;
  std::vector<long long> dualvar_;
  std::vector<char> allowedge_;
  std::vector<int> queue_;
  std::vector<int> bestedgeto_;
  std::vector<int> result_;
};

// Minimum-cost perfect matching; throws std::runtime_error if none exists.
std::vector<int> min_cost_perfect_matching(int num_vertices, std::span<const WeightedEdge> costs,
                                           MaxWeightMatcher& matcher);

}  // namespace toriclab
