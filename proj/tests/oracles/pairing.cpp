#include "oracles/pairing.h"

#include <limits>

namespace oracle {

namespace {

long long pair_rest(const std::vector<std::vector<long long>>& cost, std::vector<char>& used) {
  const int n = static_cast<int>(cost.size());
  int first = 0;
  while (first < n && used[first]) ++first;
  if (first == n) return 0;
  used[first] = 1;
  long long best = std::numeric_limits<long long>::max();
  for (int j = first + 1; j < n; ++j) {
    if (used[j]) continue;
    used[j] = 1;
    const long long rest = pair_rest(cost, used);
    if (rest != std::numeric_limits<long long>::max()) best = std::min(best, cost[first][j] + rest);
    used[j] = 0;
  }
  used[first] = 0;
  return best;
}

void search(int v, int n, const std::vector<std::vector<std::pair<int, long long>>>& adj,
            std::vector<char>& used, int card, long long weight, bool max_cardinality,
            std::pair<int, long long>& best) {
  while (v < n && used[v]) ++v;
  if (v == n) {
    const bool better = max_cardinality ? (card > best.first || (card == best.first && weight > best.second))
                                        : weight > best.second;
    if (better) best = {card, weight};
    return;
  }
  used[v] = 1;
  search(v + 1, n, adj, used, card, weight, max_cardinality, best);
  for (const auto& [u, w] : adj[v]) {
    if (used[u]) continue;
    used[u] = 1;
    search(v + 1, n, adj, used, card + 1, weight + w, max_cardinality, best);
    used[u] = 0;
  }
  used[v] = 0;
}

}  // namespace

long long min_pairing_cost(const std::vector<std::vector<long long>>& cost) {
  std::vector<char> used(cost.size(), 0);
  return pair_rest(cost, used);
}

std::pair<int, long long> best_matching(int num_vertices, const std::vector<toriclab::WeightedEdge>& edges,
                                        bool max_cardinality) {
  std::vector<std::vector<std::pair<int, long long>>> adj(num_vertices);
  for (const auto& e : edges) {
    adj[e.u].emplace_back(e.v, e.weight);
    adj[e.v].emplace_back(e.u, e.weight);
  }
  std::vector<char> used(num_vertices, 0);
  std::pair<int, long long> best{-1, std::numeric_limits<long long>::min()};
  search(0, num_vertices, adj, used, 0, 0, max_cardinality, best);
  return best;
}

}  // namespace oracle
