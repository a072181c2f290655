#include "toriclab/blossom.h"

#include <algorithm>
#include <stdexcept>

namespace toriclab {

namespace {

int wrap_index(int j, int len) { return j < 0 ? j + len : j; }

}  // namespace

long long MaxWeightMatcher::slack(int k) const {
  const WeightedEdge& e = edges_[k];
  return dualvar_[e.u] + dualvar_[e.v] - 2 * e.weight;
}

template <typename F>
void MaxWeightMatcher::for_each_leaf(int b, F&& f) const {
  if (b < nv_) {
    f(b);
    return;
  }
  for (int t : blossomchilds_[b]) {
    if (t < nv_) {
      f(t);
    } else {
      for_each_leaf(t, f);
    }
  }
}

void MaxWeightMatcher::assign_label(int w, int t, int p) {
  const int b = inblossom_[w];
  label_[w] = label_[b] = t;
  labelend_[w] = labelend_[b] = p;
  bestedge_[w] = bestedge_[b] = -1;
  if (t == 1) {
    for_each_leaf(b, [this](int v) { queue_.push_back(v); });
  } else if (t == 2) {
    const int base = blossombase_[b];
    assign_label(endpoint(mate_[base]), 1, mate_[base] ^ 1);
  }
}

int MaxWeightMatcher::scan_blossom(int v, int w) {
  std::vector<int> path;
  int base = -1;
  while (v != -1 || w != -1) {
    int b = inblossom_[v];
    if (label_[b] & 4) {
      base = blossombase_[b];
      break;
    }
    path.push_back(b);
    label_[b] = 5;
    if (labelend_[b] == -1) {
      v = -1;
    } else {
      v = endpoint(labelend_[b]);
      b = inblossom_[v];
      v = endpoint(labelend_[b]);
    }
    if (w != -1) std::swap(v, w);
  }
  for (int b : path) label_[b] = 1;
  return base;
}

void MaxWeightMatcher::add_blossom(int base, int k) {
  int v = edges_[k].u;
  int w = edges_[k].v;
  const int bb = inblossom_[base];
  int bv = inblossom_[v];
  int bw = inblossom_[w];
  const int b = unusedblossoms_.back();
  unusedblossoms_.pop_back();
  blossombase_[b] = base;
  blossomparent_[b] = -1;
  blossomparent_[bb] = b;
  std::vector<int>& path = blossomchilds_[b];
  std::vector<int>& endps = blossomendps_[b];
  path.clear();
  endps.clear();
  while (bv != bb) {
    blossomparent_[bv] = b;
    path.push_back(bv);
    endps.push_back(labelend_[bv]);
    v = endpoint(labelend_[bv]);
    bv = inblossom_[v];
  }
  path.push_back(bb);
  std::reverse(path.begin(), path.end());
  std::reverse(endps.begin(), endps.end());
  endps.push_back(2 * k);
  while (bw != bb) {
    blossomparent_[bw] = b;
    path.push_back(bw);
    endps.push_back(labelend_[bw] ^ 1);
    w = endpoint(labelend_[bw]);
    bw = inblossom_[w];
  }
  label_[b] = 1;
  labelend_[b] = labelend_[bb];
  dualvar_[b] = 0;
  for_each_leaf(b, [&](int leaf) {
    if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
    inblossom_[leaf] = b;
  });

  std::fill(bestedgeto_.begin(), bestedgeto_.end(), -1);
  auto consider = [&](int kk) {
    int i = edges_[kk].u;
    int j = edges_[kk].v;
    if (inblossom_[j] == b) std::swap(i, j);
    const int bj = inblossom_[j];
    if (bj != b && label_[bj] == 1 &&
        (bestedgeto_[bj] == -1 || slack(kk) < slack(bestedgeto_[bj]))) {
      bestedgeto_[bj] = kk;
    }
  };
  for (int child : path) {
    if (!has_bestedges_[child]) {
      for_each_leaf(child, [&](int leaf) {
        for (int p : neighbend_[leaf]) consider(p / 2);
      });
    } else {
      for (int kk : blossombestedges_[child]) consider(kk);
    }
    blossombestedges_[child].clear();
    has_bestedges_[child] = 0;
    bestedge_[child] = -1;
  }
  std::vector<int>& best = blossombestedges_[b];
  best.clear();
  for (int kk : bestedgeto_) {
    if (kk != -1) best.push_back(kk);
  }
  has_bestedges_[b] = 1;
  bestedge_[b] = -1;
  for (int kk : best) {
    if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
  }
}

void MaxWeightMatcher::expand_blossom(int b, bool endstage) {
  const std::vector<int> childs = blossomchilds_[b];
  for (int s : childs) {
    blossomparent_[s] = -1;
    if (s < nv_) {
      inblossom_[s] = s;
    } else if (endstage && dualvar_[s] == 0) {
      expand_blossom(s, endstage);
    } else {
      for_each_leaf(s, [&](int leaf) { inblossom_[leaf] = s; });
    }
  }
  if (!endstage && label_[b] == 2) {
    const std::vector<int>& endps = blossomendps_[b];
    const int len = static_cast<int>(childs.size());
    const int entrychild = inblossom_[endpoint(labelend_[b] ^ 1)];
    int j = static_cast<int>(std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
    int jstep = 0;
    int endptrick = 0;
    if (j & 1) {
      j -= len;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    int p = labelend_[b];
    while (j != 0) {
      label_[endpoint(p ^ 1)] = 0;
      const int ep = endps[wrap_index(j - endptrick, len)];
      label_[endpoint(ep ^ endptrick ^ 1)] = 0;
      assign_label(endpoint(p ^ 1), 2, p);
      allowedge_[ep / 2] = 1;
      j += jstep;
      p = endps[wrap_index(j - endptrick, len)] ^ endptrick;
      allowedge_[p / 2] = 1;
      j += jstep;
    }
    int bv = childs[wrap_index(j, len)];
    label_[endpoint(p ^ 1)] = label_[bv] = 2;
    labelend_[endpoint(p ^ 1)] = labelend_[bv] = p;
    bestedge_[bv] = -1;
    j += jstep;
    while (childs[wrap_index(j, len)] != entrychild) {
      bv = childs[wrap_index(j, len)];
      if (label_[bv] == 1) {
        j += jstep;
        continue;
      }
      int labeled = -1;
      bool stop = false;
      for_each_leaf(bv, [&](int leaf) {
        if (!stop && label_[leaf] != 0) {
          labeled = leaf;
          stop = true;
        }
      });
      if (labeled != -1) {
        label_[labeled] = 0;
        label_[endpoint(mate_[blossombase_[bv]])] = 0;
        assign_label(labeled, 2, labelend_[labeled]);
      }
      j += jstep;
    }
  }
  label_[b] = labelend_[b] = -1;
  blossomchilds_[b].clear();
  blossomendps_[b].clear();
  blossombase_[b] = -1;
  blossombestedges_[b].clear();
  has_bestedges_[b] = 0;
  bestedge_[b] = -1;
  unusedblossoms_.push_back(b);
}

void MaxWeightMatcher::augment_blossom(int b, int v) {
  int t = v;
  while (blossomparent_[t] != b) t = blossomparent_[t];
  if (t >= nv_) augment_blossom(t, v);
  std::vector<int>& childs = blossomchilds_[b];
  std::vector<int>& endps = blossomendps_[b];
  const int len = static_cast<int>(childs.size());
  const int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) - childs.begin());
  int j = i;
  int jstep = 0;
  int endptrick = 0;
  if (i & 1) {
    j -= len;
    jstep = 1;
    endptrick = 0;
  } else {
    jstep = -1;
    endptrick = 1;
  }
  while (j != 0) {
    j += jstep;
    t = childs[wrap_index(j, len)];
    const int p = endps[wrap_index(j - endptrick, len)] ^ endptrick;
    if (t >= nv_) augment_blossom(t, endpoint(p));
    j += jstep;
    t = childs[wrap_index(j, len)];
    if (t >= nv_) augment_blossom(t, endpoint(p ^ 1));
    mate_[endpoint(p)] = p ^ 1;
    mate_[endpoint(p ^ 1)] = p;
  }
  std::rotate(childs.begin(), childs.begin() + i, childs.end());
  std::rotate(endps.begin(), endps.begin() + i, endps.end());
  blossombase_[b] = blossombase_[childs[0]];
}

void MaxWeightMatcher::augment_matching(int k) {
  const int ends[2][2] = {{edges_[k].u, 2 * k + 1}, {edges_[k].v, 2 * k}};
  for (const auto& start : ends) {
    int s = start[0];
    int p = start[1];
    while (true) {
      const int bs = inblossom_[s];
      if (bs >= nv_) augment_blossom(bs, s);
      mate_[s] = p;
      if (labelend_[bs] == -1) break;
      const int t = endpoint(labelend_[bs]);
      const int bt = inblossom_[t];
      s = endpoint(labelend_[bt]);
      const int j = endpoint(labelend_[bt] ^ 1);
      if (bt >= nv_) augment_blossom(bt, j);
      mate_[j] = labelend_[bt];
      p = labelend_[bt] ^ 1;
    }
  }
}

const std::vector<int>& MaxWeightMatcher::solve(int num_vertices, std::span<const WeightedEdge> edges,
                                                bool max_cardinality) {
  nv_ = num_vertices;
  edges_ = edges;
  const int n = nv_;
  const int nedge = static_cast<int>(edges.size());
  result_.assign(static_cast<std::size_t>(n), -1);
  if (n == 0 || nedge == 0) return result_;

  long long maxweight = 0;
  for (const WeightedEdge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n || e.u == e.v) {
      throw std::invalid_argument("invalid matching edge");
    }
    maxweight = std::max(maxweight, e.weight);
  }

  neighbend_.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) neighbend_[v].clear();
  for (int k = 0; k < nedge; ++k) {
    neighbend_[edges[k].u].push_back(2 * k + 1);
    neighbend_[edges[k].v].push_back(2 * k);
  }
  mate_.assign(n, -1);
  label_.assign(2 * n, 0);
  labelend_.assign(2 * n, -1);
  inblossom_.resize(n);
  for (int v = 0; v < n; ++v) inblossom_[v] = v;
  blossomparent_.assign(2 * n, -1);
  blossomchilds_.resize(2 * n);
  blossomendps_.resize(2 * n);
  blossombestedges_.resize(2 * n);
  for (int b = 0; b < 2 * n; ++b) {
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombestedges_[b].clear();
  }
  has_bestedges_.assign(2 * n, 0);
  blossombase_.assign(2 * n, -1);
  for (int v = 0; v < n; ++v) blossombase_[v] = v;
  bestedge_.assign(2 * n, -1);
  unusedblossoms_.clear();
  for (int b = 2 * n - 1; b >= n; --b) unusedblossoms_.push_back(b);
  std::reverse(unusedblossoms_.begin(), unusedblossoms_.end());
  dualvar_.assign(2 * n, 0);
  for (int v = 0; v < n; ++v) dualvar_[v] = maxweight;
  allowedge_.assign(nedge, 0);
  queue_.clear();
  bestedgeto_.assign(2 * n, -1);

  for (int stage = 0; stage < n; ++stage) {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (int b = n; b < 2 * n; ++b) {
      blossombestedges_[b].clear();
      has_bestedges_[b] = 0;
    }
    std::fill(allowedge_.begin(), allowedge_.end(), 0);
    queue_.clear();
    for (int v = 0; v < n; ++v) {
      if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
    }
    bool augmented = false;
    while (true) {
      while (!queue_.empty() && !augmented) {
        const int v = queue_.back();
        queue_.pop_back();
        for (int p : neighbend_[v]) {
          const int k = p / 2;
          const int w = endpoint(p);
          if (inblossom_[v] == inblossom_[w]) continue;
          long long kslack = 0;
          if (!allowedge_[k]) {
            kslack = slack(k);
            if (kslack <= 0) allowedge_[k] = 1;
          }
          if (allowedge_[k]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              const int base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            const int b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
          }
        }
      }
      if (augmented) break;

      int deltatype = -1;
      long long delta = 0;
      int deltaedge = -1;
      int deltablossom = -1;
      if (!max_cardinality) {
        deltatype = 1;
        delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + n);
      }
      for (int v = 0; v < n; ++v) {
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          const long long d = slack(bestedge_[v]);
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      }
      for (int b = 0; b < 2 * n; ++b) {
        if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          const long long d = slack(bestedge_[b]) / 2;
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      }
      for (int b = n; b < 2 * n; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
            (deltatype == -1 || dualvar_[b] < delta)) {
          delta = dualvar_[b];
          deltatype = 4;
          deltablossom = b;
        }
      }
      if (deltatype == -1) {
        deltatype = 1;
        delta = std::max<long long>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + n));
      }

      for (int v = 0; v < n; ++v) {
        const int l = label_[inblossom_[v]];
        if (l == 1) {
          dualvar_[v] -= delta;
        } else if (l == 2) {
          dualvar_[v] += delta;
        }
      }
      for (int b = n; b < 2 * n; ++b) {
        if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
          if (label_[b] == 1) {
            dualvar_[b] += delta;
          } else if (label_[b] == 2) {
            dualvar_[b] -= delta;
          }
        }
      }

      if (deltatype == 1) {
        break;
      } else if (deltatype == 2) {
        allowedge_[deltaedge] = 1;
        int i = edges_[deltaedge].u;
        if (label_[inblossom_[i]] == 0) i = edges_[deltaedge].v;
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[deltaedge] = 1;
        queue_.push_back(edges_[deltaedge].u);
      } else {
        expand_blossom(deltablossom, false);
      }
    }
    if (!augmented) break;
    for (int b = n; b < 2 * n; ++b) {
      if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0) {
        expand_blossom(b, true);
      }
    }
  }

  for (int v = 0; v < n; ++v) {
    if (mate_[v] >= 0) result_[v] = endpoint(mate_[v]);
  }
  return result_;
}

std::vector<int> min_cost_perfect_matching(int num_vertices, std::span<const WeightedEdge> costs,
                                           MaxWeightMatcher& matcher) {
  if (num_vertices % 2 != 0) throw std::invalid_argument("perfect matching needs an even vertex count");
  if (num_vertices == 0) return {};
  long long max_cost = 0;
  for (const WeightedEdge& e : costs) max_cost = std::max(max_cost, e.weight);
  std::vector<WeightedEdge> flipped(costs.begin(), costs.end());
  for (WeightedEdge& e : flipped) e.weight = 2 * (max_cost + 1 - e.weight);
  std::vector<int> mate = matcher.solve(num_vertices, flipped, true);
  for (int m : mate) {
    if (m < 0) throw std::runtime_error("graph has no perfect matching");
  }
  return mate;
}

}  // namespace toriclab
