#include <gtest/gtest.h>

#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "oracles/graph.h"
#include "toriclab/geometry.h"

using namespace toriclab;

namespace {

std::vector<CodeGeometry> small_geometries(int max_d) {
  std::vector<CodeGeometry> out;
  for (int d = 2; d <= max_d; d += 2) {
    out.emplace_back(Orientation::square, d);
    out.emplace_back(Orientation::rotated, d);
  }
  return out;
}

unsigned parity(const CodeGeometry& g, const std::vector<EdgeId>& edges) {
  unsigned m = 0;
  for (EdgeId e : edges) m ^= g.cut_mask(e);
  return m;
}

std::map<VertexId, int> boundary(const CodeGeometry& g, const std::vector<EdgeId>& edges) {
  std::map<VertexId, int> deg;
  for (EdgeId e : edges) {
    for (VertexId v : g.endpoints(e)) deg[v] ^= 1;
  }
  std::erase_if(deg, [](const auto& kv) { return kv.second == 0; });
  return deg;
}

}  // namespace

TEST(Geometry, SizesMatchFigureExamples) {
  const CodeGeometry sq(Orientation::square, 6);
  EXPECT_EQ(sq.num_qubits(), 72);
  EXPECT_EQ(sq.num_vertices(), 36);
  const CodeGeometry rot(Orientation::rotated, 12);
  EXPECT_EQ(rot.num_qubits(), 144);
  EXPECT_EQ(rot.num_vertices(), 72);
  const CodeGeometry tiny(Orientation::square, 2);
  EXPECT_EQ(tiny.num_qubits(), 8);
  EXPECT_EQ(tiny.num_vertices(), 4);
}

TEST(Geometry, RejectsBadDistance) {
  EXPECT_THROW(CodeGeometry(Orientation::square, 5), std::invalid_argument);
  EXPECT_THROW(CodeGeometry(Orientation::rotated, 0), std::invalid_argument);
  EXPECT_THROW(CodeGeometry(Orientation::rotated, -4), std::invalid_argument);
  EXPECT_THROW(parse_orientation("hex"), std::invalid_argument);
  EXPECT_EQ(parse_orientation("rotated"), Orientation::rotated);
}

TEST(Geometry, EveryVertexHasDegreeFour) {
  for (const auto& g : small_geometries(8)) {
    std::vector<int> degree(g.num_vertices(), 0);
    for (EdgeId e = 0; e < g.num_qubits(); ++e) {
      const auto ends = g.endpoints(e);
      ++degree[ends[0]];
      ++degree[ends[1]];
    }
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      EXPECT_EQ(degree[v], 4);
      for (EdgeId e : g.incident_edges(v)) {
        const auto ends = g.endpoints(e);
        EXPECT_TRUE(ends[0] == v || ends[1] == v);
      }
    }
  }
}

TEST(Geometry, CutsSeparateTheGenerators) {
  for (const auto& g : small_geometries(8)) {
    const auto h = g.logical_generator(0);
    const auto v = g.logical_generator(1);
    EXPECT_EQ(static_cast<int>(h.size()), g.distance());
    EXPECT_EQ(static_cast<int>(v.size()), g.distance());
    EXPECT_TRUE(boundary(g, h).empty());
    EXPECT_TRUE(boundary(g, v).empty());
    EXPECT_EQ(parity(g, h), 1U);
    EXPECT_EQ(parity(g, v), 2U);
  }
}

TEST(Geometry, ShortestNontrivialCycleIsDistance) {
  for (const auto& g : small_geometries(8)) {
    EXPECT_EQ(oracle::shortest_nontrivial_cycle(g), g.distance())
        << to_string(g.orientation()) << " d=" << g.distance();
  }
}

TEST(Geometry, DistanceMatchesBreadthFirstSearch) {
  for (const auto& g : small_geometries(8)) {
    const auto bfs = oracle::bfs_distances(g);
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
      for (VertexId v = 0; v < g.num_vertices(); ++v) {
        ASSERT_EQ(g.defect_distance(u, v), bfs[u][v]);
        const Displacement fwd = g.minimal_displacement(u, v);
        const Displacement back = g.minimal_displacement(v, u);
        ASSERT_EQ(fwd.manhattan(), back.manhattan());
        const bool self_inverse = g.vertex_at(fwd.dx, fwd.dy) == g.vertex_at(-fwd.dx, -fwd.dy);
        if (!self_inverse) ASSERT_EQ(fwd, -back);
      }
    }
  }
}

TEST(Geometry, TriangleInequalityAndSymmetry) {
  for (const auto& g : small_geometries(6)) {
    const int nv = g.num_vertices();
    for (VertexId a = 0; a < nv; ++a) {
      EXPECT_EQ(g.defect_distance(a, a), 0);
      for (VertexId b = 0; b < nv; ++b) {
        const int ab = g.defect_distance(a, b);
        ASSERT_EQ(ab, g.defect_distance(b, a));
        if (a != b) ASSERT_GT(ab, 0);
        for (VertexId c = 0; c < nv; ++c) {
          ASSERT_LE(g.defect_distance(a, c), ab + g.defect_distance(b, c));
        }
      }
    }
  }
}

TEST(Geometry, DistanceExamples) {
  const CodeGeometry g(Orientation::square, 6);
  EXPECT_EQ(g.defect_distance(g.vertex_at(0, 0), g.vertex_at(5, 0)), 1);
  for (EdgeId e = 0; e < g.num_qubits(); ++e) {
    const auto ends = g.endpoints(e);
    EXPECT_EQ(g.defect_distance(ends[0], ends[1]), 1);
  }
  EXPECT_THROW(g.defect_distance(0, 36), std::out_of_range);
  EXPECT_THROW(g.canonical_path(-1, 0), std::out_of_range);
}

TEST(Geometry, CanonicalPathsAreShortestAndSymmetric) {
  for (const auto& g : small_geometries(6)) {
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
      for (VertexId v = 0; v < g.num_vertices(); ++v) {
        const auto p = g.canonical_path(u, v);
        ASSERT_EQ(static_cast<int>(p.size()), g.defect_distance(u, v));
        if (u == v) {
          ASSERT_TRUE(p.empty());
          continue;
        }
        const auto b = boundary(g, p);
        ASSERT_EQ(b.size(), 2U);
        ASSERT_TRUE(b.count(u) && b.count(v));
        auto q = g.canonical_path(v, u);
        std::set<EdgeId> ps(p.begin(), p.end());
        std::set<EdgeId> qs(q.begin(), q.end());
        ASSERT_EQ(ps, qs);
        std::vector<EdgeId> loop = p;
        loop.insert(loop.end(), q.begin(), q.end());
        ASSERT_EQ(parity(g, loop), 0U);
        ASSERT_EQ(g.path_cut_mask(u, v), parity(g, p));
      }
    }
  }
}

TEST(Geometry, AlignedPairGivesColinearPath) {
  const CodeGeometry g(Orientation::square, 8);
  for (int k = 1; k <= 4; ++k) {
    const auto p = g.canonical_path(g.vertex_at(1, 2), g.vertex_at(1 + k, 2));
    ASSERT_EQ(static_cast<int>(p.size()), k);
    for (EdgeId e : p) EXPECT_TRUE(CodeGeometry::is_horizontal(e));
  }
}

namespace {

// direction index: 0 +x, 1 +y, 2 -x, 3 -y; a right turn rotates clockwise.
void geodesics(const CodeGeometry& g, VertexId at, VertexId target, int remaining, std::vector<int>& dirs,
               std::vector<std::vector<int>>& out, std::vector<std::vector<EdgeId>>& edges,
               std::vector<EdgeId>& path) {
  if (remaining == 0) {
    if (at == target) {
      out.push_back(dirs);
      edges.push_back(path);
    }
    return;
  }
  const auto nb = g.neighbors(at);
  const auto inc = g.incident_edges(at);
  for (int dir = 0; dir < 4; ++dir) {
    if (g.defect_distance(nb[dir], target) != remaining - 1) continue;
    dirs.push_back(dir);
    path.push_back(inc[dir]);
    geodesics(g, nb[dir], target, remaining - 1, dirs, out, edges, path);
    dirs.pop_back();
    path.pop_back();
  }
}

}  // namespace

TEST(Geometry, CanonicalStaircaseHasNoRightTurn) {
  const CodeGeometry g(Orientation::rotated, 12);
  const VertexId u = g.vertex_at(3, 1);
  const VertexId v = g.vertex_at(5, 3);
  ASSERT_EQ(g.defect_distance(u, v), 4);
  std::vector<std::vector<int>> all;
  std::vector<std::vector<EdgeId>> all_edges;
  std::vector<int> dirs;
  std::vector<EdgeId> path;
  geodesics(g, u, v, 4, dirs, all, all_edges, path);
  ASSERT_EQ(all.size(), 6U);
  const auto canon = g.canonical_path(u, v);
  const std::set<EdgeId> cs(canon.begin(), canon.end());
  int found = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (std::set<EdgeId>(all_edges[i].begin(), all_edges[i].end()) != cs) continue;
    ++found;
    for (std::size_t k = 1; k < all[i].size(); ++k) {
      EXPECT_NE(all[i][k], (all[i][k - 1] + 3) % 4) << "right turn in canonical path";
    }
  }
  EXPECT_EQ(found, 1);
}

TEST(Geometry, SummaryJsonParses) {
  const CodeGeometry g(Orientation::rotated, 4);
  const auto j = nlohmann::json::parse(g.summary_json());
  EXPECT_EQ(j["num_qubits"], 16);
  EXPECT_EQ(j["orientation"], "rotated");
}
