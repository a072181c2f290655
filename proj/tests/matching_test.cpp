#include <gtest/gtest.h>

#include "oracles/combinations.h"
#include "oracles/pairing.h"
#include "toriclab/matching.h"

using namespace toriclab;

namespace {

ErrorConfig config(const CodeGeometry& g, const std::vector<int>& edges) {
  return ErrorConfig::from_edges(g.num_qubits(), edges);
}

std::vector<EdgeId> plaquette(const CodeGeometry& g, int x, int y) {
  return {2 * g.vertex_at(x, y), 2 * g.vertex_at(x + 1, y) + 1, 2 * g.vertex_at(x, y + 1),
          2 * g.vertex_at(x, y) + 1};
}

}  // namespace

TEST(Syndrome, BasicCases) {
  const CodeGeometry g(Orientation::square, 6);
  EXPECT_TRUE(extract_syndrome(g, ErrorConfig(g.num_qubits())).defects.empty());
  const auto s = extract_syndrome(g, config(g, {14}));
  const auto ends = g.endpoints(14);
  EXPECT_EQ(s.defects, (std::vector<VertexId>{std::min(ends[0], ends[1]), std::max(ends[0], ends[1])}));
  for (int which = 0; which < 2; ++which) {
    EXPECT_TRUE(extract_syndrome(g, config(g, g.logical_generator(which))).defects.empty());
  }
}

TEST(Syndrome, IsLinear) {
  const CodeGeometry g(Orientation::rotated, 8);
  Rng rng = make_stream(3, 0);
  const NoiseParams noise(0.2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = sample_error(g, noise, rng);
    const auto b = sample_error(g, noise, rng);
    const auto sa = extract_syndrome(g, a).defects;
    const auto sb = extract_syndrome(g, b).defects;
    std::vector<VertexId> sym;
    std::set_symmetric_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(sym));
    EXPECT_EQ(extract_syndrome(g, a ^ b).defects, sym);
    EXPECT_EQ(sa.size() % 2, 0U);
  }
}

TEST(Winding, GeneratorsAndProducts) {
  for (auto o : {Orientation::square, Orientation::rotated}) {
    const CodeGeometry g(o, 6);
    const auto h = config(g, g.logical_generator(0));
    const auto v = config(g, g.logical_generator(1));
    EXPECT_EQ(winding_class(g, ErrorConfig(g.num_qubits())), (WindingClass{0, 0}));
    EXPECT_EQ(winding_class(g, h), (WindingClass{1, 0}));
    EXPECT_EQ(winding_class(g, v), (WindingClass{0, 1}));
    EXPECT_EQ(winding_class(g, h ^ v), (WindingClass{1, 1}));
    EXPECT_EQ(winding_class(g, config(g, plaquette(g, 2, 1))), (WindingClass{0, 0}));
    EXPECT_THROW(winding_class(g, config(g, {0})), std::logic_error);
  }
}

TEST(Matching, EmptyAndAdjacent) {
  const CodeGeometry g(Orientation::square, 4);
  EXPECT_EQ(mwpm_correction(g, Syndrome{}).weight(), 0);
  for (EdgeId e = 0; e < g.num_qubits(); ++e) {
    const auto c = mwpm_correction(g, extract_syndrome(g, config(g, {e})));
    EXPECT_EQ(c.support(), std::vector<EdgeId>{e});
  }
  Decoder dec(g);
  EXPECT_THROW(dec.match({1, 2, 3}), std::invalid_argument);
}

TEST(Matching, MinimalOverAllPairingsSmallCodes) {
  for (auto o : {Orientation::rotated, Orientation::square}) {
    const CodeGeometry g(o, 4);
    Decoder dec(g);
    for (int w = 1; w <= 4; ++w) {
      oracle::for_each_subset(g.num_qubits(), w, [&](const std::vector<int>& edges) {
        const auto e = config(g, edges);
        const auto s = extract_syndrome(g, e);
        const int m = static_cast<int>(s.defects.size());
        std::vector<std::vector<long long>> cost(m, std::vector<long long>(m, 0));
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j < m; ++j) cost[i][j] = g.defect_distance(s.defects[i], s.defects[j]);
        }
        const auto outcome = dec.decode(e);
        int weight = 0;
        for (const auto& [u, v] : outcome.matched_pairs) weight += g.defect_distance(u, v);
        ASSERT_EQ(weight, oracle::min_pairing_cost(cost));
        ASSERT_EQ(outcome.correction.weight(), weight);
        ASSERT_EQ(extract_syndrome(g, outcome.correction).defects, s.defects);
        ASSERT_EQ(dec.failure_class(e), outcome.winding);
      });
    }
  }
}

TEST(Decode, RowSegmentOfHalfDistanceFails) {
  // The two halves of a row share a syndrome, so exactly one of them is miscorrected.
  const CodeGeometry g(Orientation::square, 6);
  for (int which = 0; which < 2; ++which) {
    const auto line = g.logical_generator(which);
    const auto first = decode(g, config(g, {line[0], line[1], line[2]}));
    const auto second = decode(g, config(g, {line[3], line[4], line[5]}));
    EXPECT_NE(first.failed(), second.failed());
    const WindingClass expected = which == 0 ? WindingClass{1, 0} : WindingClass{0, 1};
    EXPECT_EQ(first.failed() ? first.winding : second.winding, expected);
  }
}

TEST(Decode, LowWeightErrorsAlwaysSucceed) {
  for (auto o : {Orientation::square, Orientation::rotated}) {
    for (int d : {4, 6}) {
      const CodeGeometry g(o, d);
      Decoder dec(g);
      for (int w = 1; w < d / 2; ++w) {
        oracle::for_each_subset(g.num_qubits(), w, [&](const std::vector<int>& edges) {
          ASSERT_FALSE(dec.decode(config(g, edges)).failed());
        });
      }
    }
  }
}

TEST(Decode, StabilizerDoesNotChangeOutcome) {
  for (auto o : {Orientation::square, Orientation::rotated}) {
    const CodeGeometry g(o, 4);
    Decoder dec(g);
    std::vector<ErrorConfig> stabilizers;
    for (int y = 0; y < g.height(); ++y) {
      for (int x = 0; x < g.width(); ++x) stabilizers.push_back(config(g, plaquette(g, x, y)));
    }
    for (int w = 1; w <= 3; ++w) {
      oracle::for_each_subset(g.num_qubits(), w, [&](const std::vector<int>& edges) {
        const auto e = config(g, edges);
        const auto base = dec.failure_class(e);
        for (const auto& s : stabilizers) ASSERT_EQ(dec.failure_class(e ^ s), base);
      });
    }
  }
}

TEST(Decode, Deterministic) {
  const CodeGeometry g(Orientation::rotated, 10);
  Rng rng = make_stream(11, 2);
  const NoiseParams noise(0.1);
  Decoder a(g);
  for (int i = 0; i < 100; ++i) {
    const auto e = sample_error(g, noise, rng);
    const auto x = a.decode(e);
    const auto y = decode(g, e);
    EXPECT_EQ(x.correction, y.correction);
    EXPECT_EQ(x.matched_pairs, y.matched_pairs);
  }
}

TEST(Decode, NeighborPruningAgreesWithExact) {
  for (auto o : {Orientation::square, Orientation::rotated}) {
    const CodeGeometry g(o, 16);
    Decoder exact(g);
    Decoder pruned(g, 16);
    Rng rng = make_stream(2024, o == Orientation::square ? 0 : 1);
    const NoiseParams noise(0.1);
    for (int i = 0; i < 5000; ++i) {
      const auto s = extract_syndrome(g, sample_error(g, noise, rng));
      ASSERT_EQ(pruned.matching_weight(s.defects), exact.matching_weight(s.defects));
    }
  }
}
