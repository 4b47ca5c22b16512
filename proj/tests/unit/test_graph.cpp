// Copyright 2026 The chanalloc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "chanalloc/errors.hpp"
#include "chanalloc/graph.hpp"
#include "oracles.hpp"

namespace chanalloc {
namespace {

BipartiteGraph fig3() {
  std::ifstream in(CHANALLOC_TEST_DATA "/fig3.graph");
  return read_graph(in);
}

BipartiteGraph from_mask(int M, int N, std::uint32_t mask) {
  BipartiteGraph g(M, N, N);
  for (int e = 0; e < M * N; ++e) {
    if (mask >> e & 1u) g.add_edge(e / N, e % N);
  }
  return g;
}

TEST(Rbg, AllOnesIsComplete) {
  const BipartiteGraph g = build_rbg(CsiMatrix(3, 3, true), 2);
  EXPECT_EQ(g.num_left(), 3);
  EXPECT_EQ(g.num_right(), 6);
  EXPECT_EQ(g.num_edges(), 18);
}

TEST(Rbg, AllZerosIsEmpty) {
  EXPECT_EQ(build_rbg(CsiMatrix(3, 3, false), 2).num_edges(), 0);
}

TEST(Rbg, BandsShareNeighbourhoods) {
  CsiMatrix q(2, 3);
  q.set(0, 1, true);
  q.set(1, 0, true);
  q.set(1, 2, true);
  const BipartiteGraph g = build_rbg(q, 2);
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < 6; ++n) EXPECT_EQ(g.has_edge(m, n), q.at(m, n / 2));
  }
}

TEST(Rbg, Fig3Fixture) {
  const BipartiteGraph g = fig3();
  EXPECT_EQ(g.num_left(), 3);
  EXPECT_EQ(g.num_right(), 6);
  EXPECT_EQ(g.num_edges(), 13);
  EXPECT_EQ(g.degree(1), 1);
  EXPECT_TRUE(g.has_edge(1, 4));
  // Every edge of the highlighted matching is present.
  for (auto [u, n] : std::vector<std::pair<int, int>>{
           {0, 0}, {0, 3}, {1, 4}, {2, 1}, {2, 5}}) {
    EXPECT_TRUE(g.has_edge(u, n));
  }
  // The fixture is a valid unit-band CSI pattern.
  CsiMatrix q(3, 6);
  for (auto [u, n] : g.edges()) q.set(u, n, true);
  EXPECT_EQ(build_rbg(q, 1), g);
}

TEST(Rbg, SampleExtremes) {
  Rng rng(1);
  EXPECT_EQ(sample_rbg(0.0, 2, 3, 2, rng).num_edges(), 12);
  EXPECT_EQ(sample_rbg(1.0, 2, 3, 2, rng).num_edges(), 0);
}

TEST(Rbg, SampleMeanEdges) {
  Rng rng(8);
  double sum = 0.0;
  const int T = 100000;
  for (int t = 0; t < T; ++t) sum += sample_rbg(0.5, 2, 6, 1, rng).num_edges();
  EXPECT_NEAR(sum / T, 6.0, 0.1);
}

TEST(Expansion, UnitCapsIsIdentity) {
  const BipartiteGraph g = fig3();
  const ExpandedGraph e = expand_vertices(g, FProfile{{1, 1, 1}});
  EXPECT_EQ(e.graph, g);
  EXPECT_EQ(e.owner, (std::vector<int>{0, 1, 2}));
}

TEST(Expansion, Fig3CloneDegrees) {
  const BipartiteGraph g = fig3();
  const ExpandedGraph e = expand_vertices(g, FProfile{{2, 2, 2}});
  ASSERT_EQ(e.graph.num_left(), 6);
  for (int c = 0; c < 6; ++c) {
    EXPECT_EQ(e.owner[c], c / 2);
    EXPECT_EQ(e.graph.degree(c), g.degree(c / 2));
  }
}

TEST(Expansion, RotatedOrderIsBalanced) {
  Rng rng(5);
  const FProfile f{{2, 3, 1}};
  for (int t = 0; t < 50; ++t) {
    const std::vector<int> order = rotated_clone_order(f, rng);
    std::vector<int> count(3, 0);
    for (int u : order) ++count[u];
    EXPECT_EQ(count, f.caps);
  }
}

// Perfect matching of the expansion iff perfect f-matching, exhaustively.
TEST(Expansion, PerfectEquivalenceExhaustive) {
  for (int M : {2, 3}) {
    for (int N : {3, 4}) {
      const auto profiles = oracle::cap_profiles(M, 2, 2 * M);
      for (std::uint32_t mask = 0; mask < (1u << (M * N)); ++mask) {
        const BipartiteGraph g = from_mask(M, N, mask);
        for (const auto& caps : profiles) {
          const FProfile f{caps};
          const ExpandedGraph e = expand_vertices(g, f);
          const int size = hopcroft_karp(e.graph).size;
          const int best = oracle::max_flow_f_matching(g, caps);
          ASSERT_EQ(size, best);
          ASSERT_EQ(size == f.total(), best == f.total());
        }
      }
    }
  }
}

TEST(HopcroftKarp, Trivial) {
  EXPECT_EQ(hopcroft_karp(BipartiteGraph(3, 5, 5)).size, 0);
  BipartiteGraph k(3, 5, 5);
  for (int u = 0; u < 3; ++u) {
    for (int n = 0; n < 5; ++n) k.add_edge(u, n);
  }
  const Matching m = hopcroft_karp(k);
  EXPECT_EQ(m.size, 3);
  EXPECT_TRUE(m.is_valid_for(k));
}

TEST(HopcroftKarp, RandomAgainstBruteForce) {
  Rng rng(1234);
  for (int t = 0; t < 1000; ++t) {
    const int M = 1 + static_cast<int>(rng.below(5));
    const int N = 1 + static_cast<int>(rng.below(7));
    const BipartiteGraph g = oracle::random_graph(M, N, rng.uniform(), rng);
    HopcroftKarpStats stats;
    const Matching m = hopcroft_karp(g, &stats);
    ASSERT_TRUE(m.is_valid_for(g));
    ASSERT_EQ(m.size, oracle::brute_force_matching(g));
    ASSERT_FALSE(oracle::exhaustive_augmenting_path(g, m));
    ASSERT_FALSE(has_augmenting_path(g, m));
    ASSERT_LE(stats.phases, 2 * static_cast<int>(std::sqrt(M + N)) + 2);
  }
}

TEST(HasAugmentingPath, AgreesWithExhaustiveSearch) {
  Rng rng(77);
  for (int t = 0; t < 500; ++t) {
    const BipartiteGraph g = oracle::random_graph(4, 5, 0.5, rng);
    // Greedy matching, usually not maximum.
    Matching m(4, 5);
    for (int u = 0; u < 4; ++u) {
      for (int n : g.neighbors(u)) {
        if (m.right_mate[n] < 0 && rng.uniform() < 0.5) {
          m.left_mate[u] = n;
          m.right_mate[n] = u;
          ++m.size;
          break;
        }
      }
    }
    ASSERT_EQ(has_augmenting_path(g, m), oracle::exhaustive_augmenting_path(g, m));
  }
}

TEST(MaxFMatching, Fig3) {
  const BipartiteGraph g = fig3();
  const FProfile f{{2, 2, 2}};
  const FMatching a = max_f_matching(g, f);
  Rng rng(3);
  const FMatching b = max_f_matching(g, f, rng);
  for (const FMatching* m : {&a, &b}) {
    EXPECT_TRUE(m->is_valid_for(g));
    EXPECT_EQ(m->size(), 5);
    EXPECT_TRUE(m->saturated(0));
    EXPECT_TRUE(m->saturated(2));
    EXPECT_EQ(m->degree(1), 1);
    EXPECT_EQ(m->subchannels_of(1), (std::vector<int>{4}));
  }
}

TEST(MaxFMatching, CompleteGraphIsPerfect) {
  BipartiteGraph g(3, 7, 7);
  for (int u = 0; u < 3; ++u) {
    for (int n = 0; n < 7; ++n) g.add_edge(u, n);
  }
  Rng rng(1);
  const FMatching m = max_f_matching(g, FProfile{{3, 2, 2}}, rng);
  for (int u = 0; u < 3; ++u) EXPECT_TRUE(m.saturated(u));
}

TEST(MaxFMatching, RandomAgainstMaxFlow) {
  Rng rng(99);
  for (int t = 0; t < 1000; ++t) {
    const int M = 1 + static_cast<int>(rng.below(4));
    const int N = 1 + static_cast<int>(rng.below(8));
    std::vector<int> caps(M);
    for (int& k : caps) k = 1 + static_cast<int>(rng.below(3));
    const BipartiteGraph g = oracle::random_graph(M, N, rng.uniform(), rng);
    const FMatching m = max_f_matching(g, FProfile{caps}, rng);
    ASSERT_TRUE(m.is_valid_for(g));
    const int flow = oracle::max_flow_f_matching(g, caps);
    ASSERT_EQ(m.size(), flow);
    if (N <= 6) ASSERT_EQ(flow, oracle::brute_force_f_matching(g, caps).best);
  }
}

TEST(MaxFMatching, RotationSpreadsDeficit) {
  // Two users competing for one subchannel: each loses half the time.
  BipartiteGraph g(2, 1, 1);
  g.add_edge(0, 0);
  g.add_edge(1, 0);
  Rng rng(4);
  int first = 0;
  const int T = 20000;
  for (int t = 0; t < T; ++t) first += max_f_matching(g, FProfile{{1, 1}}, rng).degree(0);
  EXPECT_NEAR(first, T / 2.0, 5.0 * std::sqrt(T / 4.0));
}

TEST(CompleteAllocation, PerfectMatchingKeepsSets) {
  BipartiteGraph g(2, 4, 4);
  for (int n = 0; n < 4; ++n) g.add_edge(n / 2, n);
  const FMatching m = max_f_matching(g, FProfile{{2, 2}});
  Rng rng(1);
  const std::vector<int> demand = {2, 2};
  const Allocation a = complete_allocation(m, demand, rng);
  EXPECT_EQ(a.sets[0], m.subchannels_of(0));
  EXPECT_EQ(a.sets[1], m.subchannels_of(1));
  EXPECT_EQ(a.matched, (std::vector<int>{2, 2}));
}

TEST(CompleteAllocation, Fig3) {
  const BipartiteGraph g = fig3();
  Rng rng(6);
  const FMatching m = max_f_matching(g, FProfile{{2, 2, 2}}, rng);
  const std::vector<int> demand = {2, 2, 2};
  const Allocation a = complete_allocation(m, demand, rng);
  std::set<int> all;
  for (int u = 0; u < 3; ++u) {
    ASSERT_EQ(a.sets[u].size(), 2u);
    all.insert(a.sets[u].begin(), a.sets[u].end());
  }
  EXPECT_EQ(all.size(), 6u);
  EXPECT_EQ(a.matched, (std::vector<int>{2, 1, 2}));
  EXPECT_NE(std::find(a.sets[1].begin(), a.sets[1].end(), 4), a.sets[1].end());
}

TEST(CompleteAllocation, EmptyMatchingIsUniformPartition) {
  const FMatching m(6, {2, 4});
  Rng rng(12);
  std::vector<int> first(6, 0);
  const int T = 60000;
  const std::vector<int> demand = {2, 4};
  for (int t = 0; t < T; ++t) {
    const Allocation a = complete_allocation(m, demand, rng);
    ASSERT_EQ(a.sets[0].size(), 2u);
    ASSERT_EQ(a.sets[1].size(), 4u);
    for (int n : a.sets[0]) ++first[n];
  }
  // Each subchannel lands with user 0 with probability 1/3.
  for (int c : first) EXPECT_NEAR(c, T / 3.0, 5.0 * std::sqrt(T * 2.0 / 9.0));
}

TEST(CompleteAllocation, PartialLeavesIdle) {
  const FMatching m(6, {1, 1});
  Rng rng(2);
  const std::vector<int> demand = {1, 2};
  const Allocation a = complete_partial_allocation(m, demand, rng);
  EXPECT_EQ(a.sets[0].size(), 1u);
  EXPECT_EQ(a.sets[1].size(), 2u);
  EXPECT_THROW(complete_allocation(m, demand, rng), std::exception);
}

TEST(Witness, CompleteGraphHasNone) {
  BipartiteGraph g(3, 6, 6);
  for (int u = 0; u < 3; ++u) {
    for (int n = 0; n < 6; ++n) g.add_edge(u, n);
  }
  const FProfile f{{2, 2, 1}};
  for (int m = 0; m < 3; ++m) {
    EXPECT_FALSE(deficiency_witness(g, f, m).has_value());
    EXPECT_FALSE(hall_violation(g, f, m).has_value());
  }
}

TEST(Witness, IsolatedUser) {
  BipartiteGraph g(3, 6, 6);
  for (int u : {0, 2}) {
    for (int n = 0; n < 6; ++n) g.add_edge(u, n);
  }
  const FProfile f{{2, 1, 2}};
  const auto x = deficiency_witness(g, f, 1);
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(*x, (std::vector<int>{1}));
}

TEST(Witness, HallConditionIsNotSufficient) {
  BipartiteGraph g(3, 2, 2);
  g.add_edge(0, 0);
  g.add_edge(0, 1);
  g.add_edge(1, 0);
  g.add_edge(2, 0);
  const FProfile f{{1, 1, 1}};
  EXPECT_TRUE(hall_violation(g, f, 0).has_value());
  EXPECT_FALSE(deficiency_witness(g, f, 0).has_value());
  EXPECT_TRUE(always_saturated(g, f, 0));
}

TEST(Witness, RandomAgainstBruteForce) {
  Rng rng(31);
  for (int t = 0; t < 1500; ++t) {
    const int M = 1 + static_cast<int>(rng.below(4));
    const int N = 1 + static_cast<int>(rng.below(6));
    std::vector<int> caps(M);
    for (int& k : caps) k = 1 + static_cast<int>(rng.below(2));
    const BipartiteGraph g = oracle::random_graph(M, N, rng.uniform(), rng);
    const FProfile f{caps};
    const oracle::FMatchSummary truth = oracle::brute_force_f_matching(g, caps);
    for (int m = 0; m < M; ++m) {
      const auto x = deficiency_witness(g, f, m);
      ASSERT_EQ(x.has_value(), bool(truth.can_be_unsaturated[m]));
      ASSERT_EQ(always_saturated(g, f, m), !truth.can_be_unsaturated[m]);
      if (truth.can_be_unsaturated[m]) {
        ASSERT_TRUE(hall_violation(g, f, m).has_value());
        ASSERT_NE(std::find(x->begin(), x->end(), m), x->end());
        // Lemma-5 style deficiency of the returned set is positive.
        std::set<int> nb;
        int demand = 0;
        for (int u : *x) {
          demand += caps[u];
          for (int n : g.neighbors(u)) nb.insert(n);
        }
        ASSERT_GT(demand, static_cast<int>(nb.size()));
      }
    }
  }
}

TEST(Thresholds, KThreshold) {
  EXPECT_EQ(k_threshold(2, 12, 3), 7);
  EXPECT_EQ(k_threshold(3, 6, 2), 4);
  for (int sum = 1; sum <= 5; ++sum) {
    EXPECT_EQ(k_threshold(2, 12, sum), 12 + 1 - 2 * sum);
  }
}

TEST(Thresholds, TwoUsersFourSubchannels) {
  const FProfile f{{2, 2}};
  const EdgeThreshold t = edge_count_threshold(2, 4, f, 0);
  EXPECT_EQ(t.k_threshold, 1);
  EXPECT_FALSE(t.low_branch);
  EXPECT_EQ(t.min_edges, 7);
  const oracle::ThresholdCheck c = oracle::check_edge_threshold(2, 4, f.caps, 0);
  EXPECT_TRUE(c.sufficient);
  EXPECT_TRUE(c.tight);
}

TEST(Thresholds, UnitCapLowBranch) {
  for (int M : {2, 3}) {
    for (int N = M; N <= 8; ++N) {
      for (const auto& caps : oracle::cap_profiles(M, 3, N)) {
        if (caps[0] != 1) continue;
        const EdgeThreshold t = edge_count_threshold(M, N, FProfile{caps}, 0);
        EXPECT_EQ(t.low_branch, t.k_threshold >= 1);
        if (t.k_threshold >= 1) EXPECT_EQ(t.min_edges, (M - 1) * N + 1);
      }
    }
  }
}

TEST(Thresholds, SmallExhaustive) {
  for (const auto& caps : oracle::cap_profiles(2, 3, 4)) {
    for (int m = 0; m < 2; ++m) {
      const oracle::ThresholdCheck c = oracle::check_edge_threshold(2, 4, caps, m);
      EXPECT_TRUE(c.sufficient) << caps[0] << "," << caps[1] << " m=" << m;
      EXPECT_TRUE(c.tight) << caps[0] << "," << caps[1] << " m=" << m;
    }
  }
}

TEST(GraphIo, RoundTrip) {
  const BipartiteGraph g = fig3();
  std::stringstream s;
  write_graph(s, g);
  EXPECT_EQ(read_graph(s), g);
}

TEST(GraphIo, Errors) {
  std::istringstream empty("# nothing\n");
  EXPECT_THROW(read_graph(empty), ConfigError);
  std::istringstream bad_header("3 5 2\n");
  EXPECT_THROW(read_graph(bad_header), ConfigError);
  std::istringstream bad_edge("2 4 2\n1 5\n");
  EXPECT_THROW(read_graph(bad_edge), ConfigError);
  std::istringstream extra("2 4 2\n1 2 3\n");
  EXPECT_THROW(read_graph(extra), ConfigError);
}

}  // namespace
}  // namespace chanalloc
