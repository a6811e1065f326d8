// Copyright 2026 The lprules Authors
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

#include "lprules/heuristics.h"

#include <gtest/gtest.h>

#include <set>

#include "common/fixtures.h"

namespace lprules {
namespace {

using testing::EdgeOracle;
using testing::Toy1;

std::set<Clause> AsSet(const std::vector<Clause>& v) {
  return {v.begin(), v.end()};
}

// Smallest label sequence of exactly `len` labels realized by a simple path
// x ~> y avoiding the excluded edge; enumerates all sequences in order.
std::optional<Clause> SmallestSequence(const EdgeOracle& oracle,
                                       std::size_t labels, std::size_t len,
                                       EntityId x, EntityId y,
                                       const ExcludedEdge& ex) {
  std::vector<RelationId> digits(len, 0);
  for (;;) {
    const Clause c(digits);
    if (oracle.Holds(c, x, y, ex)) return c;
    std::size_t pos = len;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < labels) break;
      digits[pos] = 0;
      if (pos == 0) return std::nullopt;
    }
  }
}

TEST(Heuristic1Test, Toy1) {
  Toy1 toy;
  EXPECT_EQ(Heuristic1(toy.graph, Toy1::r0),
            (std::vector<Clause>{{Toy1::r1, Toy1::r2}}));
}

TEST(Heuristic1Test, FindsSymmetryRules) {
  // (A,s,B), (B,s,A), (A,r,B); target r.
  const std::vector<Fact> facts{{0, 1, 1}, {1, 1, 0}, {0, 0, 1}};
  KnowledgeGraph g(2, 2, facts);
  const auto got = AsSet(Heuristic1(g, 0));
  EXPECT_TRUE(got.count(Clause{1}));
  EXPECT_TRUE(got.count(Clause{3}));
  EXPECT_FALSE(got.count(Clause{0}));
}

TEST(Heuristic1Test, EmptyWithoutShortPaths) {
  const std::vector<Fact> facts{{0, 0, 1}, {2, 1, 3}};
  KnowledgeGraph g(4, 2, facts);
  EXPECT_TRUE(Heuristic1(g, 0).empty());
}

TEST(Heuristic1Test, MatchesCoverageEnumeration) {
  Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const auto kg = testing::MakeRandomKg(rng, 10, 3, 35);
    KnowledgeGraph g(kg.num_entities, kg.num_base, kg.facts);
    const RelationId r = 0;
    if (g.EdgesOf(r).empty()) continue;
    const std::size_t min_support = 1 + rng.Uniform(2);
    std::set<Clause> expect;
    auto support = [&](const Clause& c) {
      std::size_t s = 0;
      for (bool b : CoverageColumn(g, r, c)) s += b;
      return s;
    };
    for (RelationId a = 0; a < g.num_labels(); ++a) {
      if (a != r && support({a}) >= min_support) expect.insert({a});
      for (RelationId b = 0; b < g.num_labels(); ++b)
        if (support({a, b}) >= min_support) expect.insert({a, b});
    }
    const auto got = Heuristic1(g, r, min_support);
    EXPECT_EQ(got.size(), AsSet(got).size());
    EXPECT_EQ(AsSet(got), expect) << "trial " << trial;
  }
}

TEST(Heuristic2Test, Toy1) {
  Toy1 toy;
  EXPECT_EQ(Heuristic2(toy.graph, Toy1::r0, 2),
            (std::vector<Clause>{{Toy1::r1, Toy1::r2}}));
  // A -r1-> B -r1^-1-> D -r0-> C avoids the excluded edge, and symmetrically
  // from D through A.
  EXPECT_EQ(Heuristic2(toy.graph, Toy1::r0, 4),
            (std::vector<Clause>{{Toy1::r1, Toy1::r2},
                                 {Toy1::r1, Toy1::r1_inv, Toy1::r0}}));
}

TEST(Heuristic2Test, ChainGivesUniqueShortestPath) {
  // A -r1-> B -r1-> C -r1-> D and target (A, r, D).
  const std::vector<Fact> facts{{0, 1, 1}, {1, 1, 2}, {2, 1, 3}, {0, 0, 3}};
  KnowledgeGraph g(4, 2, facts);
  EXPECT_EQ(Heuristic2(g, 0, 3), (std::vector<Clause>{{1, 1, 1}}));
  EXPECT_TRUE(Heuristic2(g, 0, 2).empty());
}

TEST(Heuristic2Test, DisconnectedEdgeContributesNothing) {
  const std::vector<Fact> facts{{0, 0, 1}};
  KnowledgeGraph g(2, 1, facts);
  EXPECT_TRUE(Heuristic2(g, 0, 4).empty());
}

TEST(Heuristic2Test, MatchesLexicographicOracle) {
  Rng rng(99);
  for (int trial = 0; trial < 150; ++trial) {
    const auto kg = testing::MakeRandomKg(rng, 8, 3, 30);
    KnowledgeGraph g(kg.num_entities, kg.num_base, kg.facts);
    EdgeOracle oracle(kg.num_entities, kg.num_base, kg.facts);
    const RelationId r = 0;
    const std::size_t max_len = 1 + rng.Uniform(4);
    for (const Edge& e : g.EdgesOf(r)) {
      std::vector<Clause> expect;
      const ExcludedEdge ex{e.tail, r, e.head};
      for (std::size_t len = 1; len <= max_len; ++len) {
        if (auto c = SmallestSequence(oracle, g.num_labels(), len, e.tail,
                                      e.head, ex)) {
          expect.push_back(*c);
          if (len + 1 <= max_len) {
            if (auto d = SmallestSequence(oracle, g.num_labels(), len + 1,
                                          e.tail, e.head, ex))
              expect.push_back(*d);
          }
          break;
        }
      }
      EXPECT_EQ(ShortestPathClauses(g, r, e, max_len), expect)
          << "trial " << trial;
    }
  }
}

TEST(HeuristicsTest, ClausesAreShortAndCoverSomething) {
  Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const auto kg = testing::MakeRandomKg(rng, 12, 3, 50);
    KnowledgeGraph g(kg.num_entities, kg.num_base, kg.facts);
    if (g.EdgesOf(0).empty()) continue;
    const std::size_t max_len = 1 + rng.Uniform(4);
    auto all = Heuristic2(g, 0, max_len);
    const auto h1 = Heuristic1(g, 0);
    all.insert(all.end(), h1.begin(), h1.end());
    for (const Clause& c : all) {
      EXPECT_LE(c.length(), std::max<std::size_t>(max_len, 2));
      const auto cov = CoverageColumn(g, 0, c);
      EXPECT_NE(std::count(cov.begin(), cov.end(), true), 0);
    }
  }
}

TEST(PriceRulesTest, AcceptsNegativeReducedCost) {
  Toy1 toy;
  ColumnBuilder builder(toy.graph, Toy1::r0);
  const RuleColumn r1 = builder.Build({Toy1::r1});
  const LpModel lp = BuildLpr(2, {ToLpColumn(r1)}, 0.1, 3.0);
  const LpSolution sol = Solve(lp);
  EXPECT_EQ(sol.coverage_duals, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(sol.complexity_dual, 0.0);
  const std::unordered_set<Clause, ClauseHash> existing{{Toy1::r1}};
  const auto got = PriceRules(builder, sol.coverage_duals,
                              sol.complexity_dual, 0.1, existing, 10, 2);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].column.clause, (Clause{Toy1::r1, Toy1::r2}));
  EXPECT_DOUBLE_EQ(got[0].reduced_cost, -2.0);
}

TEST(PriceRulesTest, SkipsExistingAndPositiveCost) {
  Toy1 toy;
  ColumnBuilder builder(toy.graph, Toy1::r0);
  const std::vector<double> duals{1.0, 1.0};
  const std::unordered_set<Clause, ClauseHash> existing{
      {Toy1::r1, Toy1::r2}};
  EXPECT_TRUE(PriceRules(builder, duals, 0.0, 0.1, existing, 10, 2).empty());
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_TRUE(PriceRules(builder, zero, 0.0, 0.1, {}, 10, 4).empty());
}

TEST(PriceRulesTest, RespectsMaxNew) {
  Rng rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    const auto kg = testing::MakeRandomKg(rng, 12, 3, 60);
    KnowledgeGraph g(kg.num_entities, kg.num_base, kg.facts);
    if (g.EdgesOf(0).empty()) continue;
    ColumnBuilder builder(g, 0);
    const std::vector<double> duals(g.EdgesOf(0).size(), 1.0);
    const auto got = PriceRules(builder, duals, 0.0, 1e-3, {}, 2, 4);
    EXPECT_LE(got.size(), 2u);
    for (const auto& p : got) {
      EXPECT_LT(p.reduced_cost, -kReducedCostTolerance);
      EXPECT_DOUBLE_EQ(p.reduced_cost,
                       ReducedCost(ToLpColumn(p.column), duals, 0.0, 1e-3));
    }
  }
}

}  // namespace
}  // namespace lprules
