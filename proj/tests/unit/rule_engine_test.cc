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

#include "lprules/rule_engine.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "common/fixtures.h"

namespace lprules {
namespace {

using testing::EdgeOracle;
using testing::Toy1;

TEST(ClauseTest, ReverseIsAnInvolution) {
  Toy1 toy;
  const Clause c{Toy1::r1, Toy1::r2};
  EXPECT_EQ(ReverseClause(toy.graph, c),
            (Clause{Toy1::r2_inv, Toy1::r1_inv}));
  EXPECT_EQ(ReverseClause(toy.graph, Clause{Toy1::r0}),
            (Clause{Toy1::r0_inv}));
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Clause r = testing::MakeRandomClause(rng, 6, 5);
    EXPECT_EQ(ReverseClause(toy.graph, ReverseClause(toy.graph, r)), r);
  }
}

TEST(ClauseTest, RendersReverseLabels) {
  Vocabulary v;
  v.InternRelation("p");
  v.InternRelation("q");
  EXPECT_EQ(ClauseToString(v, Clause{0, 3}), "p,q^-1");
}

TEST(GroundingTest, Toy1Examples) {
  Toy1 toy;
  const auto& g = toy.graph;
  EXPECT_TRUE(ClauseHolds(g, {Toy1::r1, Toy1::r2}, Toy1::A, Toy1::C));
  EXPECT_FALSE(ClauseHolds(g, {Toy1::r1}, Toy1::A, Toy1::C));
  EXPECT_FALSE(ClauseHolds(g, {Toy1::r0}, Toy1::A, Toy1::C,
                           ExcludedEdge{Toy1::A, Toy1::r0, Toy1::C}));
  EXPECT_TRUE(ClauseHolds(g, {Toy1::r0}, Toy1::A, Toy1::C));
  EXPECT_EQ(ReachableSet(g, {Toy1::r1, Toy1::r2}, Toy1::A),
            (std::vector<EntityId>{Toy1::C}));
  EXPECT_EQ(ReachableSet(g, {Toy1::r1}, Toy1::D),
            (std::vector<EntityId>{Toy1::B}));
  EXPECT_EQ(ReachableSet(g, {Toy1::r2_inv, Toy1::r1_inv}, Toy1::C),
            (std::vector<EntityId>{Toy1::A, Toy1::D}));
}

TEST(GroundingTest, RejectsRepeatedNodes) {
  // a -p-> b -p^-1-> a returns to the start.
  const std::vector<Fact> facts{{0, 0, 1}};
  KnowledgeGraph g(2, 1, facts);
  EXPECT_FALSE(ClauseHolds(g, {0, 1}, 0, 0));
  EXPECT_TRUE(ReachableSet(g, {0, 1}, 0).empty());
  // a -p-> b -p-> c -p-> b needs b twice.
  const std::vector<Fact> loop{{0, 0, 1}, {1, 0, 2}, {2, 0, 1}};
  KnowledgeGraph h(3, 1, loop);
  EXPECT_FALSE(ClauseHolds(h, {0, 0, 0}, 0, 1));
}

TEST(GroundingTest, ExclusionRemovesBothDirections) {
  Toy1 toy;
  const ExcludedEdge e{Toy1::A, Toy1::r0, Toy1::C};
  EXPECT_FALSE(ClauseHolds(toy.graph, {Toy1::r0_inv}, Toy1::C, Toy1::A, e));
  EXPECT_TRUE(ClauseHolds(toy.graph, {Toy1::r0_inv}, Toy1::C, Toy1::D, e));
}

TEST(GroundingTest, MatchesExhaustivePathEnumeration) {
  Rng rng(2026);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto kg = testing::MakeRandomKg(rng, 12, 4, 40);
    KnowledgeGraph g(kg.num_entities, kg.num_base, kg.facts);
    EdgeOracle oracle(kg.num_entities, kg.num_base, kg.facts);
    const Clause c = testing::MakeRandomClause(rng, g.num_labels(), 4);
    std::optional<ExcludedEdge> excl;
    if (rng.Uniform(2) == 0) {
      const Fact& f = kg.facts[rng.Uniform(kg.facts.size())];
      excl = ExcludedEdge{f.tail, f.relation, f.head};
    }
    const auto x = static_cast<EntityId>(rng.Uniform(kg.num_entities));
    const auto y = static_cast<EntityId>(rng.Uniform(kg.num_entities));
    if (ClauseHolds(g, c, x, y, excl) != oracle.Holds(c, x, y, excl))
      ++mismatches;
    if (ReachableSet(g, c, x, excl) != oracle.Reachable(c, x, excl))
      ++mismatches;
  }
  EXPECT_EQ(mismatches, 0u);
}

TEST(GroundingTest, AddingFactsNeverBreaksAPath) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto kg = testing::MakeRandomKg(rng, 8, 3, 20);
    const Clause c = testing::MakeRandomClause(rng, 2 * kg.num_base, 3);
    KnowledgeGraph before(kg.num_entities, kg.num_base, kg.facts);
    kg.facts.push_back({static_cast<EntityId>(rng.Uniform(kg.num_entities)),
                        static_cast<RelationId>(rng.Uniform(kg.num_base)),
                        static_cast<EntityId>(rng.Uniform(kg.num_entities))});
    KnowledgeGraph after(kg.num_entities, kg.num_base, kg.facts);
    for (EntityId x = 0; x < kg.num_entities; ++x) {
      for (EntityId y = 0; y < kg.num_entities; ++y) {
        if (ClauseHolds(before, c, x, y)) EXPECT_TRUE(ClauseHolds(after, c, x, y));
      }
    }
  }
}

TEST(CoverageTest, Toy1Columns) {
  Toy1 toy;
  EXPECT_EQ(CoverageColumn(toy.graph, Toy1::r0, {Toy1::r1, Toy1::r2}),
            (std::vector<bool>{true, true}));
  EXPECT_EQ(CoverageColumn(toy.graph, Toy1::r0, {Toy1::r1}),
            (std::vector<bool>{false, false}));
  EXPECT_EQ(CoverageColumn(toy.graph, Toy1::r0, {Toy1::r0}),
            (std::vector<bool>{false, false}));
}

TEST(CoverageTest, ParallelEdgeOfSameRelationStillCovers) {
  // (a, r, b) is explained by [s, r] through c only if (c, r, b) survives.
  const std::vector<Fact> facts{{0, 0, 1}, {0, 1, 2}, {2, 0, 1}};
  KnowledgeGraph g(3, 2, facts);
  EXPECT_EQ(CoverageColumn(g, 0, {1, 0}),
            (std::vector<bool>{true, false}));
}

TEST(NegCountTest, Toy1Values) {
  Toy1 toy;
  EXPECT_EQ(NegCount(toy.graph, Toy1::r0, {Toy1::r1, Toy1::r2}), 0.0);
  EXPECT_EQ(NegCount(toy.graph, Toy1::r0, {Toy1::r1}), 2.0);
  // C -r2^-1-> B from both edges, and B is not a valid tail.
  EXPECT_EQ(NegCount(toy.graph, Toy1::r0, {Toy1::r2}), 2.0);
}

TEST(NegCountTest, MatchesOracleOnRandomGraphs) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto kg = testing::MakeRandomKg(rng, 9, 3, 25);
    KnowledgeGraph g(kg.num_entities, kg.num_base, kg.facts);
    EdgeOracle oracle(kg.num_entities, kg.num_base, kg.facts);
    const auto r = static_cast<RelationId>(rng.Uniform(kg.num_base));
    if (g.EdgesOf(r).empty()) continue;
    const Clause c = testing::MakeRandomClause(rng, g.num_labels(), 3);
    const double expect =
        testing::OracleNeg(oracle, kg.facts, g.EdgesOf(r), r, c);
    EXPECT_EQ(NegCount(g, r, c), expect) << "trial " << trial;
    const auto cov = CoverageColumn(g, r, c);
    const auto edges = g.EdgesOf(r);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const ExcludedEdge ex{edges[i].tail, r, edges[i].head};
      EXPECT_EQ(cov[i], oracle.Holds(c, edges[i].tail, edges[i].head, ex));
    }
  }
}

TEST(NegCountTest, SampledEstimateIsScaledAndNearExact) {
  Rng rng(8);
  std::vector<Fact> facts;
  for (EntityId i = 0; i < 30; ++i) {
    facts.push_back({i, 0, static_cast<EntityId>((i + 1) % 30)});
    facts.push_back({i, 1, static_cast<EntityId>((i + 7) % 30)});
    facts.push_back({static_cast<EntityId>((i + 3) % 30), 1, i});
  }
  KnowledgeGraph g(30, 2, facts);
  const Clause c{1, 1};
  const double exact = NegCount(g, 0, c);
  ASSERT_GT(exact, 0.0);
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const double est = NegCount(g, 0, c, 0.3, seed);
    // Sample of ceil(0.3 * 30) = 9 edges scaled by 30 / 9.
    EXPECT_NEAR(std::fmod(est * 9.0 / 30.0, 1.0), 0.0, 1e-9);
    sum += est;
  }
  EXPECT_NEAR(sum / 50.0, exact, 0.25 * exact);
}

TEST(SampleEdgesTest, SizeAndDeterminism) {
  EXPECT_EQ(SampleEdges(10, 1.0, 4).size(), 10u);
  EXPECT_EQ(SampleEdges(10, 0.25, 4).size(), 3u);
  EXPECT_EQ(SampleEdges(10, 0.01, 4).size(), 1u);
  EXPECT_EQ(SampleEdges(100, 0.2, 9), SampleEdges(100, 0.2, 9));
  const auto s = SampleEdges(100, 0.2, 9);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  EXPECT_EQ(std::set<std::uint32_t>(s.begin(), s.end()).size(), s.size());
}

TEST(ScoreTest, Toy1Scores) {
  Toy1 toy;
  RuleSet rs;
  rs.head = Toy1::r0;
  rs.rules.push_back({Toy1::r0, Clause{Toy1::r1, Toy1::r2}, 1.0});
  EXPECT_EQ(Score(toy.graph, rs, Toy1::A, Toy1::C), 1.0);
  EXPECT_EQ(Score(toy.graph, rs, Toy1::A, Toy1::B), 0.0);
  const auto tails = ScoreAllTails(toy.graph, rs, Toy1::A);
  EXPECT_EQ(tails.size(), 1u);
  EXPECT_EQ(tails.at(Toy1::C), 1.0);
  const auto heads = ScoreAllHeads(toy.graph, rs, Toy1::C);
  EXPECT_EQ(heads.size(), 2u);
  EXPECT_EQ(heads.at(Toy1::A), 1.0);
  EXPECT_EQ(heads.at(Toy1::D), 1.0);
  EXPECT_TRUE(ScoreAllTails(toy.graph, RuleSet{}, Toy1::A).empty());
  EXPECT_EQ(rs.Complexity(), 3u);
}

TEST(ScoreTest, ScoreAllAgreesPointwise) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto kg = testing::MakeRandomKg(rng, 10, 3, 30);
    KnowledgeGraph g(kg.num_entities, kg.num_base, kg.facts);
    RuleSet rs;
    const std::size_t k = 1 + rng.Uniform(3);
    for (std::size_t i = 0; i < k; ++i) {
      rs.rules.push_back({0, testing::MakeRandomClause(rng, g.num_labels(), 3),
                          0.25 * static_cast<double>(1 + rng.Uniform(4))});
    }
    const auto t = static_cast<EntityId>(rng.Uniform(kg.num_entities));
    const auto tails = ScoreAllTails(g, rs, t);
    const auto heads = ScoreAllHeads(g, rs, t);
    for (EntityId v = 0; v < kg.num_entities; ++v) {
      const double fwd = tails.count(v) ? tails.at(v) : 0.0;
      const double bwd = heads.count(v) ? heads.at(v) : 0.0;
      EXPECT_DOUBLE_EQ(fwd, Score(g, rs, t, v));
      EXPECT_DOUBLE_EQ(bwd, Score(g, rs, v, t));
    }
  }
}

// Sum over edges of the scores of invalid answers, with the same per-edge
// exclusion as the negative counts, against sum_k neg_k w_k.
double InvalidScoreMass(const KnowledgeGraph& g, RelationId r,
                        const RuleSet& rs) {
  double total = 0.0;
  PathWalker walker(g);
  for (const Edge& e : g.EdgesOf(r)) {
    const ExcludedEdge ex{e.tail, r, e.head};
    for (EntityId v = 0; v < g.num_entities(); ++v) {
      double right = 0.0;
      double left = 0.0;
      for (const Rule& rule : rs.rules) {
        if (walker.Holds(rule.clause, e.tail, v, ex)) right += rule.weight;
        if (walker.Holds(rule.clause, v, e.head, ex)) left += rule.weight;
      }
      if (!g.HasEdge(e.tail, r, v)) total += right;
      if (!g.HasEdge(v, r, e.head)) total += left;
    }
  }
  return total;
}

TEST(InvalidScoreMassTest, EqualsWeightedNeg) {
  Toy1 toy;
  RuleSet toy_rs;
  toy_rs.rules = {{0, Clause{Toy1::r1}, 0.5},
                  {0, Clause{Toy1::r1, Toy1::r2}, 1.0},
                  {0, Clause{Toy1::r0_inv, Toy1::r1}, 0.25}};
  double weighted = 0.0;
  for (const Rule& rule : toy_rs.rules)
    weighted += rule.weight * NegCount(toy.graph, Toy1::r0, rule.clause);
  EXPECT_NEAR(InvalidScoreMass(toy.graph, Toy1::r0, toy_rs), weighted, 1e-9);

  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto kg = testing::MakeRandomKg(rng, 9, 3, 30);
    KnowledgeGraph g(kg.num_entities, kg.num_base, kg.facts);
    if (g.EdgesOf(0).empty()) continue;
    RuleSet rs;
    double expect = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Clause c = testing::MakeRandomClause(rng, g.num_labels(), 3);
      const double w = 0.125 * static_cast<double>(1 + rng.Uniform(8));
      rs.rules.push_back({0, c, w});
      expect += w * NegCount(g, 0, c);
    }
    EXPECT_NEAR(InvalidScoreMass(g, 0, rs), expect, 1e-9);
  }
}

TEST(ColumnBuilderTest, AgreesWithFreeFunctions) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto kg = testing::MakeRandomKg(rng, 10, 3, 30);
    KnowledgeGraph g(kg.num_entities, kg.num_base, kg.facts);
    if (g.EdgesOf(1 % kg.num_base).empty()) continue;
    const RelationId r = 1 % kg.num_base;
    ColumnBuilder builder(g, r);
    for (int k = 0; k < 4; ++k) {
      const Clause c = testing::MakeRandomClause(rng, g.num_labels(), 3);
      const RuleColumn col = builder.Build(c);
      const auto bits = CoverageColumn(g, r, c);
      std::vector<std::uint32_t> expect;
      for (std::uint32_t i = 0; i < bits.size(); ++i)
        if (bits[i]) expect.push_back(i);
      EXPECT_EQ(col.covered, expect);
      EXPECT_EQ(builder.Coverage(c), expect);
      EXPECT_EQ(col.neg, NegCount(g, r, c));
      EXPECT_EQ(col.num_edges, g.EdgesOf(r).size());
      for (std::uint32_t i = 0; i < bits.size(); ++i)
        EXPECT_EQ(col.Covers(i), bits[i]);
    }
  }
}

TEST(ColumnBuilderTest, RejectsReverseHead) {
  Toy1 toy;
  EXPECT_THROW(ColumnBuilder(toy.graph, Toy1::r0_inv), std::invalid_argument);
}

}  // namespace
}  // namespace lprules
