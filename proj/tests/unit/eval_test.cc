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

#include "lprules/eval.h"

#include <gtest/gtest.h>

#include <numeric>

#include "common/fixtures.h"
#include "common/rank_oracle.h"

namespace lprules {
namespace {

using testing::Toy1;

// {X:3, target:1, Y:1, Z:1} with target = 1.
struct TiedBlock {
  ScoreMap scores{{0, 3.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}};
  std::vector<EntityId> cand{0, 1, 2, 3};
};

TEST(TieKindTest, NamesRoundTrip) {
  for (TieKind k : {TieKind::kOptimistic, TieKind::kPessimistic,
                    TieKind::kMidpoint, TieKind::kRandomBreak}) {
    EXPECT_EQ(ParseTieKind(TieKindName(k)), k);
  }
  EXPECT_EQ(ParseTieKind("random"), TieKind::kRandomBreak);
  EXPECT_FALSE(ParseTieKind("lexicographic").has_value());
}

TEST(RankOfTest, PolicyExamples) {
  TiedBlock b;
  Rng rng(0);
  EXPECT_EQ(RankOf(b.scores, 1, b.cand, TieKind::kOptimistic, rng), 2.0);
  EXPECT_EQ(RankOf(b.scores, 1, b.cand, TieKind::kPessimistic, rng), 4.0);
  EXPECT_EQ(RankOf(b.scores, 1, b.cand, TieKind::kMidpoint, rng), 3.0);
  EXPECT_THROW(RankOf(b.scores, 9, b.cand, TieKind::kOptimistic, rng),
               std::invalid_argument);
}

TEST(RankOfTest, RandomBreakIsUniformOverTheBlock) {
  const auto check = testing::CheckRandomBreakUniform(1, 2, 30000, 42);
  EXPECT_TRUE(check.ok) << check.detail;
  const auto wide = testing::CheckRandomBreakUniform(3, 9, 30000, 7);
  EXPECT_TRUE(wide.ok) << wide.detail;
}

TEST(RankOfTest, PolicyOrdering) {
  const auto check = testing::CheckPolicyOrdering(3, 500);
  EXPECT_TRUE(check.ok) << check.detail;
}

TEST(RankOfTest, ScaleInvariance) {
  Rng gen(4);
  for (int c = 0; c < 200; ++c) {
    ScoreMap scores;
    ScoreMap scaled;
    std::vector<EntityId> cand;
    const double factor = 0.1 + static_cast<double>(gen.Uniform(50));
    for (EntityId v = 0; v < 20; ++v) {
      cand.push_back(v);
      const double s = static_cast<double>(gen.Uniform(4));
      scores[v] = s;
      scaled[v] = s * factor;
    }
    const auto target = static_cast<EntityId>(gen.Uniform(20));
    for (TieKind k : {TieKind::kOptimistic, TieKind::kPessimistic,
                      TieKind::kMidpoint, TieKind::kRandomBreak}) {
      Rng a(c);
      Rng b(c);
      EXPECT_EQ(RankOf(scores, target, cand, k, a),
                RankOf(scaled, target, cand, k, b));
    }
  }
}

TEST(FilteredRankTest, AgreesWithExplicitCandidates) {
  Rng gen(8);
  for (int c = 0; c < 300; ++c) {
    const std::size_t n = 2 + gen.Uniform(30);
    ScoreMap scores;
    for (EntityId v = 0; v < n; ++v)
      if (gen.Uniform(3) == 0) scores[v] = static_cast<double>(gen.Uniform(3));
    const auto target = static_cast<EntityId>(gen.Uniform(n));
    std::vector<EntityId> known;
    for (EntityId v = 0; v < n; ++v)
      if (gen.Uniform(4) == 0) known.push_back(v);
    std::vector<EntityId> cand;
    for (EntityId v = 0; v < n; ++v)
      if (v == target || !std::binary_search(known.begin(), known.end(), v))
        cand.push_back(v);
    for (TieKind k : {TieKind::kOptimistic, TieKind::kPessimistic,
                      TieKind::kMidpoint, TieKind::kRandomBreak}) {
      Rng a(c);
      Rng b(c);
      EXPECT_EQ(FilteredRank(scores, target, known, n, k, a),
                RankOf(scores, target, cand, k, b));
      Rng raw_rng(c);
      Rng filt_rng(c);
      std::vector<EntityId> all(n);
      std::iota(all.begin(), all.end(), 0u);
      if (k != TieKind::kRandomBreak) {
        EXPECT_LE(FilteredRank(scores, target, known, n, k, filt_rng),
                  RankOf(scores, target, all, k, raw_rng));
      }
    }
  }
}

TEST(SummarizeTest, Arithmetic) {
  const std::vector<double> ranks{1, 2, 4};
  const RankStats s = Summarize(ranks);
  EXPECT_DOUBLE_EQ(s.mrr, (1.0 + 0.5 + 0.25) / 3.0);
  EXPECT_DOUBLE_EQ(s.hits1, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.hits3, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.hits10, 1.0);
  EXPECT_EQ(s.num_queries, 3u);
  const RankStats mid = Summarize(std::vector<double>{1.5, 3.0, 10.5});
  EXPECT_EQ(mid.hits1, 0.0);
  EXPECT_DOUBLE_EQ(mid.hits3, 2.0 / 3.0);
  EXPECT_EQ(Summarize({}).num_queries, 0u);
}

TEST(EvaluateTest, Toy1TrainingFactsRankFirst) {
  Toy1 toy;
  std::vector<RuleSet> models(3);
  models[0].head = 0;
  models[0].rules.push_back({0, Clause{Toy1::r1, Toy1::r2}, 1.0});
  const std::vector<Fact> queries{{Toy1::A, 0, Toy1::C}, {Toy1::D, 0, Toy1::C}};
  FilterIndex filter(toy.facts);
  const Metrics m = Evaluate(toy.graph, models, queries, filter, 5,
                             {TieKind::kOptimistic, 0});
  EXPECT_EQ(m.mrr, 1.0);
  EXPECT_EQ(m.num_queries, 4u);
  EXPECT_EQ(m.per_relation.at(0).mrr, 1.0);
}

TEST(EvaluateTest, EmptyModelMatchesHarmonicBaseline) {
  const std::size_t e = 10;
  std::vector<Fact> facts;
  for (EntityId i = 0; i + 1 < e; ++i) facts.push_back({i, 0, i + 1});
  KnowledgeGraph g(e, 1, facts);
  // Queries about pairs with nothing else known.
  std::vector<Fact> queries;
  Rng gen(1);
  for (int q = 0; q < 5000; ++q) {
    queries.push_back({static_cast<EntityId>(gen.Uniform(e)), 0,
                       static_cast<EntityId>(gen.Uniform(e))});
  }
  const Metrics m =
      Evaluate(g, std::vector<RuleSet>{}, queries, FilterIndex{}, e,
               {TieKind::kRandomBreak, 77});
  EXPECT_EQ(m.num_queries, 10000u);
  EXPECT_NEAR(m.mrr, testing::HarmonicOver(e), 0.02 * testing::HarmonicOver(e));
}

TEST(EvaluateTest, WorkersDoNotChangeRanks) {
  Rng gen(12);
  const auto kg = testing::MakeRandomKg(gen, 30, 3, 120);
  KnowledgeGraph g(kg.num_entities, kg.num_base, kg.facts);
  std::vector<RuleSet> models(kg.num_base);
  for (RelationId r = 0; r < kg.num_base; ++r) {
    models[r].head = r;
    models[r].rules.push_back({r, Clause{(r + 1) % g.num_labels()}, 0.5});
    models[r].rules.push_back(
        {r, Clause{r + 1 < g.num_labels() ? r + 1 : 0, r}, 0.25});
  }
  FilterIndex filter(kg.facts);
  const TiePolicy policy{TieKind::kRandomBreak, 3};
  const auto one = QueryRanks(g, models, kg.facts, filter,
                              kg.num_entities, policy, 1);
  const auto four = QueryRanks(g, models, kg.facts, filter,
                               kg.num_entities, policy, 4);
  EXPECT_EQ(one, four);
  const Metrics m = Evaluate(g, models, kg.facts, filter, kg.num_entities,
                             policy, 2);
  EXPECT_LE(m.hits1, m.hits3);
  EXPECT_LE(m.hits3, m.hits10);
  EXPECT_GE(m.mrr, m.hits1);
  EXPECT_EQ(m.num_queries, 2 * kg.facts.size());
}

TEST(EvaluateTest, InductiveGraphTransfersRules) {
  // Training never saw entities 10.. but [r1, r2] still explains r0.
  const std::vector<Fact> inference{{0, 1, 1}, {1, 2, 2}, {3, 1, 4},
                                    {4, 2, 5}};
  KnowledgeGraph g(6, 3, inference);
  std::vector<RuleSet> models(3);
  models[0].rules.push_back({0, Clause{1, 2}, 1.0});
  // A rule over a label the inference graph lacks scores nothing.
  models[0].rules.push_back({0, Clause{17}, 1.0});
  const std::vector<Fact> test{{0, 0, 2}, {3, 0, 5}};
  FilterIndex filter(inference);
  filter.Add(test);
  const Metrics m = EvaluateInductive(models, g, test, filter, 6,
                                      {TieKind::kPessimistic, 0});
  EXPECT_EQ(m.mrr, 1.0);
}

TEST(EvaluateTest, MetricsJsonKeysByRelationName) {
  Vocabulary v;
  v.InternRelation("p");
  Metrics m;
  m.mrr = 0.5;
  m.num_queries = 2;
  m.per_relation[0] = RankStats{0.5, 0.5, 0.5, 1.0, 2};
  const auto j = MetricsToJson(m, v);
  EXPECT_EQ(j["mrr"], 0.5);
  EXPECT_EQ(j["per_relation"]["p"]["hits10"], 1.0);
  std::vector<RuleSet> sets(2);
  sets[0].rules.resize(3);
  EXPECT_DOUBLE_EQ(AverageRulesPerRelation(sets), 1.5);
}

}  // namespace
}  // namespace lprules
