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


// Filtered link-prediction ranking: tie policies, per-query ranks, MRR and
// Hits@k.

#ifndef LPRULES_EVAL_H_
#define LPRULES_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "lprules/kg_store.h"
#include "lprules/random.h"
#include "lprules/rule_engine.h"

namespace lprules {

enum class TieKind { kOptimistic, kPessimistic, kMidpoint, kRandomBreak };

std::optional<TieKind> ParseTieKind(std::string_view name);
std::string_view TieKindName(TieKind kind);

struct TiePolicy {
  TieKind kind = TieKind::kRandomBreak;
  std::uint64_t seed = 0;
};

using ScoreMap = std::unordered_map<EntityId, double>;

// Rank given `greater` competitors with a strictly larger score and `equal`
// competitors with the same score. Only kRandomBreak draws from rng.
double RankFromCounts(std::size_t greater, std::size_t equal, TieKind kind,
                      Rng& rng);

// Rank of target among `candidates` (which must contain it). Entities absent
// from `scores` score 0.
double RankOf(const ScoreMap& scores, EntityId target,
              std::span<const EntityId> candidates, TieKind kind, Rng& rng);

// Same as RankOf over the candidate universe 0..num_entities-1 minus every
// entity in `known` other than target. `known` must be sorted.
double FilteredRank(const ScoreMap& scores, EntityId target,
                    std::span<const EntityId> known, std::size_t num_entities,
                    TieKind kind, Rng& rng);

struct RankStats {
  double mrr = 0.0;
  double hits1 = 0.0;
  double hits3 = 0.0;
  double hits10 = 0.0;
  std::size_t num_queries = 0;
};

// Means over ranks, summed in the given order.
RankStats Summarize(std::span<const double> ranks);

struct Metrics : RankStats {
  std::map<RelationId, RankStats> per_relation;
};

// Two ranks per fact: the (t, r, ?) query then the (?, r, h) query. Each
// query draws from its own stream DeriveSeed(policy.seed, {index, side}), so
// the result does not depend on `workers`. rulesets[r] scores relation r;
// relations beyond the span score 0, and rules with labels the graph does
// not know are ignored.
std::vector<double> QueryRanks(const KnowledgeGraph& g,
                               std::span<const RuleSet> rulesets,
                               std::span<const Fact> facts,
                               const FilterIndex& filter,
                               std::size_t num_entities, TiePolicy policy,
                               std::size_t workers = 0);

Metrics Evaluate(const KnowledgeGraph& g, std::span<const RuleSet> rulesets,
                 std::span<const Fact> facts, const FilterIndex& filter,
                 std::size_t num_entities, TiePolicy policy,
                 std::size_t workers = 0);

// Evaluation on a separate inference graph whose entities are disjoint from
// training. Rules transfer because they never mention entities.
Metrics EvaluateInductive(std::span<const RuleSet> rulesets,
                          const KnowledgeGraph& inference_graph,
                          std::span<const Fact> test_facts,
                          const FilterIndex& filter, std::size_t num_entities,
                          TiePolicy policy, std::size_t workers = 0);

double AverageRulesPerRelation(std::span<const RuleSet> rulesets);

nlohmann::json MetricsToJson(const Metrics& metrics, const Vocabulary& vocab);

}  // namespace lprules

#endif  // LPRULES_EVAL_H_
