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

// Candidate clause generation for a head relation r.

#ifndef LPRULES_HEURISTICS_H_
#define LPRULES_HEURISTICS_H_

#include <cstddef>
#include <span>
#include <unordered_set>
#include <vector>

#include "lprules/kg_store.h"
#include "lprules/lp.h"
#include "lprules/rule_engine.h"

namespace lprules {

inline constexpr double kReducedCostTolerance = 1e-7;

// All length-1 clauses [r'] (r' != r) and length-2 clauses over the full
// label alphabet that hold on at least `min_support` edges of E_r. Length-1
// clauses come first in label order, then length-2 clauses in lexicographic
// order.
std::vector<Clause> Heuristic1(const KnowledgeGraph& g, RelationId r,
                               std::size_t min_support = 1);

// Clauses read off one edge: the lexicographically smallest label sequence
// among shortest simple paths tail ~> head avoiding the edge itself, then the
// smallest one of length shortest + 1. Paths longer than max_len are skipped.
std::vector<Clause> ShortestPathClauses(const KnowledgeGraph& g, RelationId r,
                                        const Edge& edge, std::size_t max_len);

// Union of ShortestPathClauses over E_r, deduplicated, first-seen order.
std::vector<Clause> Heuristic2(const KnowledgeGraph& g, RelationId r,
                               std::size_t max_len);

// LP view of a rule column.
LpColumn ToLpColumn(const RuleColumn& column);

struct PricedColumn {
  RuleColumn column;
  double reduced_cost = 0.0;
};

// Dual-guided Heuristic 2. Visits edges by decreasing dual (ties by index),
// derives their shortest-path clauses, and keeps novel clauses whose reduced
// cost is below -kReducedCostTolerance. Stops after max_new acceptances.
std::vector<PricedColumn> PriceRules(
    ColumnBuilder& builder, std::span<const double> duals, double lambda,
    double tau, const std::unordered_set<Clause, ClauseHash>& existing,
    std::size_t max_new, std::size_t max_len);

}  // namespace lprules

#endif  // LPRULES_HEURISTICS_H_
