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

// Shared graphs and brute-force oracles for tests. The oracles work on raw
// fact lists and never call into the library's traversal code.

#ifndef LPRULES_TESTS_COMMON_FIXTURES_H_
#define LPRULES_TESTS_COMMON_FIXTURES_H_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <tuple>
#include <vector>

#include "lprules/kg_store.h"
#include "lprules/random.h"
#include "lprules/rule_engine.h"

namespace lprules::testing {

// A=0 B=1 C=2 D=3 E=4; r0=0 r1=1 r2=2; reverses are 3, 4, 5.
struct Toy1 {
  enum : EntityId { A = 0, B, C, D, E };
  enum : RelationId { r0 = 0, r1, r2, r0_inv, r1_inv, r2_inv };
  std::vector<Fact> facts{
      {A, r0, C}, {D, r0, C}, {A, r1, B}, {B, r2, C}, {D, r1, B}};
  KnowledgeGraph graph{5, 3, facts};
};

// Labeled edge set over 2n labels built straight from facts.
class EdgeOracle {
 public:
  EdgeOracle(std::size_t num_entities, std::size_t num_base,
             const std::vector<Fact>& facts)
      : n_(num_entities), base_(num_base) {
    for (const Fact& f : facts) {
      edges_.insert({f.tail, f.relation, f.head});
      edges_.insert({f.head, f.relation + static_cast<RelationId>(base_),
                     f.tail});
    }
  }

  bool Has(EntityId u, RelationId label, EntityId v,
           const std::optional<ExcludedEdge>& excl) const {
    if (excl) {
      const RelationId rev =
          excl->relation + static_cast<RelationId>(base_);
      if (label == excl->relation && u == excl->tail && v == excl->head)
        return false;
      if (label == rev && u == excl->head && v == excl->tail) return false;
    }
    return edges_.count({u, label, v}) > 0;
  }

  // Exhaustive enumeration of node sequences x = v0, ..., vl = y with all
  // nodes distinct.
  bool Holds(const Clause& c, EntityId x, EntityId y,
             const std::optional<ExcludedEdge>& excl) const {
    std::vector<EntityId> path{x};
    return Extend(c, path, y, excl);
  }

  std::vector<EntityId> Reachable(const Clause& c, EntityId x,
                                  const std::optional<ExcludedEdge>& excl)
      const {
    std::vector<EntityId> out;
    for (EntityId y = 0; y < n_; ++y) {
      if (Holds(c, x, y, excl)) out.push_back(y);
    }
    return out;
  }

  std::size_t num_entities() const { return n_; }

 private:
  bool Extend(const Clause& c, std::vector<EntityId>& path, EntityId y,
              const std::optional<ExcludedEdge>& excl) const {
    const std::size_t depth = path.size() - 1;
    if (depth == c.length()) return path.back() == y;
    for (EntityId v = 0; v < n_; ++v) {
      if (std::find(path.begin(), path.end(), v) != path.end()) continue;
      if (!Has(path.back(), c.body[depth], v, excl)) continue;
      path.push_back(v);
      const bool ok = Extend(c, path, y, excl);
      path.pop_back();
      if (ok) return true;
    }
    return false;
  }

  std::size_t n_;
  std::size_t base_;
  std::set<std::tuple<EntityId, RelationId, EntityId>> edges_;
};

struct RandomKg {
  std::size_t num_entities = 0;
  std::size_t num_base = 0;
  std::vector<Fact> facts;
};

inline RandomKg MakeRandomKg(Rng& rng, std::size_t max_entities,
                             std::size_t max_relations,
                             std::size_t max_facts) {
  RandomKg kg;
  kg.num_entities = 2 + rng.Uniform(max_entities - 1);
  kg.num_base = 1 + rng.Uniform(max_relations);
  const std::size_t m = 1 + rng.Uniform(max_facts);
  for (std::size_t i = 0; i < m; ++i) {
    Fact f;
    f.tail = static_cast<EntityId>(rng.Uniform(kg.num_entities));
    f.head = static_cast<EntityId>(rng.Uniform(kg.num_entities));
    f.relation = static_cast<RelationId>(rng.Uniform(kg.num_base));
    kg.facts.push_back(f);
  }
  return kg;
}

inline Clause MakeRandomClause(Rng& rng, std::size_t num_labels,
                               std::size_t max_len) {
  Clause c;
  const std::size_t len = 1 + rng.Uniform(max_len);
  for (std::size_t i = 0; i < len; ++i)
    c.body.push_back(static_cast<RelationId>(rng.Uniform(num_labels)));
  return c;
}

// Negative evidence of a clause summed over `edges`, from the oracle.
inline double OracleNeg(const EdgeOracle& oracle, const std::vector<Fact>& facts,
                        std::span<const Edge> edges,
                        RelationId r, const Clause& c) {
  std::set<std::pair<EntityId, EntityId>> known;
  for (const Fact& f : facts)
    if (f.relation == r) known.insert({f.tail, f.head});
  double neg = 0.0;
  for (const Edge& e : edges) {
    const std::optional<ExcludedEdge> excl = ExcludedEdge{e.tail, r, e.head};
    for (EntityId v : oracle.Reachable(c, e.tail, excl))
      if (!known.count({e.tail, v})) neg += 1.0;
    for (EntityId u = 0; u < oracle.num_entities(); ++u)
      if (oracle.Holds(c, u, e.head, excl) && !known.count({u, e.head}))
        neg += 1.0;
  }
  return neg;
}

}  // namespace lprules::testing

#endif  // LPRULES_TESTS_COMMON_FIXTURES_H_
