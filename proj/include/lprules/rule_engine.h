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

// Chain-rule semantics over a KnowledgeGraph.
//
// A clause is a sequence of labels r_1..r_l. It holds on (x, y) iff there is
// a simple relational path x -r_1-> x_1 ... -r_l-> y, where simple means no
// node (endpoints included) appears twice. A rule for head relation r pairs a
// clause with a weight; a RuleSet scores (x, y) by summing the weights of the
// clauses that hold.

#ifndef LPRULES_RULE_ENGINE_H_
#define LPRULES_RULE_ENGINE_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lprules/kg_store.h"
#include "lprules/types.h"

namespace lprules {

// Upper bound on clause length accepted anywhere in the library; grounding
// is exponential in the length.
inline constexpr std::size_t kMaxClauseLength = 8;

struct Clause {
  std::vector<RelationId> body;

  Clause() = default;
  Clause(std::initializer_list<RelationId> labels) : body(labels) {}
  explicit Clause(std::vector<RelationId> labels) : body(std::move(labels)) {}

  std::size_t length() const { return body.size(); }
  std::size_t complexity() const { return 1 + body.size(); }
  bool Mentions(RelationId label) const;

  friend auto operator<=>(const Clause&, const Clause&) = default;
  friend bool operator==(const Clause&, const Clause&) = default;
};

struct ClauseHash {
  std::size_t operator()(const Clause& c) const {
    std::uint64_t h = c.body.size();
    for (RelationId r : c.body) h = HashCombine(h, r);
    return static_cast<std::size_t>(h);
  }
};

// Body reversed, each label replaced by its reverse. An involution.
Clause ReverseClause(const KnowledgeGraph& g, const Clause& c);

std::string ClauseToString(const Vocabulary& vocab, const Clause& c);

struct Rule {
  RelationId head = 0;
  Clause clause;
  double weight = 0.0;
};

struct RuleSet {
  RelationId head = 0;
  std::vector<Rule> rules;

  std::size_t size() const { return rules.size(); }
  bool empty() const { return rules.empty(); }
  // Sum over rules of 1 + clause length.
  std::size_t Complexity() const;
};

// One labeled edge removed from traversal in both directions: tail -r-> head
// and head -r^-1-> tail.
struct ExcludedEdge {
  EntityId tail = 0;
  RelationId relation = 0;
  EntityId head = 0;
};

// Reusable scratch for path enumeration. Not thread-safe; one per worker.
class PathWalker {
 public:
  explicit PathWalker(const KnowledgeGraph& g);

  // Sorted set of v such that the clause holds on (start, v).
  std::vector<EntityId> Reachable(const Clause& c, EntityId start,
                                  const std::optional<ExcludedEdge>& excl);

  bool Holds(const Clause& c, EntityId x, EntityId y,
             const std::optional<ExcludedEdge>& excl);

  const KnowledgeGraph& graph() const { return *g_; }

 private:
  bool Blocked(EntityId u, RelationId label, EntityId v) const;
  void Collect(const Clause& c, std::size_t depth, EntityId node);
  bool Search(const Clause& c, std::size_t depth, EntityId node, EntityId y);

  const KnowledgeGraph* g_;
  std::optional<ExcludedEdge> excl_;
  std::vector<std::uint8_t> on_path_;
  std::vector<std::uint8_t> seen_;
  std::vector<EntityId> found_;
};

bool ClauseHolds(const KnowledgeGraph& g, const Clause& c, EntityId x,
                 EntityId y, const std::optional<ExcludedEdge>& excl = {});

std::vector<EntityId> ReachableSet(const KnowledgeGraph& g, const Clause& c,
                                   EntityId start,
                                   const std::optional<ExcludedEdge>& excl = {});

// Bit i is set iff the clause holds on edge i of E_r with that edge itself
// excluded from traversal.
std::vector<bool> CoverageColumn(const KnowledgeGraph& g, RelationId r,
                                 const Clause& c);

// Negative evidence of a clause for head relation r: per edge (t, r, h) of
// E_r, the number of endpoints reached from t that are not r-neighbours of t
// in the training graph plus the number of start points reaching h that are
// not r-predecessors of h, both with the edge excluded. With
// sample_fraction < 1 the sum runs over a seeded sample of ceil(frac * m)
// edges and is scaled by m / sample size.
double NegCount(const KnowledgeGraph& g, RelationId r, const Clause& c,
                double sample_fraction = 1.0, std::uint64_t seed = 0);

// Sorted edge indices used by NegCount for the given fraction and seed.
std::vector<std::uint32_t> SampleEdges(std::size_t m, double sample_fraction,
                                       std::uint64_t seed);

// LP data of one candidate rule for head relation r.
struct RuleColumn {
  Clause clause;
  std::vector<std::uint32_t> covered;  // sorted indices into E_r
  std::size_t num_edges = 0;
  double neg = 0.0;

  std::size_t complexity() const { return clause.complexity(); }
  bool Covers(std::uint32_t edge) const;
};

// Builds RuleColumns for one head relation, sharing scratch buffers and the
// negative-sampling edge subset across clauses.
class ColumnBuilder {
 public:
  ColumnBuilder(const KnowledgeGraph& g, RelationId r,
                double sample_fraction = 1.0, std::uint64_t seed = 0);

  RuleColumn Build(const Clause& c);

  // Coverage only, without negative evidence.
  std::vector<std::uint32_t> Coverage(const Clause& c);

  RelationId relation() const { return r_; }
  std::size_t num_edges() const { return edges_.size(); }
  const KnowledgeGraph& graph() const { return *g_; }

 private:
  const KnowledgeGraph* g_;
  RelationId r_;
  std::span<const Edge> edges_;
  std::vector<std::uint8_t> in_sample_;
  double scale_ = 1.0;
  PathWalker walker_;
};

double Score(const KnowledgeGraph& g, const RuleSet& rs, EntityId x,
             EntityId y);

// Non-zero scores f_r(t, v) over all v. Absent entities score 0.
std::unordered_map<EntityId, double> ScoreAllTails(const KnowledgeGraph& g,
                                                   const RuleSet& rs,
                                                   EntityId t);
// Non-zero scores f_r(u, h) over all u.
std::unordered_map<EntityId, double> ScoreAllHeads(const KnowledgeGraph& g,
                                                   const RuleSet& rs,
                                                   EntityId h);

}  // namespace lprules

#endif  // LPRULES_RULE_ENGINE_H_
