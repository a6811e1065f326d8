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

// Dataset ingestion and the immutable knowledge graph.
//
// Triple files hold one fact per line as subject<TAB>relation<TAB>object.
// The subject becomes the edge tail and the object the edge head, so a line
// encodes relation(subject, object). Every base relation r < n gets a
// reverse label r + n; the graph stores both directions of each fact.

#ifndef LPRULES_KG_STORE_H_
#define LPRULES_KG_STORE_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lprules/types.h"

namespace lprules {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& what);

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

// Injective string <-> id tables for entities and base relations.
class Vocabulary {
 public:
  EntityId InternEntity(std::string_view name);
  RelationId InternRelation(std::string_view name);

  std::optional<EntityId> FindEntity(std::string_view name) const;
  std::optional<RelationId> FindRelation(std::string_view name) const;

  const std::string& EntityName(EntityId id) const;
  const std::string& RelationName(RelationId id) const;

  // Name of a label in 0..2n-1; reverses render as "name^-1".
  std::string LabelName(RelationId label) const;

  // Parses a relation token that may denote a reverse ("X^-1" or "R_X").
  // A token that names a base relation verbatim always wins.
  std::optional<RelationId> ParseLabel(std::string_view token) const;

  std::size_t num_entities() const { return entity_names_.size(); }
  std::size_t num_relations() const { return relation_names_.size(); }

 private:
  std::vector<std::string> entity_names_;
  std::vector<std::string> relation_names_;
  std::unordered_map<std::string, EntityId> entity_ids_;
  std::unordered_map<std::string, RelationId> relation_ids_;
};

std::vector<Fact> ParseTriples(std::istream& in, Vocabulary& vocab,
                               const std::string& source_name);

// Throws std::runtime_error when the file cannot be opened and ParseError on
// malformed lines. An empty file yields an empty list.
std::vector<Fact> LoadTriples(const std::filesystem::path& path,
                              Vocabulary& vocab);

class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;
  // Builds a graph over base relations 0..num_base_relations-1. Duplicate
  // facts are stored once; per-relation edge lists keep first-occurrence
  // order.
  KnowledgeGraph(std::size_t num_entities, std::size_t num_base_relations,
                 std::span<const Fact> facts);

  std::size_t num_entities() const { return num_entities_; }
  std::size_t num_base_relations() const { return num_base_; }
  std::size_t num_labels() const { return 2 * num_base_; }
  std::size_t num_facts() const { return num_facts_; }

  RelationId Reverse(RelationId label) const {
    return label < num_base_ ? label + static_cast<RelationId>(num_base_)
                             : label - static_cast<RelationId>(num_base_);
  }
  bool IsBase(RelationId label) const { return label < num_base_; }

  // Sorted distinct heads v with node --label--> v. Throws
  // std::out_of_range for ids outside the graph.
  std::span<const EntityId> Neighbors(EntityId node, RelationId label) const;

  // Unchecked variant for hot loops.
  std::span<const EntityId> NeighborsUnchecked(EntityId node,
                                               RelationId label) const {
    const std::size_t slot = node * num_labels() + label;
    return {targets_.data() + offsets_[slot],
            targets_.data() + offsets_[slot + 1]};
  }

  bool HasEdge(EntityId tail, RelationId label, EntityId head) const;

  // E_r for a base relation r; empty for relations with no training facts.
  std::span<const Edge> EdgesOf(RelationId base_relation) const;

  // Number of outgoing labeled edges of a node over all 2n labels.
  std::size_t OutDegree(EntityId node) const {
    const std::size_t base = node * num_labels();
    return offsets_[base + num_labels()] - offsets_[base];
  }

 private:
  std::size_t num_entities_ = 0;
  std::size_t num_base_ = 0;
  std::size_t num_facts_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<EntityId> targets_;
  std::vector<std::vector<Edge>> edges_by_relation_;
};

enum class QuerySide { kTail, kHead };

// Known facts over train, valid and test for filtered ranking.
class FilterIndex {
 public:
  FilterIndex() = default;
  explicit FilterIndex(std::span<const Fact> facts) { Add(facts); }

  void Add(std::span<const Fact> facts);

  bool Contains(const Fact& f) const;

  // Known heads v of (tail, relation, v); sorted.
  std::span<const EntityId> KnownHeads(EntityId tail,
                                       RelationId relation) const;
  // Known tails u of (u, relation, head); sorted.
  std::span<const EntityId> KnownTails(RelationId relation,
                                       EntityId head) const;

  // Candidates for the query built from `fact` on the given side: every
  // entity except known answers other than the target. For kTail the query is
  // (tail, r, ?) with target head; for kHead it is (?, r, head) with target
  // tail.
  std::vector<EntityId> FilteredCandidates(const Fact& fact, QuerySide side,
                                           std::size_t num_entities) const;

 private:
  static std::uint64_t Key(std::uint32_t a, std::uint32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }
  void Finalize();

  std::unordered_map<std::uint64_t, std::vector<EntityId>> heads_;
  std::unordered_map<std::uint64_t, std::vector<EntityId>> tails_;
};

// A dataset directory with train.txt, valid.txt and test.txt sharing one
// vocabulary. Missing valid/test files load as empty splits.
struct Dataset {
  Vocabulary vocab;
  std::vector<Fact> train;
  std::vector<Fact> valid;
  std::vector<Fact> test;
};

// Appends the splits of `dir` to an existing vocabulary. train.txt is
// required.
void LoadSplits(const std::filesystem::path& dir, Vocabulary& vocab,
                std::vector<Fact>& train, std::vector<Fact>& valid,
                std::vector<Fact>& test);

Dataset LoadDataset(const std::filesystem::path& dir);

}  // namespace lprules

#endif  // LPRULES_KG_STORE_H_
