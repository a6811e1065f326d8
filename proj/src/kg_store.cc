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

#include "lprules/kg_store.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>
#include <utility>

namespace lprules {

ParseError::ParseError(const std::string& source, std::size_t line,
                       const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
      source_(source),
      line_(line) {}

EntityId Vocabulary::InternEntity(std::string_view name) {
  std::string key(name);
  auto [it, inserted] = entity_ids_.try_emplace(
      key, static_cast<EntityId>(entity_names_.size()));
  if (inserted) entity_names_.push_back(std::move(key));
  return it->second;
}

RelationId Vocabulary::InternRelation(std::string_view name) {
  std::string key(name);
  auto [it, inserted] = relation_ids_.try_emplace(
      key, static_cast<RelationId>(relation_names_.size()));
  if (inserted) relation_names_.push_back(std::move(key));
  return it->second;
}

std::optional<EntityId> Vocabulary::FindEntity(std::string_view name) const {
  auto it = entity_ids_.find(std::string(name));
  if (it == entity_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationId> Vocabulary::FindRelation(
    std::string_view name) const {
  auto it = relation_ids_.find(std::string(name));
  if (it == relation_ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::EntityName(EntityId id) const {
  return entity_names_.at(id);
}

const std::string& Vocabulary::RelationName(RelationId id) const {
  return relation_names_.at(id);
}

std::string Vocabulary::LabelName(RelationId label) const {
  const std::size_t n = relation_names_.size();
  if (label < n) return relation_names_[label];
  return relation_names_.at(label - n) + "^-1";
}

std::optional<RelationId> Vocabulary::ParseLabel(
    std::string_view token) const {
  if (auto id = FindRelation(token)) return id;
  const auto n = static_cast<RelationId>(relation_names_.size());
  constexpr std::string_view kSuffix = "^-1";
  constexpr std::string_view kPrefix = "R_";
  if (token.size() > kSuffix.size() && token.ends_with(kSuffix)) {
    if (auto id = FindRelation(token.substr(0, token.size() - kSuffix.size())))
      return *id + n;
  }
  if (token.size() > kPrefix.size() && token.starts_with(kPrefix)) {
    if (auto id = FindRelation(token.substr(kPrefix.size()))) return *id + n;
  }
  return std::nullopt;
}

std::vector<Fact> ParseTriples(std::istream& in, Vocabulary& vocab,
                               const std::string& source_name) {
  std::vector<Fact> facts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view rest(line);
    std::string_view fields[3];
    std::size_t count = 0;
    for (;;) {
      const std::size_t tab = rest.find('\t');
      if (count < 3) fields[count] = rest.substr(0, tab);
      ++count;
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (count != 3) {
      throw ParseError(source_name, line_no,
                       "expected 3 tab-separated fields, found " +
                           std::to_string(count));
    }
    Fact f;
    f.tail = vocab.InternEntity(fields[0]);
    f.relation = vocab.InternRelation(fields[1]);
    f.head = vocab.InternEntity(fields[2]);
    facts.push_back(f);
  }
  return facts;
}

std::vector<Fact> LoadTriples(const std::filesystem::path& path,
                              Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return ParseTriples(in, vocab, path.string());
}

KnowledgeGraph::KnowledgeGraph(std::size_t num_entities,
                               std::size_t num_base_relations,
                               std::span<const Fact> facts)
    : num_entities_(num_entities),
      num_base_(num_base_relations),
      edges_by_relation_(num_base_relations) {
  const std::size_t labels = num_labels();
  std::unordered_set<Fact, FactHash> seen;
  seen.reserve(facts.size() * 2);
  std::vector<Fact> unique;
  unique.reserve(facts.size());
  for (const Fact& f : facts) {
    if (f.relation >= num_base_ || f.tail >= num_entities_ ||
        f.head >= num_entities_) {
      throw std::out_of_range("fact outside graph bounds");
    }
    if (seen.insert(f).second) {
      unique.push_back(f);
      edges_by_relation_[f.relation].push_back({f.tail, f.head});
    }
  }
  num_facts_ = unique.size();

  offsets_.assign(num_entities_ * labels + 1, 0);
  for (const Fact& f : unique) {
    ++offsets_[f.tail * labels + f.relation + 1];
    ++offsets_[f.head * labels + Reverse(f.relation) + 1];
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
  targets_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const Fact& f : unique) {
    targets_[cursor[f.tail * labels + f.relation]++] = f.head;
    targets_[cursor[f.head * labels + Reverse(f.relation)]++] = f.tail;
  }
  for (std::size_t slot = 0; slot + 1 < offsets_.size(); ++slot) {
    std::sort(targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[slot]),
              targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[slot + 1]));
  }
}

std::span<const EntityId> KnowledgeGraph::Neighbors(EntityId node,
                                                    RelationId label) const {
  if (node >= num_entities_ || label >= num_labels()) {
    throw std::out_of_range("Neighbors: entity " + std::to_string(node) +
                            " / label " + std::to_string(label) +
                            " out of range");
  }
  return NeighborsUnchecked(node, label);
}

bool KnowledgeGraph::HasEdge(EntityId tail, RelationId label,
                             EntityId head) const {
  if (tail >= num_entities_ || label >= num_labels()) return false;
  auto adj = NeighborsUnchecked(tail, label);
  return std::binary_search(adj.begin(), adj.end(), head);
}

std::span<const Edge> KnowledgeGraph::EdgesOf(RelationId base_relation) const {
  if (base_relation >= edges_by_relation_.size()) return {};
  return edges_by_relation_[base_relation];
}

void FilterIndex::Add(std::span<const Fact> facts) {
  for (const Fact& f : facts) {
    heads_[Key(f.tail, f.relation)].push_back(f.head);
    tails_[Key(f.relation, f.head)].push_back(f.tail);
  }
  Finalize();
}

void FilterIndex::Finalize() {
  for (auto* table : {&heads_, &tails_}) {
    for (auto& [key, list] : *table) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  }
}

bool FilterIndex::Contains(const Fact& f) const {
  auto heads = KnownHeads(f.tail, f.relation);
  return std::binary_search(heads.begin(), heads.end(), f.head);
}

std::span<const EntityId> FilterIndex::KnownHeads(EntityId tail,
                                                  RelationId relation) const {
  auto it = heads_.find(Key(tail, relation));
  if (it == heads_.end()) return {};
  return it->second;
}

std::span<const EntityId> FilterIndex::KnownTails(RelationId relation,
                                                  EntityId head) const {
  auto it = tails_.find(Key(relation, head));
  if (it == tails_.end()) return {};
  return it->second;
}

std::vector<EntityId> FilterIndex::FilteredCandidates(
    const Fact& fact, QuerySide side, std::size_t num_entities) const {
  const EntityId target = side == QuerySide::kTail ? fact.head : fact.tail;
  auto known = side == QuerySide::kTail ? KnownHeads(fact.tail, fact.relation)
                                        : KnownTails(fact.relation, fact.head);
  std::vector<EntityId> out;
  out.reserve(num_entities);
  auto it = known.begin();
  for (EntityId v = 0; v < num_entities; ++v) {
    while (it != known.end() && *it < v) ++it;
    const bool is_known = it != known.end() && *it == v;
    if (!is_known || v == target) out.push_back(v);
  }
  return out;
}

void LoadSplits(const std::filesystem::path& dir, Vocabulary& vocab,
                std::vector<Fact>& train, std::vector<Fact>& valid,
                std::vector<Fact>& test) {
  if (!std::filesystem::exists(dir / "train.txt")) {
    throw std::runtime_error("missing " + (dir / "train.txt").string());
  }
  train = LoadTriples(dir / "train.txt", vocab);
  valid.clear();
  test.clear();
  if (std::filesystem::exists(dir / "valid.txt"))
    valid = LoadTriples(dir / "valid.txt", vocab);
  if (std::filesystem::exists(dir / "test.txt"))
    test = LoadTriples(dir / "test.txt", vocab);
}

Dataset LoadDataset(const std::filesystem::path& dir) {
  Dataset ds;
  LoadSplits(dir, ds.vocab, ds.train, ds.valid, ds.test);
  return ds;
}

}  // namespace lprules
