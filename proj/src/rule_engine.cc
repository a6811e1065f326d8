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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lprules/random.h"

namespace lprules {

bool Clause::Mentions(RelationId label) const {
  return std::find(body.begin(), body.end(), label) != body.end();
}

Clause ReverseClause(const KnowledgeGraph& g, const Clause& c) {
  Clause out;
  out.body.reserve(c.body.size());
  for (auto it = c.body.rbegin(); it != c.body.rend(); ++it) {
    out.body.push_back(g.Reverse(*it));
  }
  return out;
}

std::string ClauseToString(const Vocabulary& vocab, const Clause& c) {
  std::string s;
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    if (i > 0) s += ',';
    s += vocab.LabelName(c.body[i]);
  }
  return s;
}

std::size_t RuleSet::Complexity() const {
  std::size_t total = 0;
  for (const Rule& rule : rules) total += rule.clause.complexity();
  return total;
}

PathWalker::PathWalker(const KnowledgeGraph& g)
    : g_(&g), on_path_(g.num_entities(), 0), seen_(g.num_entities(), 0) {}

bool PathWalker::Blocked(EntityId u, RelationId label, EntityId v) const {
  if (!excl_) return false;
  if (label == excl_->relation) return u == excl_->tail && v == excl_->head;
  if (label == g_->Reverse(excl_->relation))
    return u == excl_->head && v == excl_->tail;
  return false;
}

void PathWalker::Collect(const Clause& c, std::size_t depth, EntityId node) {
  const RelationId label = c.body[depth];
  const bool last = depth + 1 == c.body.size();
  for (EntityId v : g_->NeighborsUnchecked(node, label)) {
    if (on_path_[v] || Blocked(node, label, v)) continue;
    if (last) {
      if (!seen_[v]) {
        seen_[v] = 1;
        found_.push_back(v);
      }
    } else {
      on_path_[v] = 1;
      Collect(c, depth + 1, v);
      on_path_[v] = 0;
    }
  }
}

bool PathWalker::Search(const Clause& c, std::size_t depth, EntityId node,
                        EntityId y) {
  const RelationId label = c.body[depth];
  if (depth + 1 == c.body.size()) {
    return !on_path_[y] && g_->HasEdge(node, label, y) &&
           !Blocked(node, label, y);
  }
  for (EntityId v : g_->NeighborsUnchecked(node, label)) {
    // y may only appear as the final node.
    if (on_path_[v] || v == y || Blocked(node, label, v)) continue;
    on_path_[v] = 1;
    const bool ok = Search(c, depth + 1, v, y);
    on_path_[v] = 0;
    if (ok) return true;
  }
  return false;
}

std::vector<EntityId> PathWalker::Reachable(
    const Clause& c, EntityId start, const std::optional<ExcludedEdge>& excl) {
  if (c.body.empty()) throw std::invalid_argument("empty clause");
  if (start >= g_->num_entities()) return {};
  excl_ = excl;
  found_.clear();
  on_path_[start] = 1;
  Collect(c, 0, start);
  on_path_[start] = 0;
  for (EntityId v : found_) seen_[v] = 0;
  std::vector<EntityId> out = found_;
  std::sort(out.begin(), out.end());
  return out;
}

bool PathWalker::Holds(const Clause& c, EntityId x, EntityId y,
                       const std::optional<ExcludedEdge>& excl) {
  if (c.body.empty()) throw std::invalid_argument("empty clause");
  if (x == y || x >= g_->num_entities() || y >= g_->num_entities())
    return false;
  excl_ = excl;
  on_path_[x] = 1;
  const bool ok = Search(c, 0, x, y);
  on_path_[x] = 0;
  return ok;
}

bool ClauseHolds(const KnowledgeGraph& g, const Clause& c, EntityId x,
                 EntityId y, const std::optional<ExcludedEdge>& excl) {
  PathWalker walker(g);
  return walker.Holds(c, x, y, excl);
}

std::vector<EntityId> ReachableSet(const KnowledgeGraph& g, const Clause& c,
                                   EntityId start,
                                   const std::optional<ExcludedEdge>& excl) {
  PathWalker walker(g);
  return walker.Reachable(c, start, excl);
}

std::vector<bool> CoverageColumn(const KnowledgeGraph& g, RelationId r,
                                 const Clause& c) {
  ColumnBuilder builder(g, r);
  std::vector<bool> bits(builder.num_edges(), false);
  for (std::uint32_t i : builder.Coverage(c)) bits[i] = true;
  return bits;
}

std::vector<std::uint32_t> SampleEdges(std::size_t m, double sample_fraction,
                                       std::uint64_t seed) {
  if (!(sample_fraction > 0.0) || sample_fraction > 1.0) {
    throw std::invalid_argument("sample fraction must lie in (0, 1]");
  }
  std::vector<std::uint32_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0u);
  if (sample_fraction >= 1.0 || m == 0) return idx;
  auto k = static_cast<std::size_t>(
      std::ceil(sample_fraction * static_cast<double>(m)));
  k = std::clamp<std::size_t>(k, 1, m);
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.Uniform(m - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

double NegCount(const KnowledgeGraph& g, RelationId r, const Clause& c,
                double sample_fraction, std::uint64_t seed) {
  ColumnBuilder builder(g, r, sample_fraction, seed);
  return builder.Build(c).neg;
}

bool RuleColumn::Covers(std::uint32_t edge) const {
  return std::binary_search(covered.begin(), covered.end(), edge);
}

ColumnBuilder::ColumnBuilder(const KnowledgeGraph& g, RelationId r,
                             double sample_fraction, std::uint64_t seed)
    : g_(&g), r_(r), edges_(g.EdgesOf(r)), walker_(g) {
  if (!g.IsBase(r)) throw std::invalid_argument("head must be a base relation");
  const auto sample = SampleEdges(edges_.size(), sample_fraction, seed);
  in_sample_.assign(edges_.size(), 0);
  for (std::uint32_t i : sample) in_sample_[i] = 1;
  if (!sample.empty()) {
    scale_ = static_cast<double>(edges_.size()) /
             static_cast<double>(sample.size());
  }
}

std::vector<std::uint32_t> ColumnBuilder::Coverage(const Clause& c) {
  const bool self_ref = c.Mentions(r_) || c.Mentions(g_->Reverse(r_));
  std::vector<std::uint32_t> covered;
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    std::optional<ExcludedEdge> excl;
    if (self_ref) excl = ExcludedEdge{e.tail, r_, e.head};
    if (walker_.Holds(c, e.tail, e.head, excl)) covered.push_back(i);
  }
  return covered;
}

RuleColumn ColumnBuilder::Build(const Clause& c) {
  RuleColumn col;
  col.clause = c;
  col.num_edges = edges_.size();
  const RelationId rev = g_->Reverse(r_);
  // Exclusion only changes traversal when the clause can use the edge.
  const bool self_ref = c.Mentions(r_) || c.Mentions(rev);
  const Clause back = ReverseClause(*g_, c);

  struct Side {
    std::vector<EntityId> reach;
    std::size_t invalid = 0;
  };
  std::unordered_map<EntityId, Side> right_cache;
  std::unordered_map<EntityId, std::size_t> left_cache;

  auto right_side = [&](const Edge& e) -> Side {
    std::optional<ExcludedEdge> excl;
    if (self_ref) excl = ExcludedEdge{e.tail, r_, e.head};
    Side s;
    s.reach = walker_.Reachable(c, e.tail, excl);
    auto valid = g_->NeighborsUnchecked(e.tail, r_);
    for (EntityId v : s.reach) {
      if (!std::binary_search(valid.begin(), valid.end(), v)) ++s.invalid;
    }
    return s;
  };
  auto left_side = [&](const Edge& e) -> std::size_t {
    std::optional<ExcludedEdge> excl;
    if (self_ref) excl = ExcludedEdge{e.tail, r_, e.head};
    const auto reach = walker_.Reachable(back, e.head, excl);
    auto valid = g_->NeighborsUnchecked(e.head, rev);
    std::size_t invalid = 0;
    for (EntityId u : reach) {
      if (!std::binary_search(valid.begin(), valid.end(), u)) ++invalid;
    }
    return invalid;
  };

  double neg = 0.0;
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    const Side* right = nullptr;
    Side fresh;
    if (self_ref) {
      fresh = right_side(e);
      right = &fresh;
    } else {
      auto it = right_cache.find(e.tail);
      if (it == right_cache.end())
        it = right_cache.emplace(e.tail, right_side(e)).first;
      right = &it->second;
    }
    if (std::binary_search(right->reach.begin(), right->reach.end(), e.head))
      col.covered.push_back(i);
    if (!in_sample_[i]) continue;
    std::size_t left = 0;
    if (self_ref) {
      left = left_side(e);
    } else {
      auto it = left_cache.find(e.head);
      if (it == left_cache.end())
        it = left_cache.emplace(e.head, left_side(e)).first;
      left = it->second;
    }
    neg += static_cast<double>(right->invalid + left);
  }
  col.neg = neg * scale_;
  return col;
}

double Score(const KnowledgeGraph& g, const RuleSet& rs, EntityId x,
             EntityId y) {
  PathWalker walker(g);
  double s = 0.0;
  for (const Rule& rule : rs.rules) {
    if (walker.Holds(rule.clause, x, y, std::nullopt)) s += rule.weight;
  }
  return s;
}

std::unordered_map<EntityId, double> ScoreAllTails(const KnowledgeGraph& g,
                                                   const RuleSet& rs,
                                                   EntityId t) {
  PathWalker walker(g);
  std::unordered_map<EntityId, double> scores;
  for (const Rule& rule : rs.rules) {
    for (EntityId v : walker.Reachable(rule.clause, t, std::nullopt))
      scores[v] += rule.weight;
  }
  return scores;
}

std::unordered_map<EntityId, double> ScoreAllHeads(const KnowledgeGraph& g,
                                                   const RuleSet& rs,
                                                   EntityId h) {
  PathWalker walker(g);
  std::unordered_map<EntityId, double> scores;
  for (const Rule& rule : rs.rules) {
    const Clause back = ReverseClause(g, rule.clause);
    for (EntityId u : walker.Reachable(back, h, std::nullopt))
      scores[u] += rule.weight;
  }
  return scores;
}

}  // namespace lprules
