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

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>

namespace lprules {
namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

// Caps the partial-path frontier of the shortest+1 search.
constexpr std::size_t kMaxFrontier = 1 << 16;

bool Blocked(const KnowledgeGraph& g, const ExcludedEdge& e, EntityId u,
             RelationId label, EntityId v) {
  if (label == e.relation) return u == e.tail && v == e.head;
  if (label == g.Reverse(e.relation)) return u == e.head && v == e.tail;
  return false;
}

// Hop distance to `target` in g minus the excluded edge, up to max_depth.
// Every label has a reverse, so distances from target equal distances to it.
std::vector<std::uint32_t> DistancesTo(const KnowledgeGraph& g,
                                       EntityId target,
                                       const ExcludedEdge& excl,
                                       std::size_t max_depth) {
  std::vector<std::uint32_t> dist(g.num_entities(), kUnreached);
  std::vector<EntityId> frontier{target};
  dist[target] = 0;
  for (std::uint32_t d = 1; d <= max_depth && !frontier.empty(); ++d) {
    std::vector<EntityId> next;
    for (EntityId u : frontier) {
      for (RelationId l = 0; l < g.num_labels(); ++l) {
        for (EntityId v : g.NeighborsUnchecked(u, l)) {
          if (dist[v] != kUnreached || Blocked(g, excl, u, l, v)) continue;
          dist[v] = d;
          next.push_back(v);
        }
      }
    }
    frontier = std::move(next);
  }
  return dist;
}

using Path = std::vector<EntityId>;

// Lexicographically smallest label sequence completing any of `paths` into a
// simple path of exactly `remaining` more hops ending at `target`.
std::optional<std::vector<RelationId>> SmallestCompletion(
    const KnowledgeGraph& g, const std::vector<Path>& paths,
    std::size_t remaining, EntityId target, const ExcludedEdge& excl,
    const std::vector<std::uint32_t>& dist) {
  const std::size_t after = remaining - 1;
  for (RelationId l = 0; l < g.num_labels(); ++l) {
    std::vector<Path> next;
    for (const Path& p : paths) {
      const EntityId u = p.back();
      for (EntityId v : g.NeighborsUnchecked(u, l)) {
        if (Blocked(g, excl, u, l, v)) continue;
        if (std::find(p.begin(), p.end(), v) != p.end()) continue;
        if (after == 0) {
          if (v != target) continue;
        } else if (v == target || dist[v] > after) {
          continue;
        }
        if (next.size() < kMaxFrontier) {
          Path q = p;
          q.push_back(v);
          next.push_back(std::move(q));
        }
      }
    }
    if (next.empty()) continue;
    if (after == 0) return std::vector<RelationId>{l};
    if (auto tail = SmallestCompletion(g, next, after, target, excl, dist)) {
      tail->insert(tail->begin(), l);
      return tail;
    }
  }
  return std::nullopt;
}

}  // namespace

LpColumn ToLpColumn(const RuleColumn& column) {
  LpColumn out;
  out.rows = column.covered;
  out.neg = column.neg;
  out.complexity = static_cast<double>(column.complexity());
  return out;
}

std::vector<Clause> Heuristic1(const KnowledgeGraph& g, RelationId r,
                               std::size_t min_support) {
  const std::size_t labels = g.num_labels();
  const auto edges = g.EdgesOf(r);
  std::vector<std::uint32_t> support1(labels, 0);
  std::vector<std::uint32_t> support2(labels * labels, 0);
  std::vector<std::uint32_t> stamp2(labels * labels, kUnreached);
  // Labels l2 with z -l2-> head, per intermediate node z.
  std::vector<std::vector<RelationId>> into_head(g.num_entities());
  std::vector<EntityId> touched;

  for (std::uint32_t i = 0; i < edges.size(); ++i) {
    const EntityId x = edges[i].tail;
    const EntityId y = edges[i].head;
    if (x == y) continue;
    for (RelationId l = 0; l < labels; ++l) {
      if (l == r) continue;
      if (g.HasEdge(x, l, y)) ++support1[l];
    }
    for (RelationId l = 0; l < labels; ++l) {
      // z -l-> y  iff  y -l^-1-> z
      for (EntityId z : g.NeighborsUnchecked(y, g.Reverse(l))) {
        if (z == x || z == y) continue;
        if (into_head[z].empty()) touched.push_back(z);
        into_head[z].push_back(l);
      }
    }
    for (RelationId l1 = 0; l1 < labels; ++l1) {
      for (EntityId z : g.NeighborsUnchecked(x, l1)) {
        if (z == x || z == y) continue;
        for (RelationId l2 : into_head[z]) {
          const std::size_t key = l1 * labels + l2;
          if (stamp2[key] == i) continue;
          stamp2[key] = i;
          ++support2[key];
        }
      }
    }
    for (EntityId z : touched) into_head[z].clear();
    touched.clear();
  }

  std::vector<Clause> out;
  for (RelationId l = 0; l < labels; ++l) {
    if (support1[l] >= min_support && support1[l] > 0) out.push_back(Clause{l});
  }
  for (RelationId l1 = 0; l1 < labels; ++l1) {
    for (RelationId l2 = 0; l2 < labels; ++l2) {
      const std::uint32_t s = support2[l1 * labels + l2];
      if (s >= min_support && s > 0) out.push_back(Clause{l1, l2});
    }
  }
  return out;
}

std::vector<Clause> ShortestPathClauses(const KnowledgeGraph& g, RelationId r,
                                        const Edge& edge, std::size_t max_len) {
  std::vector<Clause> out;
  if (edge.tail == edge.head || max_len == 0) return out;
  const ExcludedEdge excl{edge.tail, r, edge.head};
  const auto dist = DistancesTo(g, edge.head, excl, max_len);
  const std::uint32_t shortest = dist[edge.tail];
  if (shortest == kUnreached || shortest > max_len) return out;

  // Layered walk over nodes on shortest paths; distances strictly decrease so
  // every such path is simple.
  Clause best;
  std::vector<EntityId> layer{edge.tail};
  for (std::uint32_t d = 0; d < shortest; ++d) {
    const std::uint32_t need = shortest - d - 1;
    std::optional<RelationId> min_label;
    std::vector<EntityId> next;
    for (RelationId l = 0; l < g.num_labels() && !min_label; ++l) {
      for (EntityId u : layer) {
        for (EntityId v : g.NeighborsUnchecked(u, l)) {
          if (dist[v] != need || Blocked(g, excl, u, l, v)) continue;
          min_label = l;
          next.push_back(v);
        }
      }
    }
    best.body.push_back(*min_label);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    layer = std::move(next);
  }
  out.push_back(best);

  if (shortest + 1 <= max_len) {
    const std::vector<Path> start{{edge.tail}};
    if (auto labels =
            SmallestCompletion(g, start, shortest + 1, edge.head, excl, dist)) {
      out.push_back(Clause(std::move(*labels)));
    }
  }
  return out;
}

std::vector<Clause> Heuristic2(const KnowledgeGraph& g, RelationId r,
                               std::size_t max_len) {
  std::vector<Clause> out;
  std::unordered_set<Clause, ClauseHash> seen;
  for (const Edge& e : g.EdgesOf(r)) {
    for (Clause& c : ShortestPathClauses(g, r, e, max_len)) {
      if (seen.insert(c).second) out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<PricedColumn> PriceRules(
    ColumnBuilder& builder, std::span<const double> duals, double lambda,
    double tau, const std::unordered_set<Clause, ClauseHash>& existing,
    std::size_t max_new, std::size_t max_len) {
  const KnowledgeGraph& g = builder.graph();
  const RelationId r = builder.relation();
  const auto edges = g.EdgesOf(r);
  std::vector<std::uint32_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return duals[a] > duals[b];
                   });

  std::vector<PricedColumn> accepted;
  std::unordered_set<Clause, ClauseHash> tried;
  for (std::uint32_t i : order) {
    if (accepted.size() >= max_new) break;
    for (Clause& c : ShortestPathClauses(g, r, edges[i], max_len)) {
      if (accepted.size() >= max_new) break;
      if (existing.contains(c) || !tried.insert(c).second) continue;
      RuleColumn column = builder.Build(c);
      const double red = ReducedCost(ToLpColumn(column), duals, lambda, tau);
      if (red < -kReducedCostTolerance) {
        accepted.push_back({std::move(column), red});
      }
    }
  }
  return accepted;
}

}  // namespace lprules
