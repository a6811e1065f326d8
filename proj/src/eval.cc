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

#include <algorithm>
#include <stdexcept>

#include "lprules/parallel.h"

namespace lprules {
namespace {

bool UsableRule(const KnowledgeGraph& g, const Rule& rule) {
  if (rule.clause.body.empty()) return false;
  return std::all_of(rule.clause.body.begin(), rule.clause.body.end(),
                     [&](RelationId l) { return l < g.num_labels(); });
}

}  // namespace

std::optional<TieKind> ParseTieKind(std::string_view name) {
  if (name == "optimistic") return TieKind::kOptimistic;
  if (name == "pessimistic") return TieKind::kPessimistic;
  if (name == "midpoint") return TieKind::kMidpoint;
  if (name == "random-break" || name == "random") return TieKind::kRandomBreak;
  return std::nullopt;
}

std::string_view TieKindName(TieKind kind) {
  switch (kind) {
    case TieKind::kOptimistic:
      return "optimistic";
    case TieKind::kPessimistic:
      return "pessimistic";
    case TieKind::kMidpoint:
      return "midpoint";
    case TieKind::kRandomBreak:
      return "random-break";
  }
  return "random-break";
}

double RankFromCounts(std::size_t greater, std::size_t equal, TieKind kind,
                      Rng& rng) {
  const double base = static_cast<double>(greater) + 1.0;
  switch (kind) {
    case TieKind::kOptimistic:
      return base;
    case TieKind::kPessimistic:
      return base + static_cast<double>(equal);
    case TieKind::kMidpoint:
      return base + static_cast<double>(equal) / 2.0;
    case TieKind::kRandomBreak:
      return base + static_cast<double>(rng.Uniform(equal + 1));
  }
  return base;
}

double RankOf(const ScoreMap& scores, EntityId target,
              std::span<const EntityId> candidates, TieKind kind, Rng& rng) {
  auto score_of = [&](EntityId v) {
    auto it = scores.find(v);
    return it == scores.end() ? 0.0 : it->second;
  };
  const double s = score_of(target);
  std::size_t greater = 0;
  std::size_t equal = 0;
  bool seen_target = false;
  for (EntityId v : candidates) {
    if (v == target) {
      seen_target = true;
      continue;
    }
    const double sv = score_of(v);
    if (sv > s) {
      ++greater;
    } else if (sv == s) {
      ++equal;
    }
  }
  if (!seen_target) throw std::invalid_argument("target is not a candidate");
  return RankFromCounts(greater, equal, kind, rng);
}

double FilteredRank(const ScoreMap& scores, EntityId target,
                    std::span<const EntityId> known, std::size_t num_entities,
                    TieKind kind, Rng& rng) {
  auto filtered = [&](EntityId v) {
    return v != target && std::binary_search(known.begin(), known.end(), v);
  };
  auto it = scores.find(target);
  const double s = it == scores.end() ? 0.0 : it->second;
  std::size_t greater = 0;
  std::size_t equal = 0;
  std::size_t listed = 0;  // non-target candidates present in the map
  for (const auto& [v, sv] : scores) {
    if (v == target || v >= num_entities || filtered(v)) continue;
    ++listed;
    if (sv > s) {
      ++greater;
    } else if (sv == s) {
      ++equal;
    }
  }
  std::size_t removed = known.size();
  if (std::binary_search(known.begin(), known.end(), target)) --removed;
  const std::size_t others = num_entities - 1 - removed;
  const std::size_t unlisted = others - listed;
  if (s == 0.0) {
    equal += unlisted;
  } else if (s < 0.0) {
    greater += unlisted;
  }
  return RankFromCounts(greater, equal, kind, rng);
}

RankStats Summarize(std::span<const double> ranks) {
  RankStats out;
  out.num_queries = ranks.size();
  if (ranks.empty()) return out;
  for (double r : ranks) {
    out.mrr += 1.0 / r;
    if (r <= 1.0) out.hits1 += 1.0;
    if (r <= 3.0) out.hits3 += 1.0;
    if (r <= 10.0) out.hits10 += 1.0;
  }
  const auto n = static_cast<double>(ranks.size());
  out.mrr /= n;
  out.hits1 /= n;
  out.hits3 /= n;
  out.hits10 /= n;
  return out;
}

std::vector<double> QueryRanks(const KnowledgeGraph& g,
                               std::span<const RuleSet> rulesets,
                               std::span<const Fact> facts,
                               const FilterIndex& filter,
                               std::size_t num_entities, TiePolicy policy,
                               std::size_t workers) {
  if (num_entities < g.num_entities()) {
    throw std::invalid_argument("candidate universe smaller than the graph");
  }
  // Reverse clauses once per rule for the head-side queries.
  std::vector<std::vector<std::pair<Clause, double>>> forward(rulesets.size());
  std::vector<std::vector<std::pair<Clause, double>>> backward(
      rulesets.size());
  for (std::size_t r = 0; r < rulesets.size(); ++r) {
    for (const Rule& rule : rulesets[r].rules) {
      if (!UsableRule(g, rule)) continue;
      forward[r].emplace_back(rule.clause, rule.weight);
      backward[r].emplace_back(ReverseClause(g, rule.clause), rule.weight);
    }
  }

  std::vector<double> ranks(2 * facts.size(), 0.0);
  const std::size_t n = ResolveWorkers(workers);
  const std::size_t chunks = std::min<std::size_t>(facts.size(), 4 * n);
  ParallelFor(chunks, n, [&](std::size_t chunk) {
    PathWalker walker(g);
    ScoreMap scores;
    const std::size_t begin = facts.size() * chunk / chunks;
    const std::size_t end = facts.size() * (chunk + 1) / chunks;
    for (std::size_t i = begin; i < end; ++i) {
      const Fact& f = facts[i];
      for (int side = 0; side < 2; ++side) {
        const bool tail_query = side == 0;
        const EntityId anchor = tail_query ? f.tail : f.head;
        const EntityId target = tail_query ? f.head : f.tail;
        scores.clear();
        if (f.relation < rulesets.size() && anchor < g.num_entities()) {
          const auto& rules = tail_query ? forward[f.relation]
                                         : backward[f.relation];
          for (const auto& [clause, weight] : rules) {
            for (EntityId v : walker.Reachable(clause, anchor, std::nullopt))
              scores[v] += weight;
          }
        }
        const auto known = tail_query ? filter.KnownHeads(f.tail, f.relation)
                                      : filter.KnownTails(f.relation, f.head);
        Rng rng(DeriveSeed(policy.seed, {i, static_cast<std::uint64_t>(side)}));
        ranks[2 * i + side] =
            FilteredRank(scores, target, known, num_entities, policy.kind, rng);
      }
    }
  });
  return ranks;
}

Metrics Evaluate(const KnowledgeGraph& g, std::span<const RuleSet> rulesets,
                 std::span<const Fact> facts, const FilterIndex& filter,
                 std::size_t num_entities, TiePolicy policy,
                 std::size_t workers) {
  const auto ranks =
      QueryRanks(g, rulesets, facts, filter, num_entities, policy, workers);
  Metrics out;
  static_cast<RankStats&>(out) = Summarize(ranks);
  std::map<RelationId, std::vector<double>> by_relation;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    auto& v = by_relation[facts[i].relation];
    v.push_back(ranks[2 * i]);
    v.push_back(ranks[2 * i + 1]);
  }
  for (const auto& [r, rs] : by_relation) out.per_relation[r] = Summarize(rs);
  return out;
}

Metrics EvaluateInductive(std::span<const RuleSet> rulesets,
                          const KnowledgeGraph& inference_graph,
                          std::span<const Fact> test_facts,
                          const FilterIndex& filter, std::size_t num_entities,
                          TiePolicy policy, std::size_t workers) {
  return Evaluate(inference_graph, rulesets, test_facts, filter, num_entities,
                  policy, workers);
}

double AverageRulesPerRelation(std::span<const RuleSet> rulesets) {
  if (rulesets.empty()) return 0.0;
  std::size_t total = 0;
  for (const RuleSet& rs : rulesets) total += rs.size();
  return static_cast<double>(total) / static_cast<double>(rulesets.size());
}

nlohmann::json MetricsToJson(const Metrics& metrics, const Vocabulary& vocab) {
  auto stats = [](const RankStats& s) {
    return nlohmann::json{{"mrr", s.mrr},       {"hits1", s.hits1},
                          {"hits3", s.hits3},   {"hits10", s.hits10},
                          {"num_queries", s.num_queries}};
  };
  nlohmann::json out = stats(metrics);
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [r, s] : metrics.per_relation) {
    per[vocab.RelationName(r)] = stats(s);
  }
  out["per_relation"] = std::move(per);
  return out;
}

}  // namespace lprules
