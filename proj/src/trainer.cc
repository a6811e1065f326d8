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


#include "lprules/trainer.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "lprules/eval.h"
#include "lprules/heuristics.h"
#include "lprules/parallel.h"
#include "lprules/random.h"

namespace lprules {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Validation MRR of weighted clause subsets for one relation. Reachable sets
// are computed on first use per (clause, query) and reused across the grid.
class ValidationScorer {
 public:
  ValidationScorer(const KnowledgeGraph& g, std::span<const Fact> valid,
                   const FilterIndex& filter, std::size_t num_entities,
                   std::span<const Clause> clauses)
      : g_(g),
        valid_(valid),
        filter_(filter),
        num_entities_(num_entities),
        clauses_(clauses),
        reversed_(clauses.size()),
        reach_(clauses.size() * 2 * valid.size()),
        ready_(clauses.size() * 2 * valid.size(), 0),
        walker_(g),
        dense_(num_entities, 0.0) {}

  bool empty() const { return valid_.empty(); }

  // chosen: (clause index, weight) pairs.
  double Mrr(std::span<const std::pair<std::size_t, double>> chosen,
             std::uint64_t seed) {
    if (valid_.empty()) return kNaN;
    double total = 0.0;
    const std::size_t queries = 2 * valid_.size();
    for (std::size_t q = 0; q < queries; ++q) {
      const Fact& f = valid_[q / 2];
      const bool tail_query = q % 2 == 0;
      const EntityId target = tail_query ? f.head : f.tail;
      for (const auto& [k, w] : chosen) {
        for (EntityId v : Reach(k, q)) {
          if (dense_[v] == 0.0) touched_.push_back(v);
          dense_[v] += w;
        }
      }
      const auto known = tail_query ? filter_.KnownHeads(f.tail, f.relation)
                                    : filter_.KnownTails(f.relation, f.head);
      const double s = target < num_entities_ ? dense_[target] : 0.0;
      std::size_t greater = 0;
      std::size_t equal = 0;
      std::size_t listed = 0;
      for (EntityId v : touched_) {
        if (v == target ||
            std::binary_search(known.begin(), known.end(), v)) {
          continue;
        }
        ++listed;
        if (dense_[v] > s) {
          ++greater;
        } else if (dense_[v] == s) {
          ++equal;
        }
      }
      std::size_t removed = known.size();
      if (std::binary_search(known.begin(), known.end(), target)) --removed;
      const std::size_t unlisted = num_entities_ - 1 - removed - listed;
      if (s == 0.0) equal += unlisted;
      for (EntityId v : touched_) dense_[v] = 0.0;
      touched_.clear();
      Rng rng(DeriveSeed(seed, {q / 2, q % 2}));
      total += 1.0 / RankFromCounts(greater, equal, TieKind::kRandomBreak, rng);
    }
    return total / static_cast<double>(queries);
  }

 private:
  const std::vector<EntityId>& Reach(std::size_t k, std::size_t q) {
    const std::size_t slot = k * 2 * valid_.size() + q;
    if (!ready_[slot]) {
      const Fact& f = valid_[q / 2];
      const bool tail_query = q % 2 == 0;
      const EntityId anchor = tail_query ? f.tail : f.head;
      if (anchor < g_.num_entities()) {
        if (tail_query) {
          reach_[slot] = walker_.Reachable(clauses_[k], anchor, std::nullopt);
        } else {
          if (!reversed_[k]) reversed_[k] = ReverseClause(g_, clauses_[k]);
          reach_[slot] = walker_.Reachable(*reversed_[k], anchor, std::nullopt);
        }
      }
      ready_[slot] = 1;
    }
    return reach_[slot];
  }

  const KnowledgeGraph& g_;
  std::span<const Fact> valid_;
  const FilterIndex& filter_;
  std::size_t num_entities_;
  std::span<const Clause> clauses_;
  std::vector<std::optional<Clause>> reversed_;
  std::vector<std::vector<EntityId>> reach_;
  std::vector<std::uint8_t> ready_;
  PathWalker walker_;
  std::vector<double> dense_;
  std::vector<EntityId> touched_;
};

std::vector<std::pair<std::size_t, double>> Chosen(const LpSolution& sol) {
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t k = 0; k < sol.weights.size(); ++k) {
    if (sol.weights[k] > kWeightEpsilon)
      out.emplace_back(k, std::min(sol.weights[k], 1.0));
  }
  return out;
}

bool ValidLabels(const KnowledgeGraph& g, const Clause& c) {
  return !c.body.empty() &&
         std::all_of(c.body.begin(), c.body.end(),
                     [&](RelationId l) { return l < g.num_labels(); });
}

std::size_t MaxLength(std::span<const Clause> clauses) {
  std::size_t len = 0;
  for (const Clause& c : clauses) len = std::max(len, c.length());
  return len;
}

std::vector<LpColumn> LpColumns(std::span<const RuleColumn> pool) {
  std::vector<LpColumn> out;
  out.reserve(pool.size());
  for (const RuleColumn& c : pool) out.push_back(ToLpColumn(c));
  return out;
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

nlohmann::json NumberOrNull(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

}  // namespace

std::optional<Scenario> ParseScenario(std::string_view name) {
  if (name == "none" || name == "A" || name == "a") return Scenario::kNone;
  if (name == "B" || name == "b") return Scenario::kB;
  if (name == "C" || name == "c") return Scenario::kC;
  if (name == "D" || name == "d") return Scenario::kD;
  return std::nullopt;
}

std::string_view ScenarioName(Scenario scenario) {
  switch (scenario) {
    case Scenario::kNone:
      return "none";
    case Scenario::kB:
      return "B";
    case Scenario::kC:
      return "C";
    case Scenario::kD:
      return "D";
  }
  return "none";
}

void TrainConfig::Validate() {
  if (tau_grid.empty()) throw std::invalid_argument("tau grid is empty");
  for (double t : tau_grid) {
    if (!(t > 0.0) || !std::isfinite(t))
      throw std::invalid_argument("tau values must be positive");
  }
  std::sort(tau_grid.begin(), tau_grid.end());
  tau_grid.erase(std::unique(tau_grid.begin(), tau_grid.end()),
                 tau_grid.end());
  if (max_rule_len < 1 || max_rule_len > kMaxClauseLength) {
    throw std::invalid_argument("max_rule_len must lie in [1, " +
                                std::to_string(kMaxClauseLength) + "]");
  }
  if (!(neg_sample_frac > 0.0) || neg_sample_frac > 1.0)
    throw std::invalid_argument("neg_sample_frac must lie in (0, 1]");
  if (kappa_steps < 1) throw std::invalid_argument("kappa_steps must be >= 1");
  if (max_iter > 0 && rules_per_iter < 1)
    throw std::invalid_argument("rules_per_iter must be >= 1");
  if (min_support < 1) throw std::invalid_argument("min_support must be >= 1");
  if (scenario != Scenario::kNone && external_rules.empty())
    throw std::invalid_argument("scenario " +
                                std::string(ScenarioName(scenario)) +
                                " needs external rules");
}

std::optional<TrainConfig> Preset(std::string_view name) {
  TrainConfig c;
  c.preset = std::string(name);
  if (name == "default") return c;
  if (name == "kinship") {
    c.tau_grid = {0.02, 0.025, 0.03, 0.035, 0.04, 0.045, 0.05, 0.055, 0.06};
    return c;
  }
  if (name == "umls") {
    c.tau_grid = {0.0055, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.1};
    return c;
  }
  if (name == "wn18rr") {
    c.tau_grid = {0.0025, 0.003, 0.0035, 0.004, 0.0045};
    c.max_rule_len = 6;
    return c;
  }
  if (name == "fb15k237") {
    c.tau_grid = {0.005, 0.01, 0.025, 0.05, 0.1, 0.25};
    return c;
  }
  if (name == "yago3-10") {
    c.tau_grid = {0.005, 0.01, 0.03, 0.05, 0.07};
    c.max_rule_len = 3;
    c.seed_with_heuristics = false;
    c.max_iter = 15;
    c.neg_sample_frac = 0.02;
    c.neg_sample_min_edges = 100000;
    return c;
  }
  return std::nullopt;
}

std::vector<std::string> PresetNames() {
  return {"default", "kinship", "umls", "wn18rr", "fb15k237", "yago3-10"};
}

nlohmann::json ConfigToJson(const TrainConfig& c) {
  return nlohmann::json{{"preset", c.preset},
                        {"tau_grid", c.tau_grid},
                        {"max_rule_len", c.max_rule_len},
                        {"max_iter", c.max_iter},
                        {"rules_per_iter", c.rules_per_iter},
                        {"neg_sample_frac", c.neg_sample_frac},
                        {"neg_sample_min_edges", c.neg_sample_min_edges},
                        {"kappa_steps", c.kappa_steps},
                        {"seed", c.seed},
                        {"min_support", c.min_support},
                        {"seed_with_heuristics", c.seed_with_heuristics},
                        {"scenario", std::string(ScenarioName(c.scenario))},
                        {"external_rules", c.external_rules}};
}

std::vector<double> KappaGrid(std::size_t max_clause_length,
                              std::size_t kappa_steps) {
  const double unit = static_cast<double>(max_clause_length + 1);
  std::vector<double> out;
  for (std::size_t i = 1; i <= kappa_steps; ++i)
    out.push_back(unit * static_cast<double>(i));
  return out;
}

std::vector<double> KappaGrid(std::span<const Clause> clauses,
                              std::size_t kappa_steps) {
  if (clauses.empty())
    throw std::invalid_argument("kappa grid needs at least one clause");
  return KappaGrid(MaxLength(clauses), kappa_steps);
}

RuleSet ExtractRuleSet(const LpSolution& solution,
                       std::span<const Clause> clauses, RelationId head,
                       double eps) {
  if (solution.weights.size() != clauses.size())
    throw std::invalid_argument("solution and clauses are not aligned");
  RuleSet rs;
  rs.head = head;
  for (std::size_t k = 0; k < clauses.size(); ++k) {
    if (solution.weights[k] > eps) {
      rs.rules.push_back({head, clauses[k], std::min(solution.weights[k], 1.0)});
    }
  }
  return rs;
}

RelationTraining TrainRelation(const KnowledgeGraph& g, RelationId r,
                               std::span<const Fact> valid,
                               const FilterIndex& filter,
                               std::size_t num_entities,
                               const TrainConfig& config,
                               std::span<const ExternalRule> external) {
  if (!g.IsBase(r)) throw std::invalid_argument("head must be a base relation");
  const std::uint64_t seed = DeriveSeed(config.seed, {r});
  RelationTraining out;
  RelationModel& model = out.model;
  model.head = r;
  model.ruleset.head = r;
  model.best_tau = config.tau_grid.front();

  if (config.scenario == Scenario::kB) {
    std::vector<Clause> clauses;
    std::vector<std::pair<std::size_t, double>> chosen;
    for (const ExternalRule& e : external) {
      if (!ValidLabels(g, e.clause) || e.weight <= kWeightEpsilon) continue;
      chosen.emplace_back(clauses.size(), e.weight);
      clauses.push_back(e.clause);
      model.ruleset.rules.push_back({r, e.clause, e.weight});
    }
    model.num_candidates = clauses.size();
    model.best_tau = 0.0;
    ValidationScorer scorer(g, valid, filter, num_entities, clauses);
    model.validation_mrr = scorer.Mrr(chosen, DeriveSeed(seed, {2, 0, 0}));
    return out;
  }

  const auto edges = g.EdgesOf(r);
  if (edges.empty()) {
    ValidationScorer scorer(g, valid, filter, num_entities, {});
    model.validation_mrr = scorer.Mrr({}, DeriveSeed(seed, {2, 0, 0}));
    return out;
  }

  // Candidate pool K_0.
  std::vector<Clause> candidates;
  std::unordered_set<Clause, ClauseHash> existing;
  auto add = [&](const Clause& c) {
    if (ValidLabels(g, c) && existing.insert(c).second) candidates.push_back(c);
  };
  if (config.scenario == Scenario::kC || config.scenario == Scenario::kD) {
    for (const ExternalRule& e : external) add(e.clause);
  }
  if (config.scenario != Scenario::kC && config.seed_with_heuristics) {
    for (const Clause& c : Heuristic1(g, r, config.min_support)) {
      if (c.length() <= config.max_rule_len) add(c);
    }
    for (const Clause& c : Heuristic2(g, r, config.max_rule_len)) add(c);
  }

  const double frac =
      edges.size() > config.neg_sample_min_edges ? config.neg_sample_frac : 1.0;
  ColumnBuilder builder(g, r, frac, DeriveSeed(seed, {1}));
  std::vector<RuleColumn>& pool = out.pool;
  pool.reserve(candidates.size());
  for (const Clause& c : candidates) pool.push_back(builder.Build(c));

  const double tau0 = config.tau_grid.front();
  const std::size_t initial_len =
      candidates.empty() ? config.max_rule_len : MaxLength(candidates);
  const double kappa0 = KappaGrid(initial_len, 1).front();

  // Column generation at (min tau, min kappa).
  const bool generate = config.scenario != Scenario::kC && config.max_iter > 0;
  if (generate) {
    LpModel lp = BuildLpr(edges.size(), LpColumns(pool), tau0, kappa0);
    LpSolution sol = Solve(lp);
    if (sol.status != LpStatus::kOptimal)
      throw std::runtime_error("LP iteration limit reached");
    model.round_objectives.push_back(sol.objective);
    for (std::size_t it = 0; it < config.max_iter; ++it) {
      auto priced =
          PriceRules(builder, sol.coverage_duals, sol.complexity_dual, tau0,
                     existing, config.rules_per_iter, config.max_rule_len);
      if (priced.empty()) break;
      for (PricedColumn& p : priced) {
        existing.insert(p.column.clause);
        candidates.push_back(p.column.clause);
        pool.push_back(std::move(p.column));
      }
      lp = BuildLpr(edges.size(), LpColumns(pool), tau0, kappa0);
      const double previous = sol.objective;
      sol = Solve(lp);
      if (sol.status != LpStatus::kOptimal)
        throw std::runtime_error("LP iteration limit reached");
      if (sol.objective >
          previous + kOptimalityTolerance * (1.0 + std::abs(previous))) {
        throw std::logic_error("column generation increased the objective");
      }
      model.round_objectives.push_back(sol.objective);
      ++model.generation_rounds;
    }
  }
  model.num_candidates = pool.size();

  // (tau, kappa) search on the frozen pool.
  const std::vector<double> kappas = KappaGrid(
      pool.empty() ? config.max_rule_len : MaxLength(candidates),
      config.kappa_steps);
  const LpModel lp =
      BuildLpr(edges.size(), LpColumns(pool), tau0, kappas.front());
  LprSolver solver(lp);
  ValidationScorer scorer(g, valid, filter, num_entities, candidates);

  // Tau outer so kappa steps reuse the dual feasible basis. Ties keep the
  // smaller kappa, then the smaller tau.
  std::optional<LpSolution> best;
  double best_mrr = -1.0;
  std::size_t best_ki = 0;
  std::size_t best_ti = 0;
  for (std::size_t ti = 0; ti < config.tau_grid.size(); ++ti) {
    solver.SetTau(config.tau_grid[ti]);
    for (std::size_t ki = 0; ki < kappas.size(); ++ki) {
      solver.SetKappa(kappas[ki]);
      LpSolution sol = solver.Solve();
      if (sol.status != LpStatus::kOptimal)
        throw std::runtime_error("LP iteration limit reached");
      if (scorer.empty()) {
        // No validation signal: keep the smallest kappa and tau.
        best = std::move(sol);
        break;
      }
      const double mrr =
          scorer.Mrr(Chosen(sol), DeriveSeed(seed, {2, ti, ki}));
      const bool better =
          !best || mrr > best_mrr ||
          (mrr == best_mrr &&
           (ki < best_ki || (ki == best_ki && ti < best_ti)));
      if (better) {
        best_mrr = mrr;
        best = std::move(sol);
        best_ki = ki;
        best_ti = ti;
      }
    }
    if (scorer.empty()) break;
  }
  model.best_kappa = kappas[best_ki];
  model.best_tau = config.tau_grid[best_ti];
  model.validation_mrr = scorer.empty() ? kNaN : best_mrr;
  model.ruleset = ExtractRuleSet(*best, candidates, r);
  return out;
}

RuleSet SolvePool(const KnowledgeGraph& g, RelationId r,
                  std::span<const RuleColumn> pool, double tau, double kappa) {
  const auto edges = g.EdgesOf(r);
  RuleSet rs;
  rs.head = r;
  if (edges.empty()) return rs;
  const LpModel lp = BuildLpr(edges.size(), LpColumns(pool), tau, kappa);
  const LpSolution sol = Solve(lp);
  if (sol.status != LpStatus::kOptimal)
    throw std::runtime_error("LP iteration limit reached");
  std::vector<Clause> clauses;
  clauses.reserve(pool.size());
  for (const RuleColumn& c : pool) clauses.push_back(c.clause);
  return ExtractRuleSet(sol, clauses, r);
}

std::vector<RuleSet> TrainResult::RuleSets() const {
  std::vector<RuleSet> out;
  out.reserve(relations.size());
  for (const RelationTraining& t : relations) out.push_back(t.model.ruleset);
  return out;
}

TrainResult TrainAll(const KnowledgeGraph& g, std::span<const Fact> valid,
                     const FilterIndex& filter, std::size_t num_entities,
                     const TrainConfig& config,
                     const ExternalRules& external) {
  const std::size_t n = g.num_base_relations();
  std::vector<std::vector<Fact>> valid_by(n);
  for (const Fact& f : valid) {
    if (f.relation < n) valid_by[f.relation].push_back(f);
  }
  // Largest relations first to balance the pool.
  std::vector<RelationId> order(n);
  for (RelationId r = 0; r < n; ++r) order[r] = r;
  std::stable_sort(order.begin(), order.end(), [&](RelationId a, RelationId b) {
    return g.EdgesOf(a).size() > g.EdgesOf(b).size();
  });

  TrainResult result;
  result.relations.resize(n);
  std::vector<std::optional<std::string>> errors(n);
  ParallelFor(n, config.workers, [&](std::size_t i) {
    const RelationId r = order[i];
    std::span<const ExternalRule> ext;
    if (auto it = external.find(r); it != external.end()) ext = it->second;
    try {
      result.relations[r] = TrainRelation(g, r, valid_by[r], filter,
                                          num_entities, config, ext);
    } catch (const std::exception& e) {
      errors[r] = e.what();
      result.relations[r] = RelationTraining{};
      result.relations[r].model.head = r;
      result.relations[r].model.ruleset.head = r;
      result.relations[r].model.validation_mrr = kNaN;
    }
  });
  for (RelationId r = 0; r < n; ++r) {
    if (errors[r]) result.failures.push_back({r, *errors[r]});
  }
  return result;
}

std::vector<ParsedRule> ReadRuleFile(std::istream& in, const Vocabulary& vocab,
                                     const std::string& source_name) {
  std::vector<ParsedRule> out;
  std::string line;
  std::size_t lineno = 0;
  const auto n = static_cast<RelationId>(vocab.num_relations());
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = Split(line, '\t');
    if (fields.size() != 3)
      throw ParseError(source_name, lineno, "expected 3 tab-separated fields");
    ParsedRule pr;
    pr.line = lineno;
    double w = 0.0;
    const auto [ptr, ec] = std::from_chars(
        fields[0].data(), fields[0].data() + fields[0].size(), w);
    if (ec != std::errc() || ptr != fields[0].data() + fields[0].size() ||
        !std::isfinite(w)) {
      throw ParseError(source_name, lineno,
                       "bad weight '" + std::string(fields[0]) + "'");
    }
    pr.rule.weight = w;
    const auto head = vocab.ParseLabel(fields[1]);
    if (!head)
      throw ParseError(source_name, lineno,
                       "unknown relation '" + std::string(fields[1]) + "'");
    if (*head >= n)
      throw ParseError(source_name, lineno,
                       "head must be a base relation: " +
                           std::string(fields[1]));
    pr.head = *head;
    std::vector<std::string> unknown;
    for (std::string_view tok : Split(fields[2], ',')) {
      const auto label = vocab.ParseLabel(tok);
      if (!label) {
        unknown.emplace_back(tok);
        continue;
      }
      pr.rule.clause.body.push_back(*label);
    }
    if (!unknown.empty()) {
      std::string msg = "unknown relation token(s):";
      for (const auto& u : unknown) msg += " '" + u + "'";
      throw ParseError(source_name, lineno, msg);
    }
    if (pr.rule.clause.body.empty() ||
        pr.rule.clause.length() > kMaxClauseLength) {
      throw ParseError(source_name, lineno, "rule body length out of range");
    }
    out.push_back(std::move(pr));
  }
  return out;
}

ImportResult ImportRules(const std::filesystem::path& path,
                         const Vocabulary& vocab, Scenario scenario) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  ImportResult result;
  std::map<RelationId, std::unordered_set<Clause, ClauseHash>> seen;
  for (ParsedRule& pr : ReadRuleFile(in, vocab, path.string())) {
    const std::string where =
        path.string() + ":" + std::to_string(pr.line) + ": ";
    if (!seen[pr.head].insert(pr.rule.clause).second) {
      if (scenario == Scenario::kB)
        result.warnings.push_back(where + "duplicate body dropped");
      continue;
    }
    if (scenario == Scenario::kB) {
      if (pr.rule.weight < 0.0 || pr.rule.weight > 1.0) {
        result.warnings.push_back(where + "weight " +
                                  FormatWeight(pr.rule.weight) +
                                  " clamped to [0, 1]");
        pr.rule.weight = std::clamp(pr.rule.weight, 0.0, 1.0);
      }
    } else {
      pr.rule.weight = 0.0;
    }
    result.rules[pr.head].push_back(std::move(pr.rule));
  }
  return result;
}

std::string FormatWeight(double w) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), w);
  return std::string(buf, res.ptr);
}

void WriteRuleFile(std::ostream& out, const Vocabulary& vocab,
                   std::span<const RuleSet> rulesets) {
  for (const RuleSet& rs : rulesets) {
    for (const Rule& rule : rs.rules) {
      out << FormatWeight(rule.weight) << '\t' << vocab.RelationName(rs.head)
          << '\t' << ClauseToString(vocab, rule.clause) << '\n';
    }
  }
}

std::vector<RuleSet> ReadModel(const std::filesystem::path& path,
                               const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<RuleSet> out(vocab.num_relations());
  for (RelationId r = 0; r < out.size(); ++r) out[r].head = r;
  for (ParsedRule& pr : ReadRuleFile(in, vocab, path.string())) {
    out[pr.head].rules.push_back({pr.head, std::move(pr.rule.clause),
                                  pr.rule.weight});
  }
  return out;
}

nlohmann::json ModelSidecar(const TrainResult& result, const Vocabulary& vocab,
                            const TrainConfig& config) {
  nlohmann::json rel = nlohmann::json::object();
  std::size_t total_rules = 0;
  for (const RelationTraining& t : result.relations) {
    const RelationModel& m = t.model;
    total_rules += m.ruleset.size();
    rel[vocab.RelationName(m.head)] = {
        {"best_tau", m.best_tau},
        {"best_kappa", m.best_kappa},
        {"validation_mrr", NumberOrNull(m.validation_mrr)},
        {"complexity", m.ruleset.Complexity()},
        {"num_rules", m.ruleset.size()},
        {"num_candidates", m.num_candidates},
        {"generation_rounds", m.generation_rounds}};
  }
  nlohmann::json failures = nlohmann::json::array();
  for (const RelationFailure& f : result.failures) {
    failures.push_back({{"relation", vocab.RelationName(f.relation)},
                        {"message", f.message}});
  }
  const double avg =
      result.relations.empty()
          ? 0.0
          : static_cast<double>(total_rules) /
                static_cast<double>(result.relations.size());
  return nlohmann::json{{"config", ConfigToJson(config)},
                        {"avg_rules_per_relation", avg},
                        {"relations", std::move(rel)},
                        {"failures", std::move(failures)}};
}

}  // namespace lprules
