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


// Per-relation rule learning: candidate generation, optional column
// generation, (tau, kappa) selection on validation MRR, and the rule-exchange
// file format.

#ifndef LPRULES_TRAINER_H_
#define LPRULES_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lprules/kg_store.h"
#include "lprules/lp.h"
#include "lprules/rule_engine.h"

namespace lprules {

// kB uses external rules as given, kC lets the LP reweight them, kD lets the
// LP choose among external and heuristic rules.
enum class Scenario { kNone, kB, kC, kD };

std::optional<Scenario> ParseScenario(std::string_view name);
std::string_view ScenarioName(Scenario scenario);

struct TrainConfig {
  std::string preset = "default";
  std::vector<double> tau_grid = {0.005, 0.01, 0.025, 0.05, 0.1, 0.25};
  std::size_t max_rule_len = 4;
  std::size_t max_iter = 0;
  std::size_t rules_per_iter = 10;
  double neg_sample_frac = 1.0;
  // Sampling applies only to relations with more edges than this.
  std::size_t neg_sample_min_edges = 0;
  std::size_t kappa_steps = 20;
  std::uint64_t seed = 0;
  std::size_t min_support = 1;
  // Start from Heuristic 1 and 2 candidates; off starts from an empty pool
  // and relies on column generation.
  bool seed_with_heuristics = true;
  Scenario scenario = Scenario::kNone;
  std::string external_rules;
  std::size_t workers = 0;

  // Sorts and deduplicates tau_grid, then checks every field. Throws
  // std::invalid_argument.
  void Validate();
};

// Named hyperparameter bundles: kinship, umls, wn18rr, fb15k237, yago3-10.
std::optional<TrainConfig> Preset(std::string_view name);
std::vector<std::string> PresetNames();

nlohmann::json ConfigToJson(const TrainConfig& config);

// Returns [k, 2k, ..., steps*k] with k = 1 + longest clause. Throws
// std::invalid_argument for an empty candidate set.
std::vector<double> KappaGrid(std::span<const Clause> clauses,
                              std::size_t kappa_steps);
std::vector<double> KappaGrid(std::size_t max_clause_length,
                              std::size_t kappa_steps);

// Rules with w_k > eps, in column order.
RuleSet ExtractRuleSet(const LpSolution& solution,
                       std::span<const Clause> clauses, RelationId head,
                       double eps = kWeightEpsilon);

struct ExternalRule {
  Clause clause;
  double weight = 1.0;
};

using ExternalRules = std::map<RelationId, std::vector<ExternalRule>>;

struct RelationModel {
  RelationId head = 0;
  RuleSet ruleset;
  double best_tau = 0.0;
  double best_kappa = 0.0;
  double validation_mrr = 0.0;  // NaN when the relation has no valid facts
  std::size_t num_candidates = 0;
  std::size_t generation_rounds = 0;
  std::vector<double> round_objectives;  // LP objective after each round
};

struct RelationTraining {
  RelationModel model;
  std::vector<RuleColumn> pool;  // frozen columns of the (tau, kappa) search
};

// Algorithm body for one head relation. `valid` holds the validation facts
// of r only. `num_entities` is the size of the candidate universe.
RelationTraining TrainRelation(const KnowledgeGraph& g, RelationId r,
                               std::span<const Fact> valid,
                               const FilterIndex& filter,
                               std::size_t num_entities,
                               const TrainConfig& config,
                               std::span<const ExternalRule> external = {});

// Cold LP solve over a trained pool at the given parameters.
RuleSet SolvePool(const KnowledgeGraph& g, RelationId r,
                  std::span<const RuleColumn> pool, double tau, double kappa);

struct RelationFailure {
  RelationId relation = 0;
  std::string message;
};

struct TrainResult {
  std::vector<RelationTraining> relations;  // indexed by base relation
  std::vector<RelationFailure> failures;

  std::vector<RuleSet> RuleSets() const;
};

// Trains every base relation of g on up to config.workers threads. Each
// relation uses its own seed derived from (config.seed, r), so results do not
// depend on scheduling. A failing relation keeps an empty model and is
// reported in `failures`.
TrainResult TrainAll(const KnowledgeGraph& g, std::span<const Fact> valid,
                     const FilterIndex& filter, std::size_t num_entities,
                     const TrainConfig& config,
                     const ExternalRules& external = {});

// Rule-exchange format: "weight<TAB>head<TAB>body1,body2,...". Reverse
// labels are written "X^-1"; "R_X" is also accepted on input.
struct ParsedRule {
  RelationId head = 0;
  ExternalRule rule;
  std::size_t line = 0;
};

// Throws ParseError for unknown tokens, reverse heads, bad weights, or wrong
// arity.
std::vector<ParsedRule> ReadRuleFile(std::istream& in, const Vocabulary& vocab,
                                     const std::string& source_name);

struct ImportResult {
  ExternalRules rules;
  std::vector<std::string> warnings;
};

// Scenario B clamps weights into [0, 1] with a warning and keeps the first
// of duplicate bodies; C and D drop weights and deduplicate bodies.
ImportResult ImportRules(const std::filesystem::path& path,
                         const Vocabulary& vocab, Scenario scenario);

// Shortest round-trip decimal text.
std::string FormatWeight(double w);

void WriteRuleFile(std::ostream& out, const Vocabulary& vocab,
                   std::span<const RuleSet> rulesets);

std::vector<RuleSet> ReadModel(const std::filesystem::path& path,
                               const Vocabulary& vocab);

nlohmann::json ModelSidecar(const TrainResult& result, const Vocabulary& vocab,
                            const TrainConfig& config);

}  // namespace lprules

#endif  // LPRULES_TRAINER_H_
