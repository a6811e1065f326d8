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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "lprules/eval.h"
#include "lprules/kg_store.h"
#include "lprules/lp.h"
#include "lprules/rule_engine.h"
#include "lprules/trainer.h"

namespace py = pybind11;
using namespace lprules;

namespace {

using FactTuple = std::tuple<EntityId, RelationId, EntityId>;

std::vector<Fact> ToFacts(const std::vector<FactTuple>& in) {
  std::vector<Fact> out;
  out.reserve(in.size());
  for (const auto& [t, r, h] : in) out.push_back({t, r, h});
  return out;
}

std::optional<ExcludedEdge> ToExcluded(const std::optional<FactTuple>& e) {
  if (!e) return std::nullopt;
  return ExcludedEdge{std::get<0>(*e), std::get<1>(*e), std::get<2>(*e)};
}

struct Loaded {
  Dataset data;
  FilterIndex filter;
};

Loaded LoadWithFilter(const std::filesystem::path& dir) {
  Loaded l{LoadDataset(dir), {}};
  l.filter.Add(l.data.train);
  l.filter.Add(l.data.valid);
  l.filter.Add(l.data.test);
  return l;
}

TiePolicy PolicyFrom(const std::string& ranking, std::uint64_t seed) {
  const auto kind = ParseTieKind(ranking);
  if (!kind) throw std::invalid_argument("unknown ranking: " + ranking);
  return {*kind, seed};
}

// Trains on a dataset directory and returns the rule file text, the JSON
// sidecar and the test metrics.
py::dict Train(const std::filesystem::path& dir, TrainConfig config,
               const std::string& ranking, std::uint64_t eval_seed) {
  config.Validate();
  Loaded l = LoadWithFilter(dir);
  const Vocabulary& vocab = l.data.vocab;
  KnowledgeGraph g(vocab.num_entities(), vocab.num_relations(), l.data.train);
  ExternalRules external;
  if (config.scenario != Scenario::kNone)
    external = ImportRules(config.external_rules, vocab, config.scenario).rules;
  TrainResult result;
  {
    py::gil_scoped_release release;
    result = TrainAll(g, l.data.valid, l.filter, vocab.num_entities(), config,
                      external);
  }
  const auto rulesets = result.RuleSets();
  Metrics metrics;
  {
    py::gil_scoped_release release;
    metrics = Evaluate(g, rulesets, l.data.test, l.filter, vocab.num_entities(),
                       PolicyFrom(ranking, eval_seed));
  }
  std::ostringstream rules;
  WriteRuleFile(rules, vocab, rulesets);
  auto mjson = MetricsToJson(metrics, vocab);
  mjson["avg_rules_per_relation"] = AverageRulesPerRelation(rulesets);
  py::dict out;
  out["rules"] = rules.str();
  out["sidecar"] = ModelSidecar(result, vocab, config).dump();
  out["metrics"] = mjson.dump();
  return out;
}

std::string EvaluateModel(const std::filesystem::path& dir,
                          const std::filesystem::path& model,
                          const std::string& split, const std::string& ranking,
                          std::uint64_t seed) {
  Loaded l = LoadWithFilter(dir);
  const Vocabulary& vocab = l.data.vocab;
  KnowledgeGraph g(vocab.num_entities(), vocab.num_relations(), l.data.train);
  const auto rulesets = ReadModel(model, vocab);
  const auto& facts = split == "train"   ? l.data.train
                      : split == "valid" ? l.data.valid
                                         : l.data.test;
  Metrics metrics;
  {
    py::gil_scoped_release release;
    metrics = Evaluate(g, rulesets, facts, l.filter, vocab.num_entities(),
                       PolicyFrom(ranking, seed));
  }
  auto json = MetricsToJson(metrics, vocab);
  json["avg_rules_per_relation"] = AverageRulesPerRelation(
      std::span(rulesets).first(vocab.num_relations()));
  return json.dump();
}

py::dict SolveLpr(std::size_t num_rows,
                  const std::vector<std::tuple<std::vector<std::uint32_t>,
                                               double, double>>& columns,
                  double tau, double kappa) {
  std::vector<LpColumn> cols;
  for (const auto& [rows, neg, complexity] : columns)
    cols.push_back({rows, neg, complexity});
  const LpSolution s = Solve(BuildLpr(num_rows, std::move(cols), tau, kappa));
  py::dict out;
  out["weights"] = s.weights;
  out["penalties"] = s.penalties;
  out["coverage_duals"] = s.coverage_duals;
  out["complexity_dual"] = s.complexity_dual;
  out["objective"] = s.objective;
  out["optimal"] = s.status == LpStatus::kOptimal;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weighted chain rules for knowledge graph completion";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("preset", &TrainConfig::preset)
      .def_readwrite("tau_grid", &TrainConfig::tau_grid)
      .def_readwrite("max_rule_len", &TrainConfig::max_rule_len)
      .def_readwrite("max_iter", &TrainConfig::max_iter)
      .def_readwrite("rules_per_iter", &TrainConfig::rules_per_iter)
      .def_readwrite("neg_sample_frac", &TrainConfig::neg_sample_frac)
      .def_readwrite("neg_sample_min_edges", &TrainConfig::neg_sample_min_edges)
      .def_readwrite("kappa_steps", &TrainConfig::kappa_steps)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("min_support", &TrainConfig::min_support)
      .def_readwrite("seed_with_heuristics", &TrainConfig::seed_with_heuristics)
      .def_readwrite("external_rules", &TrainConfig::external_rules)
      .def_readwrite("workers", &TrainConfig::workers)
      .def_property(
          "scenario",
          [](const TrainConfig& c) { return std::string(ScenarioName(c.scenario)); },
          [](TrainConfig& c, const std::string& name) {
            const auto s = ParseScenario(name);
            if (!s) throw std::invalid_argument("unknown scenario: " + name);
            c.scenario = *s;
          })
      .def("validate", &TrainConfig::Validate)
      .def("to_json", [](const TrainConfig& c) { return ConfigToJson(c).dump(); });

  m.def("preset", [](const std::string& name) {
    auto c = Preset(name);
    if (!c) throw std::invalid_argument("unknown preset: " + name);
    return *c;
  });
  m.def("preset_names", &PresetNames);

  py::class_<KnowledgeGraph>(m, "KnowledgeGraph")
      .def(py::init([](std::size_t num_entities, std::size_t num_base,
                       const std::vector<FactTuple>& facts) {
             return KnowledgeGraph(num_entities, num_base, ToFacts(facts));
           }),
           py::arg("num_entities"), py::arg("num_base_relations"),
           py::arg("facts"))
      .def_property_readonly("num_entities", &KnowledgeGraph::num_entities)
      .def_property_readonly("num_base_relations",
                             &KnowledgeGraph::num_base_relations)
      .def_property_readonly("num_labels", &KnowledgeGraph::num_labels)
      .def("reverse", &KnowledgeGraph::Reverse)
      .def("has_edge", &KnowledgeGraph::HasEdge)
      .def("neighbors", [](const KnowledgeGraph& g, EntityId u, RelationId l) {
        const auto n = g.Neighbors(u, l);
        return std::vector<EntityId>(n.begin(), n.end());
      });

  m.def(
      "clause_holds",
      [](const KnowledgeGraph& g, std::vector<RelationId> body, EntityId x,
         EntityId y, std::optional<FactTuple> excluded) {
        return ClauseHolds(g, Clause(std::move(body)), x, y,
                           ToExcluded(excluded));
      },
      py::arg("graph"), py::arg("body"), py::arg("x"), py::arg("y"),
      py::arg("excluded") = py::none());
  m.def(
      "reachable_set",
      [](const KnowledgeGraph& g, std::vector<RelationId> body, EntityId x,
         std::optional<FactTuple> excluded) {
        return ReachableSet(g, Clause(std::move(body)), x, ToExcluded(excluded));
      },
      py::arg("graph"), py::arg("body"), py::arg("start"),
      py::arg("excluded") = py::none());
  m.def(
      "coverage_column",
      [](const KnowledgeGraph& g, RelationId r, std::vector<RelationId> body) {
        return CoverageColumn(g, r, Clause(std::move(body)));
      });
  m.def(
      "neg_count",
      [](const KnowledgeGraph& g, RelationId r, std::vector<RelationId> body,
         double frac, std::uint64_t seed) {
        return NegCount(g, r, Clause(std::move(body)), frac, seed);
      },
      py::arg("graph"), py::arg("relation"), py::arg("body"),
      py::arg("sample_fraction") = 1.0, py::arg("seed") = 0);

  m.def("solve_lpr", &SolveLpr, py::arg("num_rows"), py::arg("columns"),
        py::arg("tau"), py::arg("kappa"),
        "columns: (covered rows, neg, complexity) per candidate rule");

  m.def("train", &Train, py::arg("data"), py::arg("config"),
        py::arg("ranking") = "random-break", py::arg("eval_seed") = 0);
  m.def("evaluate", &EvaluateModel, py::arg("data"), py::arg("model"),
        py::arg("split") = "test", py::arg("ranking") = "random-break",
        py::arg("seed") = 0);
}
