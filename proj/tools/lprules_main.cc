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


// lprules command-line tool: train, eval, reweight, sweep.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lprules/eval.h"
#include "lprules/kg_store.h"
#include "lprules/trainer.h"

namespace {

namespace fs = std::filesystem;
using lprules::TrainConfig;

constexpr const char* kEnvPrefix = "LPRULES_";

std::string Env(const std::string& flag) {
  std::string name = kEnvPrefix;
  for (char c : flag) name += c == '-' ? '_' : static_cast<char>(std::toupper(c));
  return name;
}

struct ConfigFlags {
  std::string preset = "default";
  std::vector<double> tau;
  std::size_t max_rule_len = 0;
  std::size_t max_iter = 0;
  std::size_t rules_per_iter = 0;
  double neg_sample_frac = 0.0;
  std::size_t kappa_steps = 0;
  std::size_t min_support = 0;
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  CLI::Option* max_rule_len_opt = nullptr;
  CLI::Option* max_iter_opt = nullptr;
  CLI::Option* rules_per_iter_opt = nullptr;
  CLI::Option* neg_sample_frac_opt = nullptr;
  CLI::Option* kappa_steps_opt = nullptr;
  CLI::Option* min_support_opt = nullptr;

  void Register(CLI::App* app) {
    app->add_option("--preset", preset, "hyperparameter preset")
        ->envname(Env("preset"));
    app->add_option("--tau", tau, "tau value (repeatable)")
        ->envname(Env("tau"))
        ->delimiter(',');
    max_rule_len_opt = app->add_option("--max-rule-len", max_rule_len)
                           ->envname(Env("max-rule-len"));
    max_iter_opt = app->add_option("--max-iter", max_iter,
                                   "column generation rounds")
                       ->envname(Env("max-iter"));
    rules_per_iter_opt = app->add_option("--rules-per-iter", rules_per_iter)
                             ->envname(Env("rules-per-iter"));
    neg_sample_frac_opt =
        app->add_option("--neg-sample-frac", neg_sample_frac)
            ->envname(Env("neg-sample-frac"));
    kappa_steps_opt = app->add_option("--kappa-steps", kappa_steps)
                          ->envname(Env("kappa-steps"));
    min_support_opt = app->add_option("--min-support", min_support)
                          ->envname(Env("min-support"));
    app->add_option("--seed", seed)->envname(Env("seed"));
    app->add_option("--workers", workers, "0 = all cores")
        ->envname(Env("workers"));
  }

  TrainConfig Resolve() const {
    auto base = lprules::Preset(preset);
    if (!base) {
      std::string names;
      for (const auto& p : lprules::PresetNames()) names += " " + p;
      throw CLI::ValidationError("--preset",
                                 "unknown preset '" + preset + "'; known:" +
                                     names);
    }
    TrainConfig c = *base;
    if (!tau.empty()) c.tau_grid = tau;
    if (max_rule_len_opt->count()) c.max_rule_len = max_rule_len;
    if (max_iter_opt->count()) c.max_iter = max_iter;
    if (rules_per_iter_opt->count()) c.rules_per_iter = rules_per_iter;
    if (neg_sample_frac_opt->count()) {
      c.neg_sample_frac = neg_sample_frac;
      c.neg_sample_min_edges = 0;
    }
    if (kappa_steps_opt->count()) c.kappa_steps = kappa_steps;
    if (min_support_opt->count()) c.min_support = min_support;
    c.seed = seed;
    c.workers = workers;
    return c;
  }
};

struct Loaded {
  lprules::Dataset data;
  lprules::KnowledgeGraph graph;
  lprules::FilterIndex filter;
};

Loaded Load(const std::string& dir) {
  Loaded l;
  l.data = lprules::LoadDataset(dir);
  l.graph = lprules::KnowledgeGraph(l.data.vocab.num_entities(),
                                    l.data.vocab.num_relations(), l.data.train);
  l.filter.Add(l.data.train);
  l.filter.Add(l.data.valid);
  l.filter.Add(l.data.test);
  return l;
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed to write " + path.string());
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

lprules::TiePolicy Policy(const std::string& ranking, std::uint64_t seed) {
  auto kind = lprules::ParseTieKind(ranking);
  if (!kind) {
    throw CLI::ValidationError(
        "--ranking", "expected random-break|optimistic|pessimistic|midpoint");
  }
  return {*kind, seed};
}

lprules::TrainResult TrainAndReport(const Loaded& l, TrainConfig config,
                                    const lprules::ExternalRules& external) {
  const auto start = std::chrono::steady_clock::now();
  auto result = lprules::TrainAll(l.graph, l.data.valid, l.filter,
                                  l.data.vocab.num_entities(), config, external);
  const auto& vocab = l.data.vocab;
  std::size_t total = 0;
  for (const auto& t : result.relations) {
    const auto& m = t.model;
    total += m.ruleset.size();
    std::cout << std::left << std::setw(32) << vocab.RelationName(m.head)
              << " rules=" << m.ruleset.size() << " tau=" << m.best_tau
              << " kappa=" << m.best_kappa << " valid_mrr=";
    if (std::isnan(m.validation_mrr)) {
      std::cout << "n/a";
    } else {
      std::cout << std::fixed << std::setprecision(4) << m.validation_mrr
                << std::defaultfloat;
    }
    std::cout << '\n';
  }
  const double avg = result.relations.empty()
                         ? 0.0
                         : static_cast<double>(total) /
                               static_cast<double>(result.relations.size());
  std::cout << "relations=" << result.relations.size()
            << " avg_rules_per_relation=" << avg
            << " wall_time_s=" << Seconds(start) << '\n';
  for (const auto& f : result.failures) {
    std::cerr << "relation " << vocab.RelationName(f.relation)
              << " failed: " << f.message << '\n';
  }
  return result;
}

int WriteModel(const Loaded& l, const lprules::TrainResult& result,
               const TrainConfig& config, const std::string& out_path) {
  std::ostringstream rules;
  lprules::WriteRuleFile(rules, l.data.vocab, result.RuleSets());
  WriteText(out_path, rules.str());
  WriteText(out_path + ".json",
            lprules::ModelSidecar(result, l.data.vocab, config).dump(2) + "\n");
  std::cout << "wrote " << out_path << " and " << out_path << ".json\n";
  return result.failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn weighted chain rules for knowledge graph completion"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "learn rules for every relation");
  std::string train_data, train_out;
  ConfigFlags train_flags;
  train->add_option("--data", train_data, "dataset directory")
      ->required()
      ->envname(Env("data"));
  train->add_option("--out", train_out, "model file")
      ->required()
      ->envname(Env("out"));
  train_flags.Register(train);

  // eval
  auto* eval = app.add_subcommand("eval", "filtered ranking metrics");
  std::string eval_data, eval_model, ranking = "random-break", split = "test",
                                    inductive, metrics_out;
  std::uint64_t eval_seed = 0;
  std::size_t eval_workers = 0;
  eval->add_option("--data", eval_data)->required()->envname(Env("data"));
  eval->add_option("--model", eval_model)->required()->envname(Env("model"));
  eval->add_option("--ranking", ranking)->envname(Env("ranking"));
  eval->add_option("--split", split, "train|valid|test")
      ->check(CLI::IsMember({"train", "valid", "test"}));
  eval->add_option("--seed", eval_seed)->envname(Env("seed"));
  eval->add_option("--workers", eval_workers)->envname(Env("workers"));
  eval->add_option("--inductive-graph", inductive,
                   "directory with the inductive train/valid/test files")
      ->envname(Env("inductive-graph"));
  eval->add_option("--metrics-out", metrics_out)->envname(Env("metrics-out"));

  // reweight
  auto* reweight =
      app.add_subcommand("reweight", "use or reweight external rules");
  std::string rw_data, rw_out, rw_rules, scenario_name;
  ConfigFlags rw_flags;
  reweight->add_option("--data", rw_data)->required()->envname(Env("data"));
  reweight->add_option("--out", rw_out)->required()->envname(Env("out"));
  reweight->add_option("--scenario", scenario_name)
      ->required()
      ->check(CLI::IsMember({"B", "C", "D"}))
      ->envname(Env("scenario"));
  reweight->add_option("--external-rules", rw_rules)
      ->required()
      ->envname(Env("external-rules"));
  rw_flags.Register(reweight);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "MRR against a kappa cap");
  std::string sw_data, sw_out, sw_ranking = "random-break";
  std::vector<double> sw_kappa;
  ConfigFlags sw_flags;
  sweep->add_option("--data", sw_data)->required()->envname(Env("data"));
  sweep->add_option("--sweep-kappa", sw_kappa, "kappa cap (repeatable)")
      ->required()
      ->delimiter(',')
      ->envname(Env("sweep-kappa"));
  sweep->add_option("--out", sw_out, "CSV path (default stdout)")
      ->envname(Env("out"));
  sweep->add_option("--ranking", sw_ranking)->envname(Env("ranking"));
  sw_flags.Register(sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      TrainConfig config = train_flags.Resolve();
      config.Validate();
      const Loaded l = Load(train_data);
      const auto result = TrainAndReport(l, config, {});
      return WriteModel(l, result, config, train_out);
    }

    if (reweight->parsed()) {
      TrainConfig config = rw_flags.Resolve();
      config.scenario = *lprules::ParseScenario(scenario_name);
      config.external_rules = rw_rules;
      config.Validate();
      const Loaded l = Load(rw_data);
      auto imported =
          lprules::ImportRules(rw_rules, l.data.vocab, config.scenario);
      for (const auto& w : imported.warnings) std::cerr << "warning: " << w << '\n';
      const auto result = TrainAndReport(l, config, imported.rules);
      return WriteModel(l, result, config, rw_out);
    }

    if (eval->parsed()) {
      const auto policy = Policy(ranking, eval_seed);
      const auto start = std::chrono::steady_clock::now();
      lprules::Vocabulary vocab;
      std::vector<lprules::Fact> train_f, valid_f, test_f;
      lprules::LoadSplits(eval_data, vocab, train_f, valid_f, test_f);
      std::vector<lprules::Fact> itrain, ivalid, itest;
      if (!inductive.empty()) {
        // Keep relation ids, start a fresh entity space.
        lprules::Vocabulary ivocab;
        for (lprules::RelationId r = 0; r < vocab.num_relations(); ++r)
          ivocab.InternRelation(vocab.RelationName(r));
        lprules::LoadSplits(inductive, ivocab, itrain, ivalid, itest);
        vocab = std::move(ivocab);
      }
      const auto rulesets = lprules::ReadModel(eval_model, vocab);
      lprules::Metrics metrics;
      if (inductive.empty()) {
        lprules::KnowledgeGraph g(vocab.num_entities(), vocab.num_relations(),
                                  train_f);
        lprules::FilterIndex filter;
        filter.Add(train_f);
        filter.Add(valid_f);
        filter.Add(test_f);
        const auto& facts =
            split == "train" ? train_f : split == "valid" ? valid_f : test_f;
        metrics = lprules::Evaluate(g, rulesets, facts, filter,
                                    vocab.num_entities(), policy, eval_workers);
      } else {
        lprules::KnowledgeGraph g(vocab.num_entities(), vocab.num_relations(),
                                  itrain);
        lprules::FilterIndex filter;
        filter.Add(itrain);
        filter.Add(ivalid);
        filter.Add(itest);
        const auto& facts =
            split == "train" ? itrain : split == "valid" ? ivalid : itest;
        metrics = lprules::EvaluateInductive(rulesets, g, facts, filter,
                                             vocab.num_entities(), policy,
                                             eval_workers);
      }
      auto json = lprules::MetricsToJson(metrics, vocab);
      json["avg_rules_per_relation"] = lprules::AverageRulesPerRelation(
          std::span(rulesets).first(vocab.num_relations()));
      json["config"] = {{"command", "eval"},
                        {"data", eval_data},
                        {"model", eval_model},
                        {"ranking", std::string(lprules::TieKindName(policy.kind))},
                        {"seed", eval_seed},
                        {"split", split},
                        {"inductive_graph", inductive}};
      const std::string text = json.dump(2) + "\n";
      if (metrics_out.empty()) {
        std::cout << text;
      } else {
        WriteText(metrics_out, text);
        std::cout << "mrr=" << metrics.mrr << " hits1=" << metrics.hits1
                  << " hits3=" << metrics.hits3 << " hits10=" << metrics.hits10
                  << " queries=" << metrics.num_queries << '\n';
      }
      std::cerr << "wall_time_s=" << Seconds(start) << '\n';
      return 0;
    }

    if (sweep->parsed()) {
      TrainConfig config = sw_flags.Resolve();
      config.Validate();
      const auto policy = Policy(sw_ranking, config.seed);
      const Loaded l = Load(sw_data);
      const auto result = TrainAndReport(l, config, {});
      std::ostringstream csv;
      csv << "kappa_cap,avg_rules_per_relation,mrr,hits1,hits3,hits10\n";
      for (double cap : sw_kappa) {
        std::vector<lprules::RuleSet> rulesets;
        for (const auto& t : result.relations) {
          rulesets.push_back(lprules::SolvePool(
              l.graph, t.model.head, t.pool,
              t.model.best_tau > 0.0 ? t.model.best_tau
                                     : config.tau_grid.front(),
              cap));
        }
        const auto m = lprules::Evaluate(l.graph, rulesets, l.data.test,
                                         l.filter, l.data.vocab.num_entities(),
                                         policy, config.workers);
        csv << lprules::FormatWeight(cap) << ','
            << lprules::FormatWeight(lprules::AverageRulesPerRelation(rulesets))
            << ',' << lprules::FormatWeight(m.mrr) << ','
            << lprules::FormatWeight(m.hits1) << ','
            << lprules::FormatWeight(m.hits3) << ','
            << lprules::FormatWeight(m.hits10) << '\n';
      }
      if (sw_out.empty()) {
        std::cout << csv.str();
      } else {
        WriteText(sw_out, csv.str());
      }
      return result.failures.empty() ? 0 : 1;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
