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

// The rule-selection linear program and a bounded-variable simplex solver.
//
//   minimize    sum_i eta_i + tau * sum_k neg_k w_k
//   subject to  sum_k a_ik w_k + eta_i >= 1          for every edge i
//               sum_k (1 + |C_k|) w_k <= kappa
//               0 <= w_k <= 1,  eta_i >= 0
//
// Duals: delta_i >= 0 for the coverage rows, lambda <= 0 for the complexity
// row.

#ifndef LPRULES_LP_H_
#define LPRULES_LP_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

namespace lprules {

inline constexpr double kFeasibilityTolerance = 1e-9;
inline constexpr double kOptimalityTolerance = 1e-7;
inline constexpr double kWeightEpsilon = 1e-6;

struct LpColumn {
  std::vector<std::uint32_t> rows;  // sorted coverage rows with a_ik = 1
  double neg = 0.0;
  double complexity = 2.0;  // 1 + clause length
};

struct LpModel {
  std::size_t num_rows = 0;
  std::vector<LpColumn> columns;
  double tau = 0.0;
  double kappa = 0.0;
};

// Validates and assembles the model. Throws std::invalid_argument for
// tau <= 0, kappa <= 0, num_rows == 0, complexity < 2, negative neg, or a
// coverage row index out of range.
LpModel BuildLpr(std::size_t num_rows, std::vector<LpColumn> columns,
                 double tau, double kappa);

enum class LpStatus { kOptimal, kIterationLimit };

struct LpSolution {
  std::vector<double> weights;    // w_k
  std::vector<double> penalties;  // eta_i
  std::vector<double> coverage_duals;  // delta_i
  double complexity_dual = 0.0;        // lambda
  double objective = 0.0;
  LpStatus status = LpStatus::kOptimal;
  std::size_t iterations = 0;
};

double ReducedCost(const LpColumn& column, std::span<const double> delta,
                   double lambda, double tau);

// sum_i delta_i + kappa * lambda - sum_k max(0, -red_k): the dual objective
// value of (delta, lambda) with the best bound multipliers.
double DualObjective(const LpModel& model, const LpSolution& solution);

struct SolverOptions {
  // 0 selects a size-based default.
  std::size_t max_iterations = 0;
};

// Bounded-variable dual simplex with a surplus variable per coverage row.
// Coverage rows with identical patterns are merged before solving and
// expanded again in the solution, so the basis has one row per distinct
// pattern plus the complexity row. A kappa change keeps the basis dual
// feasible and is warm started; a tau change restarts from the slack basis.
// The model must outlive the solver.
class LprSolver {
 public:
  explicit LprSolver(const LpModel& model, SolverOptions options = {});
  ~LprSolver();
  LprSolver(LprSolver&&) noexcept;
  LprSolver& operator=(LprSolver&&) noexcept;

  void SetTau(double tau);
  void SetKappa(double kappa);
  LpSolution Solve();

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot cold solve.
LpSolution Solve(const LpModel& model, SolverOptions options = {});

struct IprResult {
  std::size_t uncovered = 0;         // gamma
  std::vector<std::size_t> chosen;   // column indices, ascending
};

// Exhaustive 0/1 selection maximizing covered rows under the complexity
// budget (tau = 0). Ties prefer lower total complexity, then the smaller
// bitmask. Throws std::invalid_argument for more than 20 columns.
IprResult SolveIprBruteForce(std::span<const LpColumn> columns, double kappa,
                             std::size_t num_rows);

// Human-readable CPLEX-LP-style dump for cross-checking with other solvers.
void WriteLpText(std::ostream& out, const LpModel& model);

}  // namespace lprules

#endif  // LPRULES_LP_H_
