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

#include "lprules/lp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace lprules {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTolerance = 1e-9;
constexpr double kZero = 1e-12;

enum class VarStatus : std::uint8_t { kBasic, kLower, kUpper };

}  // namespace

LpModel BuildLpr(std::size_t num_rows, std::vector<LpColumn> columns,
                 double tau, double kappa) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (num_rows == 0) throw std::invalid_argument("model needs at least 1 row");
  for (LpColumn& col : columns) {
    if (col.complexity < 2.0)
      throw std::invalid_argument("column complexity must be at least 2");
    if (col.neg < 0.0) throw std::invalid_argument("negative neg count");
    std::sort(col.rows.begin(), col.rows.end());
    col.rows.erase(std::unique(col.rows.begin(), col.rows.end()),
                   col.rows.end());
    if (!col.rows.empty() && col.rows.back() >= num_rows)
      throw std::invalid_argument("coverage row out of range");
  }
  LpModel model;
  model.num_rows = num_rows;
  model.columns = std::move(columns);
  model.tau = tau;
  model.kappa = kappa;
  return model;
}

double ReducedCost(const LpColumn& column, std::span<const double> delta,
                   double lambda, double tau) {
  double red = tau * column.neg - column.complexity * lambda;
  for (std::uint32_t i : column.rows) red -= delta[i];
  return red;
}

double DualObjective(const LpModel& model, const LpSolution& solution) {
  double value = model.kappa * solution.complexity_dual;
  for (double d : solution.coverage_duals) value += d;
  for (const LpColumn& col : model.columns) {
    const double red = ReducedCost(col, solution.coverage_duals,
                                   solution.complexity_dual, model.tau);
    if (red < 0.0) value += red;
  }
  return value;
}

// Variables are numbered w_0..w_{K-1}, eta_0..eta_{M-1}, s_0..s_{M-1}
// (surplus), then the complexity slack t. Rows are the coverage groups
// followed by the complexity row. Basic eta, s and t columns are signed unit
// vectors, so each owns one row; the rows R they leave free and the basic w
// columns W form a square block A_RW. Every iteration factorizes that block
// afresh, so no error accumulates across pivots.
class LprSolver::Impl {
 public:
  Impl(const LpModel& model, SolverOptions options)
      : model_(model), options_(options) {
    GroupRows();
    K_ = model_.columns.size();
    N_ = K_ + 2 * M_ + 1;
    max_iterations_ = options_.max_iterations
                          ? options_.max_iterations
                          : 50 * (M_ + 1 + N_) + 1000;
    tau_ = model_.tau;
    kappa_ = model_.kappa;
    ColdStart();
  }

  void SetTau(double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
    // Solve restarts from the slack basis if this breaks dual feasibility.
    tau_ = tau;
  }

  void SetKappa(double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    // The basis stays dual feasible; Solve repairs primal feasibility.
    kappa_ = kappa;
  }

  LpSolution Solve() {
    LpSolution sol;
    sol.status = Run(sol.iterations);
    Extract(sol);
    return sol;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void GroupRows() {
    const std::size_t m = model_.num_rows;
    std::vector<std::vector<std::uint32_t>> pattern(m);
    for (std::size_t k = 0; k < model_.columns.size(); ++k) {
      for (std::uint32_t i : model_.columns[k].rows)
        pattern[i].push_back(static_cast<std::uint32_t>(k));
    }
    std::map<std::vector<std::uint32_t>, std::size_t> group_of;
    row_group_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      auto [it, inserted] = group_of.try_emplace(pattern[i], group_count_.size());
      if (inserted) group_count_.push_back(0.0);
      row_group_[i] = it->second;
      group_count_[it->second] += 1.0;
    }
    M_ = group_count_.size();
    group_cover_.resize(model_.columns.size());
    for (std::size_t k = 0; k < model_.columns.size(); ++k) {
      auto& groups = group_cover_[k];
      for (std::uint32_t i : model_.columns[k].rows)
        groups.push_back(static_cast<std::uint32_t>(row_group_[i]));
      std::sort(groups.begin(), groups.end());
      groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
    }
  }

  bool IsW(std::size_t var) const { return var < K_; }
  std::size_t EtaVar(std::size_t g) const { return K_ + g; }
  std::size_t SurplusVar(std::size_t g) const { return K_ + M_ + g; }
  std::size_t SlackVar() const { return K_ + 2 * M_; }

  double Upper(std::size_t var) const { return var < K_ ? 1.0 : kInf; }

  double Cost(std::size_t var) const {
    if (var < K_) return tau_ * model_.columns[var].neg;
    if (var < K_ + M_) return group_count_[var - K_];
    return 0.0;
  }

  // Row and sign of a unit column.
  std::pair<std::size_t, double> UnitRow(std::size_t var) const {
    if (var < K_ + M_) return {var - K_, 1.0};
    if (var < K_ + 2 * M_) return {var - K_ - M_, -1.0};
    return {M_, 1.0};
  }

  double Value(std::size_t var) const {
    switch (status_[var]) {
      case VarStatus::kBasic:
        return value_[var];
      case VarStatus::kUpper:
        return Upper(var);
      case VarStatus::kLower:
        return 0.0;
    }
    return 0.0;
  }

  // Surplus and slack basis: dual feasible for every tau since all costs
  // are nonnegative.
  void ColdStart() {
    status_.assign(N_, VarStatus::kLower);
    for (std::size_t g = 0; g < M_; ++g)
      status_[SurplusVar(g)] = VarStatus::kBasic;
    status_[SlackVar()] = VarStatus::kBasic;
    value_.assign(N_, 0.0);
  }

  // Dense copy of column `var` over the M+1 rows.
  void Column(std::size_t var, std::vector<double>& a) const {
    std::fill(a.begin(), a.end(), 0.0);
    if (IsW(var)) {
      for (std::uint32_t g : group_cover_[var]) a[g] = 1.0;
      a[M_] = model_.columns[var].complexity;
    } else {
      auto [row, sign] = UnitRow(var);
      a[row] = sign;
    }
  }

  void Factor() {
    owner_.assign(M_ + 1, kNone);
    basic_w_.clear();
    for (std::size_t var = 0; var < N_; ++var) {
      if (status_[var] != VarStatus::kBasic) continue;
      if (IsW(var)) {
        basic_w_.push_back(var);
      } else {
        const std::size_t row = UnitRow(var).first;
        if (owner_[row] != kNone) throw std::logic_error("singular basis");
        owner_[row] = var;
      }
    }
    free_rows_.clear();
    free_pos_.assign(M_ + 1, kNone);
    for (std::size_t row = 0; row <= M_; ++row) {
      if (owner_[row] == kNone) {
        free_pos_[row] = free_rows_.size();
        free_rows_.push_back(row);
      }
    }
    const std::size_t r = basic_w_.size();
    if (free_rows_.size() != r) throw std::logic_error("basis size mismatch");
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(r, r);
    for (std::size_t j = 0; j < r; ++j) {
      const std::size_t k = basic_w_[j];
      for (std::uint32_t g : group_cover_[k]) {
        if (free_pos_[g] != kNone) block(free_pos_[g], j) = 1.0;
      }
      if (free_pos_[M_] != kNone)
        block(free_pos_[M_], j) = model_.columns[k].complexity;
    }
    if (r > 0) block_inv_ = Eigen::PartialPivLU<Eigen::MatrixXd>(block).inverse();
  }

  // Solves B y = a and writes y into out[var] for every basic var.
  void SolveBasis(const std::vector<double>& a, std::vector<double>& out) {
    const std::size_t r = basic_w_.size();
    Eigen::VectorXd rhs(r);
    for (std::size_t i = 0; i < r; ++i) rhs[i] = a[free_rows_[i]];
    Eigen::VectorXd y = r > 0 ? Eigen::VectorXd(block_inv_ * rhs) : rhs;
    std::vector<double> used(M_ + 1, 0.0);
    for (std::size_t j = 0; j < r; ++j) {
      const std::size_t k = basic_w_[j];
      out[k] = y[j];
      for (std::uint32_t g : group_cover_[k]) used[g] += y[j];
      used[M_] += model_.columns[k].complexity * y[j];
    }
    for (std::size_t row = 0; row <= M_; ++row) {
      const std::size_t var = owner_[row];
      if (var == kNone) continue;
      out[var] = (a[row] - used[row]) / UnitRow(var).second;
    }
  }

  void ComputePrimal() {
    std::vector<double> b(M_ + 1, 1.0);
    b[M_] = kappa_;
    for (std::size_t k = 0; k < K_; ++k) {
      if (status_[k] != VarStatus::kUpper) continue;
      for (std::uint32_t g : group_cover_[k]) b[g] -= 1.0;
      b[M_] -= model_.columns[k].complexity;
    }
    SolveBasis(b, value_);
  }

  // pi solves pi B = c_B.
  void ComputeDuals() {
    pi_.assign(M_ + 1, 0.0);
    for (std::size_t row = 0; row <= M_; ++row) {
      const std::size_t var = owner_[row];
      if (var != kNone) pi_[row] = Cost(var) / UnitRow(var).second;
    }
    const std::size_t r = basic_w_.size();
    if (r == 0) return;
    Eigen::VectorXd rhs(r);
    for (std::size_t j = 0; j < r; ++j) {
      const std::size_t k = basic_w_[j];
      double v = Cost(k);
      for (std::uint32_t g : group_cover_[k]) {
        if (owner_[g] != kNone) v -= pi_[g];
      }
      if (owner_[M_] != kNone) v -= model_.columns[k].complexity * pi_[M_];
      rhs[j] = v;
    }
    const Eigen::VectorXd z = block_inv_.transpose() * rhs;
    for (std::size_t i = 0; i < r; ++i) pi_[free_rows_[i]] = z[i];
  }

  double ReducedCostOf(std::size_t var) const {
    if (IsW(var)) {
      double d = Cost(var) - model_.columns[var].complexity * pi_[M_];
      for (std::uint32_t g : group_cover_[var]) d -= pi_[g];
      return d;
    }
    if (var < K_ + M_) return group_count_[var - K_] - pi_[var - K_];
    if (var < K_ + 2 * M_) return pi_[var - K_ - M_];
    return -pi_[M_];
  }

  // Returns the entering variable or kNone at optimality.
  std::size_t ChooseEntering(bool bland) const {
    std::size_t best = kNone;
    double best_score = 0.0;
    for (std::size_t var = 0; var < N_; ++var) {
      if (status_[var] == VarStatus::kBasic) continue;
      const double d = ReducedCostOf(var);
      double score = 0.0;
      if (status_[var] == VarStatus::kLower && d < -kOptimalityTolerance) {
        score = -d;
      } else if (status_[var] == VarStatus::kUpper &&
                 d > kOptimalityTolerance) {
        score = d;
      } else {
        continue;
      }
      if (bland) return var;
      if (score > best_score) {
        best_score = score;
        best = var;
      }
    }
    return best;
  }

  bool DualFeasible() const { return ChooseEntering(false) == kNone; }

  // Dual simplex from the current basis when it is dual feasible (kept across
  // kappa changes), otherwise from the slack basis.
  LpStatus Run(std::size_t& iterations) {
    Factor();
    ComputeDuals();
    if (!DualFeasible()) ColdStart();
    return IterateDual(iterations);
  }

  // Pivot rule: largest bound violation leaves; the entering variable has the
  // smallest dual ratio, ties to the largest pivot. After 3 * (rows + vars)
  // consecutive dual-degenerate pivots both choices switch to smallest index
  // until a nondegenerate pivot.
  LpStatus IterateDual(std::size_t& iterations) {
    std::vector<double> z(M_ + 1);
    std::size_t degenerate = 0;
    const std::size_t bland_after = 3 * (M_ + 1 + N_);
    for (;;) {
      const bool bland = degenerate > bland_after;
      Factor();
      ComputePrimal();
      std::size_t leave = kNone;
      double worst = kFeasibilityTolerance;
      bool below = true;
      for (std::size_t var = 0; var < N_; ++var) {
        if (status_[var] != VarStatus::kBasic) continue;
        const double x = value_[var];
        if (bland && leave != kNone) break;
        if (-x > worst) {
          worst = -x;
          leave = var;
          below = true;
        } else if (x - Upper(var) > worst) {
          worst = x - Upper(var);
          leave = var;
          below = false;
        }
      }
      if (leave == kNone) {
        ComputeDuals();
        return LpStatus::kOptimal;
      }
      if (iterations >= max_iterations_) {
        ComputeDuals();
        return LpStatus::kIterationLimit;
      }
      ++iterations;
      ComputeDuals();
      BasisRow(leave, z);

      // Dual ratio test over nonbasic columns of the pivot row.
      std::size_t enter = kNone;
      double best_ratio = kInf;
      double best_alpha = 0.0;
      for (std::size_t var = 0; var < N_; ++var) {
        if (status_[var] == VarStatus::kBasic) continue;
        const double al = RowEntry(z, var);
        if (std::abs(al) < kPivotTolerance) continue;
        const bool at_lower = status_[var] == VarStatus::kLower;
        // x_leave moves by -al per unit increase of var.
        const bool helps = below ? (at_lower ? al < 0.0 : al > 0.0)
                                 : (at_lower ? al > 0.0 : al < 0.0);
        if (!helps) continue;
        const double ratio = std::abs(ReducedCostOf(var)) / std::abs(al);
        if (ratio < best_ratio - kZero ||
            (!bland && ratio <= best_ratio + kZero &&
             std::abs(al) > std::abs(best_alpha))) {
          best_ratio = ratio;
          best_alpha = al;
          enter = var;
        }
      }
      if (enter == kNone) throw std::logic_error("LPR dual unbounded");
      degenerate = best_ratio < kZero ? degenerate + 1 : 0;
      status_[leave] = below ? VarStatus::kLower : VarStatus::kUpper;
      status_[enter] = VarStatus::kBasic;
    }
  }

  // z = e_leave^T B^-1, the pivot row of the inverse.
  void BasisRow(std::size_t leave, std::vector<double>& z) {
    std::fill(z.begin(), z.end(), 0.0);
    if (!IsW(leave)) {
      const auto [row, sign] = UnitRow(leave);
      // Owned row: z_row = 1/sign; free rows absorb the w columns.
      z[row] = 1.0 / sign;
      const std::size_t r = basic_w_.size();
      if (r == 0) return;
      Eigen::VectorXd rhs(r);
      for (std::size_t j = 0; j < r; ++j) {
        const std::size_t k = basic_w_[j];
        double v = 0.0;
        if (std::binary_search(group_cover_[k].begin(), group_cover_[k].end(),
                               static_cast<std::uint32_t>(row)) ||
            row == M_) {
          v -= (row == M_ ? model_.columns[k].complexity : 1.0) * z[row];
        }
        rhs[j] = v;
      }
      const Eigen::VectorXd y = block_inv_.transpose() * rhs;
      for (std::size_t i = 0; i < r; ++i) z[free_rows_[i]] = y[i];
      return;
    }
    const std::size_t j =
        std::find(basic_w_.begin(), basic_w_.end(), leave) - basic_w_.begin();
    for (std::size_t i = 0; i < basic_w_.size(); ++i)
      z[free_rows_[i]] = block_inv_(j, i);
  }

  double RowEntry(const std::vector<double>& z, std::size_t var) const {
    if (IsW(var)) {
      double v = model_.columns[var].complexity * z[M_];
      for (std::uint32_t g : group_cover_[var]) v += z[g];
      return v;
    }
    const auto [row, sign] = UnitRow(var);
    return sign * z[row];
  }

  static double Clean(double v, double lo, double hi) {
    if (std::abs(v - lo) < kZero) return lo;
    if (std::abs(v - hi) < kZero) return hi;
    return v;
  }

  void Extract(LpSolution& sol) const {
    const std::size_t m = model_.num_rows;
    sol.weights.resize(K_);
    for (std::size_t k = 0; k < K_; ++k)
      sol.weights[k] = std::clamp(Clean(Value(k), 0.0, 1.0), 0.0, 1.0);
    std::vector<double> eta(M_), pi(M_);
    for (std::size_t g = 0; g < M_; ++g) {
      eta[g] = std::max(Clean(Value(EtaVar(g)), 0.0, 1.0), 0.0);
      pi[g] = std::clamp(Clean(pi_[g], 0.0, group_count_[g]), 0.0,
                         group_count_[g]);
    }
    sol.penalties.resize(m);
    sol.coverage_duals.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t g = row_group_[i];
      sol.penalties[i] = eta[g];
      sol.coverage_duals[i] = pi[g] / group_count_[g];
    }
    sol.complexity_dual = std::min(0.0, Clean(pi_[M_], 0.0, 0.0));
    double obj = 0.0;
    for (double e : sol.penalties) obj += e;
    for (std::size_t k = 0; k < K_; ++k)
      obj += tau_ * model_.columns[k].neg * sol.weights[k];
    sol.objective = obj;
  }

  const LpModel& model_;
  SolverOptions options_;
  std::size_t M_ = 0;
  std::size_t K_ = 0;
  std::size_t N_ = 0;
  std::size_t max_iterations_ = 0;
  double tau_ = 0.0;
  double kappa_ = 0.0;

  std::vector<std::size_t> row_group_;
  std::vector<double> group_count_;
  std::vector<std::vector<std::uint32_t>> group_cover_;

  std::vector<VarStatus> status_;
  std::vector<double> value_;
  std::vector<double> pi_;
  std::vector<std::size_t> owner_;
  std::vector<std::size_t> basic_w_;
  std::vector<std::size_t> free_rows_;
  std::vector<std::size_t> free_pos_;
  Eigen::MatrixXd block_inv_;
};

LprSolver::LprSolver(const LpModel& model, SolverOptions options)
    : impl_(std::make_unique<Impl>(model, options)) {}
LprSolver::~LprSolver() = default;
LprSolver::LprSolver(LprSolver&&) noexcept = default;
LprSolver& LprSolver::operator=(LprSolver&&) noexcept = default;

void LprSolver::SetTau(double tau) { impl_->SetTau(tau); }
void LprSolver::SetKappa(double kappa) { impl_->SetKappa(kappa); }
LpSolution LprSolver::Solve() { return impl_->Solve(); }

LpSolution Solve(const LpModel& model, SolverOptions options) {
  LprSolver solver(model, options);
  return solver.Solve();
}

IprResult SolveIprBruteForce(std::span<const LpColumn> columns, double kappa,
                             std::size_t num_rows) {
  if (columns.size() > 20) {
    throw std::invalid_argument("brute-force IPR limited to 20 columns");
  }
  const std::size_t words = (num_rows + 63) / 64;
  std::vector<std::vector<std::uint64_t>> masks(columns.size(),
                                                std::vector<std::uint64_t>(words));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    for (std::uint32_t i : columns[k].rows) {
      if (i >= num_rows) throw std::invalid_argument("row out of range");
      masks[k][i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }
  const std::uint64_t subsets = std::uint64_t{1} << columns.size();
  std::size_t best_covered = 0;
  double best_complexity = 0.0;
  std::uint64_t best_subset = 0;
  std::vector<std::uint64_t> acc(words);
  for (std::uint64_t subset = 0; subset < subsets; ++subset) {
    double complexity = 0.0;
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < columns.size(); ++k) {
      if (!(subset >> k & 1)) continue;
      complexity += columns[k].complexity;
      for (std::size_t w = 0; w < words; ++w) acc[w] |= masks[k][w];
    }
    if (complexity > kappa + kFeasibilityTolerance) continue;
    std::size_t covered = 0;
    for (std::uint64_t w : acc) covered += static_cast<std::size_t>(std::popcount(w));
    if (covered > best_covered ||
        (covered == best_covered && complexity < best_complexity)) {
      best_covered = covered;
      best_complexity = complexity;
      best_subset = subset;
    }
  }
  IprResult result;
  result.uncovered = num_rows - best_covered;
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (best_subset >> k & 1) result.chosen.push_back(k);
  }
  return result;
}

void WriteLpText(std::ostream& out, const LpModel& model) {
  out << "\\ LPR: " << model.num_rows << " coverage rows, "
      << model.columns.size() << " rule columns\n";
  out << "Minimize\n obj:";
  for (std::size_t i = 0; i < model.num_rows; ++i) out << " + eta" << i;
  for (std::size_t k = 0; k < model.columns.size(); ++k)
    out << " + " << model.tau * model.columns[k].neg << " w" << k;
  out << "\nSubject To\n";
  std::vector<std::vector<std::size_t>> by_row(model.num_rows);
  for (std::size_t k = 0; k < model.columns.size(); ++k)
    for (std::uint32_t i : model.columns[k].rows) by_row[i].push_back(k);
  for (std::size_t i = 0; i < model.num_rows; ++i) {
    out << " cover" << i << ":";
    for (std::size_t k : by_row[i]) out << " + w" << k;
    out << " + eta" << i << " >= 1\n";
  }
  out << " complexity:";
  for (std::size_t k = 0; k < model.columns.size(); ++k)
    out << " + " << model.columns[k].complexity << " w" << k;
  out << " <= " << model.kappa << "\nBounds\n";
  for (std::size_t k = 0; k < model.columns.size(); ++k)
    out << " 0 <= w" << k << " <= 1\n";
  out << "End\n";
}

}  // namespace lprules
