// Copyright 2026 The Overlay Authors.
//
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

#include "overlay/simplex.h"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace overlay {

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
    case LpStatus::kTimeLimit:
      return "time_limit";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kPhaseOneTol = 1e-7;
constexpr double kZeroFill = 1e-13;

enum class ColumnKind : uint8_t { kStructural, kSlack, kArtificial };

class Tableau {
 public:
  Tableau(const LinearProgram& lp, const SimplexOptions& options)
      : lp_(lp), options_(options) {
    Build();
  }

  LpResult Solve();

 private:
  void Build();
  void PriceAll(const std::vector<double>& cost);
  // Returns kOptimal when no improving column remains.
  LpStatus Iterate(bool phase_one);
  void Pivot(int row, int col);
  std::vector<double> ExtractSolution();
  bool RefineWithLu(std::vector<double>* column_values);

  double& At(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }

  const LinearProgram& lp_;
  const SimplexOptions& options_;

  int m_ = 0;
  int n_ = 0;  // structural columns
  int cols_ = 0;
  std::vector<double> a_;
  std::vector<double> rhs_;    // transformed right-hand side (>= 0)
  std::vector<double> beta_;   // current basic values
  std::vector<double> upper_;  // per column
  std::vector<double> cost_;   // phase-two costs per column
  std::vector<double> d_;      // reduced costs
  std::vector<ColumnKind> kind_;
  std::vector<int> art_row_;  // artificial column -> row
  std::vector<char> at_upper_;
  std::vector<int> basis_;
  std::vector<int> position_;  // column -> basic row or -1
  // Original transformed columns (sparse) for the final LU refinement.
  std::vector<std::vector<std::pair<int, double>>> columns_;
  int64_t iterations_ = 0;
  bool time_exceeded_ = false;
};

void Tableau::Build() {
  m_ = lp_.num_rows();
  n_ = lp_.num_variables();

  // Shift x = lower + x'.
  rhs_.assign(m_, 0.0);
  for (int r = 0; r < m_; ++r) {
    double shift = 0.0;
    for (const LinearTerm& t : lp_.row(r).terms) {
      shift += t.coef * lp_.variable(t.var).lower;
    }
    rhs_[r] = lp_.row(r).rhs - shift;
  }

  std::vector<double> sign(m_, 1.0);
  std::vector<double> slack_coef(m_, 0.0);
  for (int r = 0; r < m_; ++r) {
    switch (lp_.row(r).sense) {
      case RowSense::kLessEqual:
        slack_coef[r] = 1.0;
        break;
      case RowSense::kGreaterEqual:
        slack_coef[r] = -1.0;
        break;
      case RowSense::kEqual:
        break;
    }
    if (rhs_[r] < 0.0) sign[r] = -1.0;
  }

  int num_slack = 0;
  int num_art = 0;
  for (int r = 0; r < m_; ++r) {
    if (slack_coef[r] != 0.0) ++num_slack;
    if (slack_coef[r] * sign[r] <= 0.0) ++num_art;
  }
  cols_ = n_ + num_slack + num_art;
  a_.assign(static_cast<size_t>(m_) * cols_, 0.0);
  upper_.assign(cols_, kInfinity);
  cost_.assign(cols_, 0.0);
  kind_.assign(cols_, ColumnKind::kStructural);
  art_row_.assign(cols_, -1);
  at_upper_.assign(cols_, 0);
  basis_.assign(m_, -1);
  position_.assign(cols_, -1);
  columns_.assign(cols_, {});

  for (int v = 0; v < n_; ++v) {
    const Variable& var = lp_.variable(v);
    upper_[v] = var.upper - var.lower;
    cost_[v] = var.objective;
  }
  for (int r = 0; r < m_; ++r) {
    for (const LinearTerm& t : lp_.row(r).terms) {
      At(r, t.var) += sign[r] * t.coef;
    }
    rhs_[r] *= sign[r];
  }
  int next = n_;
  for (int r = 0; r < m_; ++r) {
    if (slack_coef[r] == 0.0) continue;
    kind_[next] = ColumnKind::kSlack;
    At(r, next) = sign[r] * slack_coef[r];
    if (At(r, next) > 0.0) basis_[r] = next;
    ++next;
  }
  for (int r = 0; r < m_; ++r) {
    if (basis_[r] >= 0) continue;
    kind_[next] = ColumnKind::kArtificial;
    art_row_[next] = r;
    At(r, next) = 1.0;
    basis_[r] = next;
    ++next;
  }
  for (int c = 0; c < cols_; ++c) {
    for (int r = 0; r < m_; ++r) {
      if (At(r, c) != 0.0) columns_[c].push_back({r, At(r, c)});
    }
  }
  for (int r = 0; r < m_; ++r) position_[basis_[r]] = r;
  beta_ = rhs_;
}

void Tableau::PriceAll(const std::vector<double>& cost) {
  d_ = cost;
  for (int r = 0; r < m_; ++r) {
    const double cb = cost[basis_[r]];
    if (cb == 0.0) continue;
    const double* row = &a_[static_cast<size_t>(r) * cols_];
    for (int c = 0; c < cols_; ++c) d_[c] -= cb * row[c];
  }
  for (int r = 0; r < m_; ++r) d_[basis_[r]] = 0.0;
}

void Tableau::Pivot(int row, int col) {
  double* prow = &a_[static_cast<size_t>(row) * cols_];
  const double inv = 1.0 / prow[col];
  std::vector<int> nz;
  nz.reserve(64);
  for (int c = 0; c < cols_; ++c) {
    if (prow[c] == 0.0) continue;
    prow[c] *= inv;
    if (std::abs(prow[c]) < kZeroFill) {
      prow[c] = 0.0;
      continue;
    }
    nz.push_back(c);
  }
  prow[col] = 1.0;
  for (int r = 0; r < m_; ++r) {
    if (r == row) continue;
    double* other = &a_[static_cast<size_t>(r) * cols_];
    const double f = other[col];
    if (f == 0.0) continue;
    for (int c : nz) {
      double v = other[c] - f * prow[c];
      other[c] = std::abs(v) < kZeroFill ? 0.0 : v;
    }
    other[col] = 0.0;
  }
  const double fd = d_[col];
  if (fd != 0.0) {
    for (int c : nz) d_[c] -= fd * prow[c];
    d_[col] = 0.0;
  }
  position_[basis_[row]] = -1;
  basis_[row] = col;
  position_[col] = row;
}

LpStatus Tableau::Iterate(bool phase_one) {
  int degenerate_run = 0;
  bool bland = false;
  while (true) {
    if (iterations_ >= options_.max_iterations) {
      return LpStatus::kIterationLimit;
    }
    if (options_.deadline && (iterations_ & 63) == 0 &&
        std::chrono::steady_clock::now() > *options_.deadline) {
      time_exceeded_ = true;
      return LpStatus::kTimeLimit;
    }

    // Pricing.
    int enter = -1;
    double best = 0.0;
    for (int c = 0; c < cols_; ++c) {
      if (position_[c] >= 0 || upper_[c] <= 0.0) continue;
      if (!phase_one && kind_[c] == ColumnKind::kArtificial) continue;
      const double dc = d_[c];
      const bool eligible = at_upper_[c] ? dc > kCostTol : dc < -kCostTol;
      if (!eligible) continue;
      if (bland) {
        enter = c;
        break;
      }
      if (std::abs(dc) > best) {
        best = std::abs(dc);
        enter = c;
      }
    }
    if (enter < 0) return LpStatus::kOptimal;
    ++iterations_;

    // Ratio test. Moving the entering column by theta changes basic row r by
    // rate[r] * theta.
    const double dir = at_upper_[enter] ? -1.0 : 1.0;
    double theta = upper_[enter];
    int leave_row = -1;
    double leave_alpha = 0.0;
    for (int r = 0; r < m_; ++r) {
      const double alpha = At(r, enter);
      if (std::abs(alpha) < kPivotTol) continue;
      const double rate = -dir * alpha;
      const int bc = basis_[r];
      double limit;
      if (rate < 0.0) {
        limit = std::max(beta_[r], 0.0) / -rate;
      } else {
        if (std::isinf(upper_[bc])) continue;
        limit = std::max(upper_[bc] - beta_[r], 0.0) / rate;
      }
      bool take = false;
      if (limit < theta - 1e-12) {
        take = true;
      } else if (limit <= theta + 1e-12 && leave_row >= 0) {
        take = bland ? bc < basis_[leave_row]
                     : std::abs(alpha) > std::abs(leave_alpha);
      }
      if (take) {
        theta = limit;
        leave_row = r;
        leave_alpha = alpha;
      }
    }
    if (std::isinf(theta)) return LpStatus::kUnbounded;

    for (int r = 0; r < m_; ++r) {
      const double alpha = At(r, enter);
      if (alpha != 0.0) beta_[r] -= dir * alpha * theta;
    }
    if (leave_row < 0) {
      at_upper_[enter] = !at_upper_[enter];
    } else {
      const int leaving = basis_[leave_row];
      const double rate = -dir * leave_alpha;
      at_upper_[leaving] = rate > 0.0 ? 1 : 0;
      beta_[leave_row] = at_upper_[enter] ? upper_[enter] - theta : theta;
      at_upper_[enter] = 0;
      Pivot(leave_row, enter);
    }

    if (theta < 1e-12) {
      if (++degenerate_run >= options_.degenerate_pivots_before_bland) {
        bland = true;
      }
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }
}

bool Tableau::RefineWithLu(std::vector<double>* column_values) {
  // B x_B = rhs - sum_{nonbasic at upper} A_j u_j.
  Eigen::VectorXd b(m_);
  for (int r = 0; r < m_; ++r) b[r] = rhs_[r];
  for (int c = 0; c < cols_; ++c) {
    if (position_[c] >= 0 || !at_upper_[c]) continue;
    for (const auto& [r, v] : columns_[c]) b[r] -= v * upper_[c];
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (int r = 0; r < m_; ++r) {
    for (const auto& [row, v] : columns_[basis_[r]]) {
      triplets.emplace_back(row, r, v);
    }
  }
  Eigen::SparseMatrix<double> basis(m_, m_);
  basis.setFromTriplets(triplets.begin(), triplets.end());
  basis.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(basis);
  if (lu.info() != Eigen::Success) return false;
  Eigen::VectorXd xb = lu.solve(b);
  if (lu.info() != Eigen::Success) return false;
  for (int r = 0; r < m_; ++r) {
    if (!std::isfinite(xb[r])) return false;
    // Reject refinements that disagree with the tableau; that would signal a
    // near-singular basis rather than drift.
    if (std::abs(xb[r] - beta_[r]) > 1e-5 * (1.0 + std::abs(beta_[r]))) {
      return false;
    }
  }
  for (int r = 0; r < m_; ++r) (*column_values)[basis_[r]] = xb[r];
  return true;
}

std::vector<double> Tableau::ExtractSolution() {
  std::vector<double> col_values(cols_, 0.0);
  for (int c = 0; c < cols_; ++c) {
    if (position_[c] < 0 && at_upper_[c]) col_values[c] = upper_[c];
  }
  if (m_ > 0 && !RefineWithLu(&col_values)) {
    for (int r = 0; r < m_; ++r) col_values[basis_[r]] = beta_[r];
  }
  std::vector<double> x(n_);
  for (int v = 0; v < n_; ++v) {
    double value = std::clamp(col_values[v], 0.0, upper_[v]);
    x[v] = value + lp_.variable(v).lower;
  }
  return x;
}

LpResult Tableau::Solve() {
  LpResult result;
  bool has_artificial = false;
  for (int c = 0; c < cols_; ++c) {
    if (kind_[c] == ColumnKind::kArtificial) has_artificial = true;
  }

  if (has_artificial) {
    std::vector<double> phase_one_cost(cols_, 0.0);
    for (int c = 0; c < cols_; ++c) {
      if (kind_[c] == ColumnKind::kArtificial) phase_one_cost[c] = 1.0;
    }
    PriceAll(phase_one_cost);
    LpStatus status = Iterate(/*phase_one=*/true);
    result.iterations = iterations_;
    if (status != LpStatus::kOptimal) {
      result.status =
          status == LpStatus::kUnbounded ? LpStatus::kInfeasible : status;
      return result;
    }
    double infeasibility = 0.0;
    double scale = 1.0;
    for (int r = 0; r < m_; ++r) scale = std::max(scale, std::abs(rhs_[r]));
    for (int r = 0; r < m_; ++r) {
      if (kind_[basis_[r]] == ColumnKind::kArtificial &&
          beta_[r] > kPhaseOneTol * scale) {
        infeasibility += beta_[r];
        result.infeasible_rows.push_back(art_row_[basis_[r]]);
      }
    }
    if (infeasibility > 0.0) {
      std::sort(result.infeasible_rows.begin(), result.infeasible_rows.end());
      result.status = LpStatus::kInfeasible;
      return result;
    }
    // Pin artificials at zero for phase two.
    for (int c = 0; c < cols_; ++c) {
      if (kind_[c] == ColumnKind::kArtificial) {
        upper_[c] = 0.0;
        at_upper_[c] = 0;
      }
    }
  }

  PriceAll(cost_);
  LpStatus status = Iterate(/*phase_one=*/false);
  result.iterations = iterations_;
  result.status = status;
  if (status != LpStatus::kOptimal) return result;
  result.values = ExtractSolution();
  result.objective = lp_.Objective(result.values);
  return result;
}

}  // namespace

LpResult SolveLinearProgram(const LinearProgram& lp,
                            const SimplexOptions& options) {
  Tableau tableau(lp, options);
  return tableau.Solve();
}

}  // namespace overlay
