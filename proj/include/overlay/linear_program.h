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

#ifndef OVERLAY_LINEAR_PROGRAM_H_
#define OVERLAY_LINEAR_PROGRAM_H_

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace overlay {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

struct LinearTerm {
  int var = 0;
  double coef = 0.0;
};

struct LinearRow {
  std::string name;
  std::vector<LinearTerm> terms;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  double objective = 0.0;
  bool integer = false;
};

// A minimization LP/MIP in row form: min c.x s.t. rows, lower <= x <= upper.
// Lower bounds must be finite.
class LinearProgram {
 public:
  int AddVariable(std::string name, double lower, double upper,
                  double objective, bool integer = false);
  int AddRow(std::string name, std::vector<LinearTerm> terms, RowSense sense,
             double rhs);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<LinearRow>& rows() const { return rows_; }
  const Variable& variable(int v) const { return variables_[v]; }
  const LinearRow& row(int r) const { return rows_[r]; }

  void SetBounds(int var, double lower, double upper);
  void SetObjective(int var, double objective) {
    variables_[var].objective = objective;
  }

  double Objective(std::span<const double> x) const;
  double RowActivity(int row, std::span<const double> x) const;
  // Largest violation over rows and bounds (0 when feasible).
  double MaxViolation(std::span<const double> x) const;

  // CPLEX-style .lp text.
  std::string ToLpFormat(const std::string& comment = "") const;

 private:
  std::vector<Variable> variables_;
  std::vector<LinearRow> rows_;
};

}  // namespace overlay

#endif  // OVERLAY_LINEAR_PROGRAM_H_
