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

#include "overlay/linear_program.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace overlay {

int LinearProgram::AddVariable(std::string name, double lower, double upper,
                               double objective, bool integer) {
  variables_.push_back({std::move(name), lower, upper, objective, integer});
  return num_variables() - 1;
}

int LinearProgram::AddRow(std::string name, std::vector<LinearTerm> terms,
                          RowSense sense, double rhs) {
  rows_.push_back({std::move(name), std::move(terms), sense, rhs});
  return num_rows() - 1;
}

void LinearProgram::SetBounds(int var, double lower, double upper) {
  variables_[var].lower = lower;
  variables_[var].upper = upper;
}

double LinearProgram::Objective(std::span<const double> x) const {
  double total = 0.0;
  for (int v = 0; v < num_variables(); ++v) {
    total += variables_[v].objective * x[v];
  }
  return total;
}

double LinearProgram::RowActivity(int row, std::span<const double> x) const {
  double total = 0.0;
  for (const LinearTerm& t : rows_[row].terms) total += t.coef * x[t.var];
  return total;
}

double LinearProgram::MaxViolation(std::span<const double> x) const {
  double worst = 0.0;
  for (int v = 0; v < num_variables(); ++v) {
    worst = std::max(worst, variables_[v].lower - x[v]);
    worst = std::max(worst, x[v] - variables_[v].upper);
  }
  for (int r = 0; r < num_rows(); ++r) {
    const double act = RowActivity(r, x);
    const LinearRow& row = rows_[r];
    if (row.sense != RowSense::kGreaterEqual) {
      worst = std::max(worst, act - row.rhs);
    }
    if (row.sense != RowSense::kLessEqual) {
      worst = std::max(worst, row.rhs - act);
    }
  }
  return worst;
}

namespace {

std::string FormatCoef(double c) { return absl::StrFormat("%.17g", c); }

void AppendTerms(const std::vector<LinearTerm>& terms,
                 const std::vector<Variable>& vars, std::string* out) {
  std::string line = " ";
  bool first = true;
  for (const LinearTerm& t : terms) {
    if (t.coef == 0.0) continue;
    std::string piece;
    if (first) {
      piece = t.coef < 0 ? "- " : "";
    } else {
      piece = t.coef < 0 ? " - " : " + ";
    }
    const double mag = std::abs(t.coef);
    if (mag != 1.0) absl::StrAppend(&piece, FormatCoef(mag), " ");
    absl::StrAppend(&piece, vars[t.var].name);
    // Wrap long rows; the format limits line length to 255 characters.
    if (line.size() + piece.size() > 200) {
      absl::StrAppend(out, line, "\n");
      line = " ";
    }
    absl::StrAppend(&line, piece);
    first = false;
  }
  if (first) absl::StrAppend(&line, "0 ", vars.empty() ? "x" : vars[0].name);
  absl::StrAppend(out, line);
}

}  // namespace

std::string LinearProgram::ToLpFormat(const std::string& comment) const {
  std::string out;
  if (!comment.empty()) absl::StrAppend(&out, "\\ ", comment, "\n");
  absl::StrAppend(&out, "Minimize\n obj:");
  std::vector<LinearTerm> obj;
  for (int v = 0; v < num_variables(); ++v) {
    if (variables_[v].objective != 0.0) {
      obj.push_back({v, variables_[v].objective});
    }
  }
  AppendTerms(obj, variables_, &out);
  absl::StrAppend(&out, "\nSubject To\n");
  for (const LinearRow& row : rows_) {
    absl::StrAppend(&out, " ", row.name, ":");
    AppendTerms(row.terms, variables_, &out);
    const char* op = row.sense == RowSense::kLessEqual      ? "<="
                     : row.sense == RowSense::kGreaterEqual ? ">="
                                                            : "=";
    absl::StrAppend(&out, " ", op, " ", FormatCoef(row.rhs), "\n");
  }
  absl::StrAppend(&out, "Bounds\n");
  for (const Variable& v : variables_) {
    if (std::isinf(v.upper)) {
      absl::StrAppend(&out, " ", v.name, " >= ", FormatCoef(v.lower), "\n");
    } else {
      absl::StrAppend(&out, " ", FormatCoef(v.lower), " <= ", v.name,
                      " <= ", FormatCoef(v.upper), "\n");
    }
  }
  std::string integers;
  for (const Variable& v : variables_) {
    if (v.integer) absl::StrAppend(&integers, " ", v.name, "\n");
  }
  if (!integers.empty()) absl::StrAppend(&out, "General\n", integers);
  absl::StrAppend(&out, "End\n");
  return out;
}

}  // namespace overlay
