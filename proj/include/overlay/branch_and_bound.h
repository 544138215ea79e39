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

// Branch-and-bound for 0/1 programs over the in-tree simplex, plus the two
// integral baselines built on it: the exact IP and "ApproxHack", which fixes
// every variable the LP relaxation already set to 0 or 1 and solves the rest
// exactly.
//
// Nodes are explored best-bound first (ties by creation order) and branch on
// the most fractional variable. Every node re-solves its relaxation from
// scratch; models in this project are small enough for that to be the
// simpler and more robust choice.

#ifndef OVERLAY_BRANCH_AND_BOUND_H_
#define OVERLAY_BRANCH_AND_BOUND_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "overlay/linear_program.h"
#include "overlay/lp_model.h"

namespace overlay {

struct TimeBudget {
  std::optional<double> seconds;
  int64_t node_limit = 1'000'000;
};

enum class Provenance { kExactIp, kApprox, kApproxHack };

const char* ProvenanceName(Provenance provenance);

struct MipResult {
  SolveStatus status = SolveStatus::kError;
  std::vector<double> values;  // incumbent, exact 0/1 on integer variables
  double objective = kInfinity;
  double bound = -kInfinity;  // best proven lower bound
  int64_t nodes = 0;
  std::vector<int> infeasible_rows;  // root relaxation infeasibility
  std::string message;

  bool has_solution() const { return !values.empty(); }
};

struct MipOptions {
  TimeBudget budget;
  double gap_tolerance = 1e-6;
  double integrality_tolerance = 1e-6;
  // Optional starting incumbent; ignored unless feasible.
  std::optional<std::vector<double>> incumbent;
};

// Minimizes `lp` with integrality enforced on variables marked integer.
MipResult SolveMip(const LinearProgram& lp, const MipOptions& options = {});

struct IntegralSolution {
  SolveStatus status = SolveStatus::kError;
  Provenance provenance = Provenance::kExactIp;
  std::vector<double> values;  // per LP variable
  double objective = 0.0;
  double bound = 0.0;
  int64_t nodes = 0;
  std::optional<InfeasibilityCertificate> certificate;
  // ApproxHack only: fixing made the residual program infeasible, the caller
  // should fall back to Approx.
  bool fallback = false;
  int fixed_variables = 0;
  std::string message;

  bool has_solution() const { return !values.empty(); }
};

// Exact IP. `incumbent` (e.g. an Approx solution mapped to variables) seeds
// the search when it is feasible.
IntegralSolution SolveIp(
    const LpModel& model, const TimeBudget& budget,
    const std::optional<std::vector<double>>& incumbent = std::nullopt);

// Fixes variables within 1e-7 of 0 or 1 in `frac` and solves the remainder.
IntegralSolution ApproxHack(const LpModel& model,
                            const FractionalSolution& frac,
                            const TimeBudget& budget);

}  // namespace overlay

#endif  // OVERLAY_BRANCH_AND_BOUND_H_
