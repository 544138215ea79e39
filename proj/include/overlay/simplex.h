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

// Dense bounded-variable primal simplex.
//
// Two phases over a full tableau. Entering columns are priced by largest
// reduced cost; after a run of degenerate pivots the solver switches to
// Bland's smallest-index rule until the objective moves again, which rules
// out cycling. Ties are broken by index, so identical programs always produce
// identical solutions.
//
// On exit the basic solution is recomputed from the original data with a
// sparse LU factorization of the final basis, removing drift accumulated by
// the tableau updates.

#ifndef OVERLAY_SIMPLEX_H_
#define OVERLAY_SIMPLEX_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "overlay/linear_program.h"

namespace overlay {

enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kTimeLimit,
};

const char* LpStatusName(LpStatus status);

struct SimplexOptions {
  int64_t max_iterations = 5'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  // Consecutive degenerate pivots tolerated before switching to Bland's rule.
  int degenerate_pivots_before_bland = 30;
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> values;  // one per variable (kOptimal only)
  double objective = 0.0;
  int64_t iterations = 0;
  // kInfeasible: rows still carrying artificial slack at the end of phase 1.
  std::vector<int> infeasible_rows;
};

LpResult SolveLinearProgram(const LinearProgram& lp,
                            const SimplexOptions& options = {});

}  // namespace overlay

#endif  // OVERLAY_SIMPLEX_H_
