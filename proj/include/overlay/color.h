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

// Rounding under per-sink color limits.
//
// The boxes of the GAP flow graph are kept, but the flow is re-expressed over
// paths S -> i -> (i, j) -> box -> T. The fractional flow induced by x-bar is
// decomposed into paths; paths costing more than 4C (C = cost of that flow)
// are discarded, survivors are scaled by 4, and the system
//
//   capacity   sum_{p through e} pi_p          <= 4 u_e
//   box        sum_{p into b}  -9 pi_p         <= -9
//   color      sum_{p from color l to j} pi_p  <= 4
//   cost       sum_p (c_p / C) pi_p            <= 4
//
// is turned into equalities with one unit slack per row. Every column then has
// positive entries summing to at most 9 and negative entries summing to at
// least -9, so dependent rounding moves every row up by less than 9. In
// particular each box keeps at least one whole path.

#ifndef OVERLAY_COLOR_H_
#define OVERLAY_COLOR_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "overlay/gap_flow.h"
#include "overlay/lp_model.h"
#include "overlay/path_set.h"
#include "overlay/rounding.h"

namespace overlay {

struct PathVar {
  int route = 0;
  int reflector = 0;
  int sink = 0;
  int box = 0;    // index within the sink's boxes
  int color = 0;  // 0 when the reflector has none
  int arc = 0;    // pair -> box arc of the flow graph
  double cost = 0.0;
  double pi_bar = 0.0;
};

// Flow on every arc of `graph` (original units) induced by the box
// fragments of x-bar.
std::vector<double> FragmentFlow(const GapFlowGraph& graph,
                                 const BoxAssignment& boxes);

// Flow on every arc as found by the min-cost flow solver (original units).
std::vector<double> SolverFlow(const GapFlowGraph& graph);

// Standard path decomposition of an S-T flow on the GAP flow graph.
absl::StatusOr<std::vector<PathVar>> EnumeratePaths(
    const LpModel& model, const GapFlowGraph& graph,
    const std::vector<double>& arc_flow);

enum class SystemRowKind { kCapacity, kBox, kColor, kCost };

// Equality system A z = b over path columns followed by one slack column per
// row.
struct RoundingSystem {
  int num_rows = 0;
  int num_paths = 0;
  std::vector<std::vector<std::pair<int, double>>> columns;  // (row, coef)
  std::vector<double> z;
  std::vector<double> b;
  std::vector<double> rhs;  // inequality right-hand sides
  std::vector<SystemRowKind> kinds;
  std::vector<std::string> names;
  std::vector<int> path_index;  // column -> index into the enumerated paths
  double t = 9.0;
  double cost_scale = 0.0;     // C
  double filtered_mass = 0.0;  // sum of pi-bar over discarded paths

  double ColumnPositiveSum(int column) const;
  double ColumnNegativeSum(int column) const;
};

// Drops paths with c_p > 4C, scales the rest by 4 and builds the system.
absl::StatusOr<RoundingSystem> FilterAndScale(const LpModel& model,
                                              const GapFlowGraph& graph,
                                              const BoxAssignment& boxes,
                                              const std::vector<PathVar>& paths,
                                              double cost_scale);

struct KarpCertificate {
  bool floor_ceil = true;
  double max_row_excess = 0.0;  // max_r (A z'' - b)_r
  double t = 0.0;
  int dropped_rows = 0;  // rows released without a kernel direction
  bool ok() const { return floor_ceil && max_row_excess < t - 1e-9; }
};

struct KarpResult {
  std::vector<double> values;  // integral, one per column
  KarpCertificate certificate;
  int iterations = 0;
};

// Rounds z to an integral vector with each coordinate at its floor or ceiling
// and every row exceeding b by less than t. The contract is verified before
// returning; a failed check is an error.
absl::StatusOr<KarpResult> KarpRound(const RoundingSystem& system);

// Checks the rounding contract for arbitrary integral values.
KarpCertificate CheckKarpContract(const RoundingSystem& system,
                                  const std::vector<double>& values);

struct ColorAudit {
  int max_copies_per_color = 0;
  bool all_served = true;
  bool boxes_covered = true;
  double cost = 0.0;
  double cost_bound = 0.0;  // 13 C-bar
  KarpCertificate certificate;
  bool ok = false;
  std::string violation;
};

struct ColorResult {
  PathSet paths;
  ColorAudit audit;
};

absl::StatusOr<ColorResult> ExtractColoredSolution(
    const LpModel& model, const SemiIntegralSolution& semi,
    const BoxAssignment& boxes, const std::vector<PathVar>& paths,
    const RoundingSystem& system, const KarpResult& rounded);

nlohmann::json ColorAuditToJson(const ColorAudit& audit);

}  // namespace overlay

#endif  // OVERLAY_COLOR_H_
