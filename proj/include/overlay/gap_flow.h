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

// Second rounding stage: the semi-integral x-bar values are packed into
// half-unit "boxes" per sink and re-routed by a min-cost flow whose optimum is
// half-integral; halves are then doubled.
//
// Flow network (all capacities doubled so the flow is integral):
//   S -> reflector i          capacity 2 * 2 cap_i
//   i -> pair (i, j)          capacity 2 * 1
//   pair (i, j) -> box b      capacity 2 * 1/2, cost = x objective of (i, j)
//   box b -> T                capacity 2 * 1/2
// where cap_i is F_i (or floor(F'_i / B) with bandwidth caps) and a pair
// is linked to every box holding a fragment of its x-bar mass.

#ifndef OVERLAY_GAP_FLOW_H_
#define OVERLAY_GAP_FLOW_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "overlay/lp_model.h"
#include "overlay/min_cost_flow.h"
#include "overlay/path_set.h"
#include "overlay/rounding.h"

namespace overlay {

struct BoxFragment {
  int route = 0;  // index into LpModel::route_vars()
  double mass = 0.0;
};

struct Box {
  int sink = 0;
  std::vector<BoxFragment> fragments;
  double mass = 0.0;
  double max_weight = 0.0;  // weight of the first fragment
  double min_weight = 0.0;  // weight of the last fragment
};

struct BoxAssignment {
  std::vector<std::vector<Box>> boxes;  // surviving boxes per sink
  std::vector<int> eliminated;          // 0 or 1 per sink
  int num_boxes() const;
};

// Packs each sink's x-bar mass, sorted by weight (non-increasing, ties by
// reflector index), into consecutive half-unit boxes. A trailing box holding
// less than 1/2 is dropped. Sinks with a zero threshold get no boxes.
absl::StatusOr<BoxAssignment> BuildBoxes(const LpModel& model,
                                         const SemiIntegralSolution& semi);

struct GapFlowGraph {
  MinCostFlow flow{0};
  int source = 0;
  int terminal = 0;
  std::vector<int> reflector_node;
  std::vector<int> reflector_arc;  // S -> i
  std::vector<int> pair_node;      // per route, -1 when x-bar = 0
  std::vector<int> pair_arc;       // i -> (i, j) per route, -1 if absent
  struct FragmentArc {
    int route;
    int sink;
    int box;  // index within the sink's surviving boxes
    int arc;
  };
  std::vector<FragmentArc> fragment_arcs;
  std::vector<std::vector<int>> box_arc;  // per sink, per box: box -> T
  int expected_flow = 0;                  // scaled units = number of boxes
};

GapFlowGraph BuildGapFlowGraph(const LpModel& model,
                               const SemiIntegralSolution& semi,
                               const BoxAssignment& boxes);

// Runs min-cost max-flow and checks that every box is saturated.
absl::Status SolveGapFlow(GapFlowGraph& graph);

struct GapAudit {
  double max_fanout_ratio = 0.0;  // copies / cap_i
  double min_weight_ratio = 1.0;  // achieved / W over sinks with W > 0
  double cost = 0.0;
  double cost_bound = 0.0;     // 2 C-bar
  double flow_cost = 0.0;      // min-cost flow, original units
  double fragment_cost = 0.0;  // x-bar cost of surviving fragments
  bool half_integral = true;
  bool ok = false;
  std::string violation;
};

struct GapFlowResult {
  std::vector<double> x_tilde;  // per route, in {0, 1/2, 1}
  PathSet paths;
  GapAudit audit;
};

// Reads x~ off the flow, doubles halves and audits the result against the
// guarantees: copies <= 4 cap_i, weight >= W / 4, cost <= 2 C-bar.
absl::StatusOr<GapFlowResult> ExtractAndDouble(const LpModel& model,
                                               const SemiIntegralSolution& semi,
                                               const BoxAssignment& boxes,
                                               const GapFlowGraph& graph);

nlohmann::json GapAuditToJson(const GapAudit& audit);

}  // namespace overlay

#endif  // OVERLAY_GAP_FLOW_H_
