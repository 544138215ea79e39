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

#include "overlay/gap_flow.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace overlay {
namespace {

constexpr double kHalf = 0.5;
// A box whose mass is within this of 1/2 counts as full.
constexpr double kMassTolerance = 1e-9;

}  // namespace

int BoxAssignment::num_boxes() const {
  int total = 0;
  for (const std::vector<Box>& b : boxes) total += static_cast<int>(b.size());
  return total;
}

absl::StatusOr<BoxAssignment> BuildBoxes(const LpModel& model,
                                         const SemiIntegralSolution& semi) {
  const Instance& inst = model.instance();
  const std::vector<RouteVar>& routes = model.route_vars();
  BoxAssignment out;
  out.boxes.resize(inst.num_sinks());
  out.eliminated.assign(inst.num_sinks(), 0);

  for (int j = 0; j < inst.num_sinks(); ++j) {
    if (inst.sinks()[j].weight_threshold <= 0.0) continue;
    std::vector<int> order;
    double total = 0.0;
    for (int r : model.routes_of_sink(j)) {
      if (semi.x_bar[r] > 0.0) {
        order.push_back(r);
        total += semi.x_bar[r];
      }
    }
    if (total < kHalf - kMassTolerance) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "sink %s: rounded mass %.6g is below 1/2, no box survives; re-round",
          inst.sinks()[j].id, total));
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (routes[a].weight != routes[b].weight) {
        return routes[a].weight > routes[b].weight;
      }
      return routes[a].reflector < routes[b].reflector;
    });

    std::vector<Box>& boxes = out.boxes[j];
    Box current;
    current.sink = j;
    auto close = [&](Box& box) {
      box.max_weight = routes[box.fragments.front().route].weight;
      box.min_weight = routes[box.fragments.back().route].weight;
      boxes.push_back(std::move(box));
      box = Box();
      box.sink = j;
    };
    for (int r : order) {
      double left = semi.x_bar[r];
      while (left > 0.0) {
        const double room = kHalf - current.mass;
        const double take = std::min(left, room);
        current.fragments.push_back({r, take});
        current.mass += take;
        left -= take;
        if (current.mass >= kHalf - kMassTolerance) {
          // Any remainder below the tolerance is dropped with the box split.
          if (left < kMassTolerance) left = 0.0;
          close(current);
        }
      }
    }
    // The trailing partial box, if any, is eliminated.
    out.eliminated[j] = current.fragments.empty() ? 0 : 1;
    if (boxes.empty()) {
      return absl::InternalError(absl::StrFormat(
          "sink %s: no full box despite mass %.6g", inst.sinks()[j].id, total));
    }
  }
  return out;
}

GapFlowGraph BuildGapFlowGraph(const LpModel& model,
                               const SemiIntegralSolution& semi,
                               const BoxAssignment& boxes) {
  const Instance& inst = model.instance();
  const std::vector<RouteVar>& routes = model.route_vars();
  GapFlowGraph g;

  int next = 0;
  g.source = next++;
  g.reflector_node.resize(inst.num_reflectors());
  for (int i = 0; i < inst.num_reflectors(); ++i) g.reflector_node[i] = next++;
  g.pair_node.assign(routes.size(), -1);
  for (size_t r = 0; r < routes.size(); ++r) {
    if (semi.x_bar[r] > 0.0) g.pair_node[r] = next++;
  }
  std::vector<std::vector<int>> box_node(inst.num_sinks());
  for (int j = 0; j < inst.num_sinks(); ++j) {
    for (size_t b = 0; b < boxes.boxes[j].size(); ++b) {
      box_node[j].push_back(next++);
    }
  }
  g.terminal = next++;
  g.flow = MinCostFlow(next);

  g.reflector_arc.resize(inst.num_reflectors());
  for (int i = 0; i < inst.num_reflectors(); ++i) {
    const auto cap = static_cast<int64_t>(std::llround(model.CopyCapacity(i)));
    g.reflector_arc[i] =
        g.flow.AddArc(g.source, g.reflector_node[i], 4 * cap, 0.0);
  }
  g.pair_arc.assign(routes.size(), -1);
  for (size_t r = 0; r < routes.size(); ++r) {
    if (g.pair_node[r] < 0) continue;
    g.pair_arc[r] = g.flow.AddArc(g.reflector_node[routes[r].reflector],
                                  g.pair_node[r], 2, 0.0);
  }
  g.box_arc.resize(inst.num_sinks());
  for (int j = 0; j < inst.num_sinks(); ++j) {
    for (size_t b = 0; b < boxes.boxes[j].size(); ++b) {
      const Box& box = boxes.boxes[j][b];
      for (const BoxFragment& fragment : box.fragments) {
        // A pair split across the same box twice cannot happen: fragments of
        // one route are consecutive and a box takes each route once.
        const int arc =
            g.flow.AddArc(g.pair_node[fragment.route], box_node[j][b], 1,
                          routes[fragment.route].cost);
        g.fragment_arcs.push_back(
            {fragment.route, j, static_cast<int>(b), arc});
      }
      g.box_arc[j].push_back(g.flow.AddArc(box_node[j][b], g.terminal, 1, 0.0));
      ++g.expected_flow;
    }
  }
  return g;
}

absl::Status SolveGapFlow(GapFlowGraph& graph) {
  if (absl::Status status = graph.flow.Solve(graph.source, graph.terminal);
      !status.ok()) {
    return status;
  }
  if (graph.flow.flow_value() != graph.expected_flow) {
    return absl::InternalError(
        absl::StrFormat("GAP flow saturates %d of %d boxes",
                        graph.flow.flow_value(), graph.expected_flow));
  }
  return absl::OkStatus();
}

absl::StatusOr<GapFlowResult> ExtractAndDouble(const LpModel& model,
                                               const SemiIntegralSolution& semi,
                                               const BoxAssignment& boxes,
                                               const GapFlowGraph& graph) {
  const Instance& inst = model.instance();
  const std::vector<RouteVar>& routes = model.route_vars();
  GapFlowResult out;
  GapAudit& audit = out.audit;

  std::vector<int64_t> units(routes.size(), 0);
  for (const GapFlowGraph::FragmentArc& fa : graph.fragment_arcs) {
    units[fa.route] += graph.flow.Flow(fa.arc);
    audit.flow_cost += 0.5 * graph.flow.Flow(fa.arc) * routes[fa.route].cost;
  }
  for (int j = 0; j < inst.num_sinks(); ++j) {
    for (const Box& box : boxes.boxes[j]) {
      for (const BoxFragment& fragment : box.fragments) {
        audit.fragment_cost += fragment.mass * routes[fragment.route].cost;
      }
    }
  }

  out.x_tilde.assign(routes.size(), 0.0);
  std::vector<std::vector<int>> chosen(inst.num_sinks());
  for (size_t r = 0; r < routes.size(); ++r) {
    if (units[r] < 0 || units[r] > 2) audit.half_integral = false;
    out.x_tilde[r] = 0.5 * static_cast<double>(units[r]);
    if (units[r] > 0) chosen[routes[r].sink].push_back(routes[r].reflector);
  }
  out.paths = PathSetFromRoutes(inst, model.options().mode, std::move(chosen),
                                "approx");

  // Guarantees.
  std::vector<int> copies(inst.num_reflectors(), 0);
  for (const std::vector<int>& via : out.paths.routes) {
    for (int i : via) ++copies[i];
  }
  for (int i = 0; i < inst.num_reflectors(); ++i) {
    const double cap = model.CopyCapacity(i);
    const double ratio =
        cap > 0 ? copies[i] / cap : (copies[i] > 0 ? kInfinity : 0);
    audit.max_fanout_ratio = std::max(audit.max_fanout_ratio, ratio);
  }
  for (int j = 0; j < inst.num_sinks(); ++j) {
    const double threshold = inst.sinks()[j].weight_threshold;
    if (threshold <= 0.0) continue;
    double weight = 0.0;
    for (int i : out.paths.routes[j]) weight += *inst.PathWeight(i, j);
    audit.min_weight_ratio =
        std::min(audit.min_weight_ratio, weight / threshold);
    if (weight < threshold / 4.0 - kWeightTolerance &&
        audit.violation.empty()) {
      audit.violation =
          absl::StrFormat("sink %s: weight %.6g < W/4 = %.6g",
                          inst.sinks()[j].id, weight, threshold / 4.0);
    }
  }
  audit.cost = out.paths.cost.total();
  audit.cost_bound = 2.0 * semi.cost;
  const double cost_slack = 1e-9 * std::max(1.0, audit.cost_bound);
  if (!audit.half_integral) {
    audit.violation = "flow is not half-integral";
  } else if (audit.max_fanout_ratio > 4.0 + 1e-12) {
    audit.violation =
        absl::StrFormat("fan-out ratio %.6g exceeds 4", audit.max_fanout_ratio);
  } else if (audit.cost > audit.cost_bound + cost_slack) {
    audit.violation = absl::StrFormat("cost %.6g exceeds 2 C-bar = %.6g",
                                      audit.cost, audit.cost_bound);
  } else if (audit.flow_cost > audit.fragment_cost + cost_slack) {
    audit.violation =
        absl::StrFormat("flow cost %.6g exceeds fragment cost %.6g",
                        audit.flow_cost, audit.fragment_cost);
  }
  audit.ok = audit.violation.empty();
  if (!audit.ok) {
    return absl::FailedPreconditionError(
        absl::StrCat("GAP rounding audit: ", audit.violation));
  }
  return out;
}

nlohmann::json GapAuditToJson(const GapAudit& audit) {
  return {{"max_fanout_ratio", audit.max_fanout_ratio},
          {"min_weight_ratio", audit.min_weight_ratio},
          {"cost", audit.cost},
          {"cost_bound", audit.cost_bound},
          {"flow_cost", audit.flow_cost},
          {"fragment_cost", audit.fragment_cost},
          {"half_integral", audit.half_integral},
          {"ok", audit.ok},
          {"violation", audit.violation}};
}

}  // namespace overlay
