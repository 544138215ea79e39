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

#include "overlay/color.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace overlay {
namespace {

constexpr double kFlowTolerance = 1e-9;
constexpr double kSnap = 1e-10;
constexpr double kNumColumnSum = 9.0;

}  // namespace

std::vector<double> FragmentFlow(const GapFlowGraph& graph,
                                 const BoxAssignment& boxes) {
  std::vector<double> flow(graph.flow.num_arcs(), 0.0);
  // Fragment arcs were added box by box in fragment order.
  size_t next = 0;
  for (int j = 0; j < static_cast<int>(boxes.boxes.size()); ++j) {
    for (size_t b = 0; b < boxes.boxes[j].size(); ++b) {
      for (const BoxFragment& fragment : boxes.boxes[j][b].fragments) {
        const GapFlowGraph::FragmentArc& fa = graph.fragment_arcs[next++];
        flow[fa.arc] += fragment.mass;
        flow[graph.pair_arc[fragment.route]] += fragment.mass;
        flow[graph.box_arc[j][b]] += fragment.mass;
      }
    }
  }
  for (size_t r = 0; r < graph.pair_arc.size(); ++r) {
    if (graph.pair_arc[r] < 0) continue;
    const int tail = graph.flow.Tail(graph.pair_arc[r]);
    for (size_t i = 0; i < graph.reflector_node.size(); ++i) {
      if (graph.reflector_node[i] == tail) {
        flow[graph.reflector_arc[i]] += flow[graph.pair_arc[r]];
      }
    }
  }
  return flow;
}

std::vector<double> SolverFlow(const GapFlowGraph& graph) {
  std::vector<double> flow(graph.flow.num_arcs());
  for (int a = 0; a < graph.flow.num_arcs(); ++a) {
    flow[a] = 0.5 * static_cast<double>(graph.flow.Flow(a));
  }
  return flow;
}

absl::StatusOr<std::vector<PathVar>> EnumeratePaths(
    const LpModel& model, const GapFlowGraph& graph,
    const std::vector<double>& arc_flow) {
  const Instance& inst = model.instance();
  const std::vector<RouteVar>& routes = model.route_vars();
  std::vector<double> residual = arc_flow;
  std::vector<PathVar> paths;
  // In this layered graph every pair -> box arc lies on exactly one S-T path,
  // so peeling arcs in order is a complete decomposition.
  for (const GapFlowGraph::FragmentArc& fa : graph.fragment_arcs) {
    const double f = residual[fa.arc];
    if (f <= kFlowTolerance) continue;
    const RouteVar& route = routes[fa.route];
    PathVar p;
    p.route = fa.route;
    p.reflector = route.reflector;
    p.sink = fa.sink;
    p.box = fa.box;
    p.color = inst.reflectors()[route.reflector].color.value_or(0);
    p.arc = fa.arc;
    p.cost = route.cost;
    p.pi_bar = f;
    residual[fa.arc] -= f;
    residual[graph.pair_arc[fa.route]] -= f;
    residual[graph.reflector_arc[route.reflector]] -= f;
    residual[graph.box_arc[fa.sink][fa.box]] -= f;
    paths.push_back(p);
  }
  for (int a = 0; a < graph.flow.num_arcs(); ++a) {
    if (std::abs(residual[a]) > kFlowTolerance) {
      return absl::InternalError(absl::StrFormat(
          "path decomposition leaves %.3g on arc %d", residual[a], a));
    }
  }
  return paths;
}

double RoundingSystem::ColumnPositiveSum(int column) const {
  double sum = 0.0;
  for (const auto& [row, coef] : columns[column]) sum += std::max(coef, 0.0);
  return sum;
}

double RoundingSystem::ColumnNegativeSum(int column) const {
  double sum = 0.0;
  for (const auto& [row, coef] : columns[column]) sum += std::min(coef, 0.0);
  return sum;
}

absl::StatusOr<RoundingSystem> FilterAndScale(const LpModel& model,
                                              const GapFlowGraph& graph,
                                              const BoxAssignment& boxes,
                                              const std::vector<PathVar>& paths,
                                              double cost_scale) {
  const Instance& inst = model.instance();
  double flow_cost = 0.0;
  for (const PathVar& p : paths) flow_cost += p.cost * p.pi_bar;
  if (flow_cost > cost_scale + 1e-9 * std::max(1.0, cost_scale)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "path flow cost %.9g exceeds C = %.9g", flow_cost, cost_scale));
  }

  RoundingSystem sys;
  sys.cost_scale = cost_scale;
  sys.t = kNumColumnSum;
  std::map<std::pair<int, int>, int> rows;  // (kind tag, key) -> row
  auto row_of = [&](int tag, int key, SystemRowKind kind, double rhs,
                    std::string name) {
    auto [it, inserted] = rows.try_emplace({tag, key}, sys.num_rows);
    if (inserted) {
      ++sys.num_rows;
      sys.kinds.push_back(kind);
      sys.rhs.push_back(rhs);
      sys.names.push_back(std::move(name));
    }
    return it->second;
  };

  // Box rows first so that every surviving box has one.
  int box_key = 0;
  std::vector<std::vector<int>> box_row(inst.num_sinks());
  std::vector<std::vector<double>> kept_mass(inst.num_sinks());
  for (int j = 0; j < inst.num_sinks(); ++j) {
    for (size_t b = 0; b < boxes.boxes[j].size(); ++b) {
      box_row[j].push_back(
          row_of(0, box_key++, SystemRowKind::kBox, -9.0,
                 absl::StrCat("box_", inst.sinks()[j].id, "_", b)));
    }
    kept_mass[j].assign(boxes.boxes[j].size(), 0.0);
  }

  const int cost_row =
      cost_scale > 0.0 ? row_of(1, 0, SystemRowKind::kCost, 4.0, "cost") : -1;

  for (size_t p = 0; p < paths.size(); ++p) {
    const PathVar& path = paths[p];
    if (cost_scale > 0.0 ? path.cost > 4.0 * cost_scale : path.cost > 0.0) {
      sys.filtered_mass += path.pi_bar;
      continue;
    }
    kept_mass[path.sink][path.box] += path.pi_bar;
    std::vector<std::pair<int, double>> column;
    const int refl_arc = graph.reflector_arc[path.reflector];
    column.push_back(
        {row_of(2, refl_arc, SystemRowKind::kCapacity,
                4.0 * 2.0 * model.CopyCapacity(path.reflector),
                absl::StrCat("cap_S_", inst.reflectors()[path.reflector].id)),
         1.0});
    column.push_back(
        {row_of(2, graph.pair_arc[path.route], SystemRowKind::kCapacity, 4.0,
                absl::StrCat("cap_", inst.reflectors()[path.reflector].id, "_",
                             inst.sinks()[path.sink].id)),
         1.0});
    column.push_back({row_of(2, path.arc, SystemRowKind::kCapacity, 2.0,
                             absl::StrCat("cap_pair_box_", path.arc)),
                      1.0});
    const int box_arc = graph.box_arc[path.sink][path.box];
    column.push_back({row_of(2, box_arc, SystemRowKind::kCapacity, 2.0,
                             absl::StrCat("cap_box_T_", box_arc)),
                      1.0});
    column.push_back({box_row[path.sink][path.box], -9.0});
    if (model.options().colors && path.color > 0) {
      column.push_back(
          {row_of(3, path.sink * (inst.num_colors() + 1) + path.color,
                  SystemRowKind::kColor, 4.0,
                  absl::StrCat("color_", inst.sinks()[path.sink].id, "_",
                               path.color)),
           1.0});
    }
    if (cost_row >= 0 && path.cost > 0.0) {
      column.push_back({cost_row, path.cost / cost_scale});
    }
    sys.columns.push_back(std::move(column));
    sys.path_index.push_back(static_cast<int>(p));
    sys.z.push_back(4.0 * path.pi_bar);
  }
  sys.num_paths = static_cast<int>(sys.columns.size());

  for (int j = 0; j < inst.num_sinks(); ++j) {
    for (size_t b = 0; b < kept_mass[j].size(); ++b) {
      if (kept_mass[j][b] < 0.25 - kFlowTolerance) {
        return absl::FailedPreconditionError(absl::StrFormat(
            "sink %s box %d keeps only %.6g < 1/4 after filtering",
            inst.sinks()[j].id, b, kept_mass[j][b]));
      }
    }
  }

  // Slacks: one per row, coefficient 1.
  std::vector<double> activity(sys.num_rows, 0.0);
  for (int c = 0; c < sys.num_paths; ++c) {
    for (const auto& [row, coef] : sys.columns[c])
      activity[row] += coef * sys.z[c];
  }
  for (int r = 0; r < sys.num_rows; ++r) {
    const double slack = sys.rhs[r] - activity[r];
    if (slack < -1e-7) {
      // Drawn routes carry 1/M each, so a large color class can exceed one
      // copy in total. That is a property of the draw, not a defect.
      if (sys.kinds[r] == SystemRowKind::kColor) {
        return absl::FailedPreconditionError(
            absl::StrFormat("draw puts %.6g copies on %s, above 1",
                            activity[r] / 4.0, sys.names[r]));
      }
      return absl::InternalError(absl::StrFormat(
          "scaled path solution violates %s by %.3g", sys.names[r], -slack));
    }
    sys.columns.push_back({{r, 1.0}});
    sys.path_index.push_back(-1);
    sys.z.push_back(std::max(slack, 0.0));
  }
  sys.b = sys.rhs;

  for (int c = 0; c < static_cast<int>(sys.columns.size()); ++c) {
    if (sys.ColumnPositiveSum(c) > sys.t + 1e-9 ||
        sys.ColumnNegativeSum(c) < -sys.t - 1e-9) {
      return absl::InternalError(
          absl::StrFormat("column %d breaks the column-sum bound", c));
    }
  }
  return sys;
}

KarpCertificate CheckKarpContract(const RoundingSystem& system,
                                  const std::vector<double>& values) {
  KarpCertificate cert;
  cert.t = system.t;
  std::vector<double> activity(system.num_rows, 0.0);
  for (size_t c = 0; c < system.columns.size(); ++c) {
    const double lo = std::floor(system.z[c] + kSnap);
    const double hi = std::ceil(system.z[c] - kSnap);
    if (values[c] != lo && values[c] != hi) cert.floor_ceil = false;
    for (const auto& [row, coef] : system.columns[c]) {
      activity[row] += coef * values[c];
    }
  }
  cert.max_row_excess = -kInfinity;
  for (int r = 0; r < system.num_rows; ++r) {
    cert.max_row_excess =
        std::max(cert.max_row_excess, activity[r] - system.b[r]);
  }
  if (system.num_rows == 0) cert.max_row_excess = 0.0;
  return cert;
}

absl::StatusOr<KarpResult> KarpRound(const RoundingSystem& system) {
  const int n = static_cast<int>(system.columns.size());
  const int m = system.num_rows;
  for (int c = 0; c < n; ++c) {
    if (system.ColumnPositiveSum(c) > system.t + 1e-9 ||
        system.ColumnNegativeSum(c) < -system.t - 1e-9) {
      return absl::InvalidArgumentError(
          absl::StrFormat("column %d breaks the column-sum bound", c));
    }
  }
  std::vector<double> z = system.z;
  std::vector<double> lo(n), hi(n);
  for (int c = 0; c < n; ++c) {
    lo[c] = std::floor(z[c] + kSnap);
    hi[c] = std::ceil(z[c] - kSnap);
    if (lo[c] >= hi[c]) {
      hi[c] = lo[c];
      z[c] = lo[c];
    }
  }
  // Row-major copy of A.
  std::vector<std::vector<std::pair<int, double>>> rows(m);
  for (int c = 0; c < n; ++c) {
    for (const auto& [row, coef] : system.columns[c])
      rows[row].push_back({c, coef});
  }

  KarpResult result;
  std::vector<uint8_t> released(m, 0);
  while (true) {
    std::vector<int> frac;
    std::vector<int> position(n, -1);
    for (int c = 0; c < n; ++c) {
      if (z[c] > lo[c] && z[c] < hi[c]) {
        position[c] = static_cast<int>(frac.size());
        frac.push_back(c);
      }
    }
    if (frac.empty()) break;
    ++result.iterations;

    // A row is tracked while rounding could still push it up by t or more.
    std::vector<std::pair<double, int>> active;  // (headroom, row)
    for (int r = 0; r < m; ++r) {
      if (released[r]) continue;
      double upper = 0.0;
      for (const auto& [c, coef] : rows[r]) {
        if (position[c] >= 0) {
          upper += coef * (coef > 0 ? hi[c] : lo[c]);
        } else {
          upper += coef * z[c];
        }
      }
      const double headroom = upper - system.b[r];
      if (headroom >= system.t - 1e-9) active.push_back({headroom, r});
    }

    Eigen::VectorXd direction;
    while (true) {
      if (active.empty()) {
        direction = Eigen::VectorXd::Zero(static_cast<int>(frac.size()));
        direction(0) = 1.0;
        break;
      }
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<int>(active.size()),
                                                static_cast<int>(frac.size()));
      for (size_t k = 0; k < active.size(); ++k) {
        for (const auto& [c, coef] : rows[active[k].second]) {
          if (position[c] >= 0) a(static_cast<int>(k), position[c]) = coef;
        }
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      lu.setThreshold(1e-10);
      if (lu.rank() < static_cast<int>(frac.size())) {
        direction = lu.kernel().col(0);
        break;
      }
      // No kernel direction: release the row with the least headroom.
      auto weakest = std::min_element(active.begin(), active.end());
      released[weakest->second] = 1;
      ++result.certificate.dropped_rows;
      active.erase(weakest);
    }
    direction /= direction.cwiseAbs().maxCoeff();

    auto max_step = [&](double sign, int& blocking) {
      double step = kInfinity;
      for (size_t k = 0; k < frac.size(); ++k) {
        const double d = sign * direction(static_cast<int>(k));
        const int c = frac[k];
        double s = kInfinity;
        if (d > 1e-12) s = (hi[c] - z[c]) / d;
        if (d < -1e-12) s = (lo[c] - z[c]) / d;
        if (s < step) {
          step = s;
          blocking = c;
        }
      }
      return step;
    };
    int block_plus = -1, block_minus = -1;
    const double plus = max_step(1.0, block_plus);
    const double minus = max_step(-1.0, block_minus);
    const double sign = plus <= minus ? 1.0 : -1.0;
    const double step = std::min(plus, minus);
    const int blocking = plus <= minus ? block_plus : block_minus;
    if (blocking < 0 || !std::isfinite(step)) {
      return absl::InternalError(
          "dependent rounding found no blocking coordinate");
    }
    for (size_t k = 0; k < frac.size(); ++k) {
      const int c = frac[k];
      z[c] += sign * step * direction(static_cast<int>(k));
      if (z[c] - lo[c] < kSnap) z[c] = lo[c];
      if (hi[c] - z[c] < kSnap) z[c] = hi[c];
    }
    // The blocking coordinate lands on its bound exactly.
    const double d = sign * direction(position[blocking]);
    z[blocking] = d > 0 ? hi[blocking] : lo[blocking];
  }

  result.values = std::move(z);
  const int dropped = result.certificate.dropped_rows;
  result.certificate = CheckKarpContract(system, result.values);
  result.certificate.dropped_rows = dropped;
  if (!result.certificate.ok()) {
    return absl::InternalError(
        absl::StrFormat("rounding contract violated: floor/ceil %s, max row "
                        "excess %.6g vs t = %g",
                        result.certificate.floor_ceil ? "ok" : "broken",
                        result.certificate.max_row_excess, system.t));
  }
  return result;
}

absl::StatusOr<ColorResult> ExtractColoredSolution(
    const LpModel& model, const SemiIntegralSolution& semi,
    const BoxAssignment& boxes, const std::vector<PathVar>& paths,
    const RoundingSystem& system, const KarpResult& rounded) {
  const Instance& inst = model.instance();
  ColorResult out;
  ColorAudit& audit = out.audit;
  audit.certificate = rounded.certificate;

  std::vector<std::vector<int>> chosen(inst.num_sinks());
  std::vector<std::vector<int>> box_hits(inst.num_sinks());
  for (int j = 0; j < inst.num_sinks(); ++j) {
    box_hits[j].assign(boxes.boxes[j].size(), 0);
  }
  for (int c = 0; c < system.num_paths; ++c) {
    if (rounded.values[c] < 1.0) continue;
    const PathVar& p = paths[system.path_index[c]];
    chosen[p.sink].push_back(p.reflector);
    ++box_hits[p.sink][p.box];
  }
  for (std::vector<int>& via : chosen) {
    std::sort(via.begin(), via.end());
    via.erase(std::unique(via.begin(), via.end()), via.end());
  }
  out.paths = PathSetFromRoutes(inst, model.options().mode, std::move(chosen),
                                "approx-color");

  for (int j = 0; j < inst.num_sinks(); ++j) {
    for (size_t b = 0; b < box_hits[j].size(); ++b) {
      if (box_hits[j][b] == 0) audit.boxes_covered = false;
    }
    if (inst.sinks()[j].weight_threshold > 0.0 && out.paths.routes[j].empty()) {
      audit.all_served = false;
    }
    std::map<int, int> per_color;
    for (int i : out.paths.routes[j]) {
      const int color = inst.reflectors()[i].color.value_or(0);
      if (color > 0) {
        audit.max_copies_per_color =
            std::max(audit.max_copies_per_color, ++per_color[color]);
        if (per_color[color] > 13 && audit.violation.empty()) {
          audit.violation =
              absl::StrFormat("sink %s gets %d copies of color %d",
                              inst.sinks()[j].id, per_color[color], color);
        }
      }
    }
  }
  audit.cost = out.paths.cost.total();
  audit.cost_bound = 13.0 * semi.cost;
  if (audit.violation.empty()) {
    if (!audit.certificate.ok()) {
      audit.violation = "rounding certificate invalid";
    } else if (!audit.boxes_covered) {
      audit.violation = "a box lost all of its paths";
    } else if (!audit.all_served) {
      audit.violation = "a sink is not served";
    } else if (audit.cost >
               audit.cost_bound + 1e-9 * std::max(1.0, audit.cost_bound)) {
      audit.violation = absl::StrFormat("cost %.6g exceeds 13 C-bar = %.6g",
                                        audit.cost, audit.cost_bound);
    }
  }
  audit.ok = audit.violation.empty();
  if (!audit.ok) {
    return absl::FailedPreconditionError(
        absl::StrCat("color rounding audit: ", audit.violation));
  }
  return out;
}

nlohmann::json ColorAuditToJson(const ColorAudit& audit) {
  return {{"max_copies_per_color", audit.max_copies_per_color},
          {"all_served", audit.all_served},
          {"boxes_covered", audit.boxes_covered},
          {"cost", audit.cost},
          {"cost_bound", audit.cost_bound},
          {"certificate",
           {{"floor_ceil", audit.certificate.floor_ceil},
            {"max_row_excess", audit.certificate.max_row_excess},
            {"t", audit.certificate.t},
            {"dropped_rows", audit.certificate.dropped_rows}}},
          {"ok", audit.ok},
          {"violation", audit.violation}};
}

}  // namespace overlay
