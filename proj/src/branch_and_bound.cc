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

#include "overlay/branch_and_bound.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <utility>

#include "absl/strings/str_cat.h"
#include "overlay/simplex.h"

namespace overlay {
namespace {

using Clock = std::chrono::steady_clock;

struct Fixing {
  int var;
  double lower;
  double upper;
};

struct Node {
  double bound;
  int64_t id;
  std::vector<Fixing> fixings;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

// Rounds integer variables; returns false when some value is not integral.
bool RoundIntegral(const LinearProgram& lp, double tolerance,
                   std::vector<double>& values) {
  for (int v = 0; v < lp.num_variables(); ++v) {
    if (!lp.variable(v).integer) continue;
    const double r = std::round(values[v]);
    if (std::abs(values[v] - r) > tolerance) return false;
    values[v] = r;
  }
  return true;
}

}  // namespace

const char* ProvenanceName(Provenance provenance) {
  switch (provenance) {
    case Provenance::kExactIp:
      return "exact-ip";
    case Provenance::kApprox:
      return "approx";
    case Provenance::kApproxHack:
      return "approxhack";
  }
  return "unknown";
}

MipResult SolveMip(const LinearProgram& lp, const MipOptions& options) {
  constexpr double kFeasibility = 1e-6;
  MipResult result;
  std::optional<Clock::time_point> deadline;
  if (options.budget.seconds.has_value()) {
    deadline = Clock::now() +
               std::chrono::duration_cast<Clock::duration>(
                   std::chrono::duration<double>(*options.budget.seconds));
  }
  SimplexOptions simplex_options;
  simplex_options.deadline = deadline;

  double incumbent_value = kInfinity;
  if (options.incumbent.has_value() &&
      static_cast<int>(options.incumbent->size()) == lp.num_variables()) {
    std::vector<double> start = *options.incumbent;
    if (RoundIntegral(lp, options.integrality_tolerance, start) &&
        lp.MaxViolation(start) <= kFeasibility) {
      incumbent_value = lp.Objective(start);
      result.values = std::move(start);
    }
  }
  auto prune_level = [&] {
    return incumbent_value -
           options.gap_tolerance * std::max(1.0, std::abs(incumbent_value));
  };

  LinearProgram work = lp;
  auto solve_with = [&](const std::vector<Fixing>& fixings) {
    for (const Fixing& f : fixings) work.SetBounds(f.var, f.lower, f.upper);
    LpResult relax = SolveLinearProgram(work, simplex_options);
    for (const Fixing& f : fixings) {
      work.SetBounds(f.var, lp.variable(f.var).lower, lp.variable(f.var).upper);
    }
    return relax;
  };
  auto offer = [&](std::vector<double> candidate) {
    RoundIntegral(lp, options.integrality_tolerance, candidate);
    if (lp.MaxViolation(candidate) > kFeasibility) return;
    const double value = lp.Objective(candidate);
    if (value < incumbent_value) {
      incumbent_value = value;
      result.values = std::move(candidate);
    }
  };
  auto bounds_of = [&](const std::vector<Fixing>& fixings, int var) {
    std::pair<double, double> b{lp.variable(var).lower, lp.variable(var).upper};
    for (const Fixing& f : fixings) {
      if (f.var == var) b = {f.lower, f.upper};
    }
    return b;
  };
  // Primal heuristic: repeatedly push the largest fractional value up (or,
  // if that is infeasible, down) and re-solve until integral or stuck.
  auto dive = [&](std::vector<Fixing> fixings, LpResult relax) {
    for (int step = 0; step < lp.num_variables(); ++step) {
      if (deadline.has_value() && Clock::now() >= *deadline) return;
      int var = -1;
      double best = -1.0;
      for (int v = 0; v < lp.num_variables(); ++v) {
        if (!lp.variable(v).integer) continue;
        const double frac = relax.values[v] - std::floor(relax.values[v]);
        if (frac <= options.integrality_tolerance ||
            frac >= 1.0 - options.integrality_tolerance) {
          continue;
        }
        if (frac > best) {
          best = frac;
          var = v;
        }
      }
      if (var < 0) {
        offer(relax.values);
        return;
      }
      const auto [lower, upper] = bounds_of(fixings, var);
      const double x = relax.values[var];
      fixings.push_back({var, std::ceil(x), upper});
      relax = solve_with(fixings);
      if (relax.status != LpStatus::kOptimal) {
        fixings.back() = {var, lower, std::floor(x)};
        relax = solve_with(fixings);
      }
      if (relax.status != LpStatus::kOptimal ||
          relax.objective >= prune_level()) {
        return;
      }
    }
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  int64_t next_id = 0;
  open.push({-kInfinity, next_id++, {}});
  bool stopped = false;
  bool root = true;
  constexpr int64_t kDiveInterval = 200;

  while (!open.empty()) {
    if (result.nodes >= options.budget.node_limit ||
        (deadline.has_value() && Clock::now() >= *deadline)) {
      stopped = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (node.bound >= prune_level()) continue;
    ++result.nodes;

    const LpResult relax = solve_with(node.fixings);
    if (relax.status == LpStatus::kTimeLimit ||
        relax.status == LpStatus::kIterationLimit) {
      open.push(std::move(node));
      stopped = true;
      break;
    }
    if (relax.status == LpStatus::kUnbounded) {
      result.status = SolveStatus::kError;
      result.message = "relaxation unbounded";
      return result;
    }
    if (relax.status == LpStatus::kInfeasible) {
      if (root) result.infeasible_rows = relax.infeasible_rows;
      root = false;
      continue;
    }
    root = false;
    if (relax.objective >= prune_level()) continue;

    int branch_var = -1;
    double best_distance = 1.0;
    for (int v = 0; v < lp.num_variables(); ++v) {
      if (!lp.variable(v).integer) continue;
      const double frac = relax.values[v] - std::floor(relax.values[v]);
      if (frac <= options.integrality_tolerance ||
          frac >= 1.0 - options.integrality_tolerance) {
        continue;
      }
      const double distance = std::abs(frac - 0.5);
      if (distance < best_distance) {
        best_distance = distance;
        branch_var = v;
      }
    }

    if (branch_var < 0) {
      offer(relax.values);
      continue;
    }

    // Rounding every fractional integer variable up is often feasible for
    // covering rows and costs nothing to try.
    std::vector<double> rounded = relax.values;
    for (int v = 0; v < lp.num_variables(); ++v) {
      if (lp.variable(v).integer) {
        rounded[v] = std::ceil(rounded[v] - options.integrality_tolerance);
      }
    }
    offer(std::move(rounded));
    if (!result.has_solution() && (result.nodes - 1) % kDiveInterval == 0) {
      dive(node.fixings, relax);
    }

    const double x = relax.values[branch_var];
    const auto [lower, upper] = bounds_of(node.fixings, branch_var);
    Node down{relax.objective, next_id++, node.fixings};
    down.fixings.push_back({branch_var, lower, std::floor(x)});
    Node up{relax.objective, next_id++, std::move(node.fixings)};
    up.fixings.push_back({branch_var, std::ceil(x), upper});
    open.push(std::move(down));
    open.push(std::move(up));
  }

  double open_bound = kInfinity;
  if (stopped) {
    while (!open.empty()) {
      open_bound = std::min(open_bound, open.top().bound);
      open.pop();
    }
  }
  result.objective = incumbent_value;
  result.bound = std::min(open_bound, incumbent_value);
  if (stopped) {
    result.status = SolveStatus::kTimeout;
    result.message = absl::StrCat("stopped after ", result.nodes, " nodes");
  } else if (result.has_solution()) {
    result.status = SolveStatus::kOptimal;
  } else {
    result.status = SolveStatus::kInfeasible;
    result.message = "no integral point satisfies all rows";
  }
  return result;
}

namespace {

LinearProgram IntegerCopy(const LpModel& model) {
  const LinearProgram& lp = model.program();
  LinearProgram out;
  for (const Variable& v : lp.variables()) {
    out.AddVariable(v.name, v.lower, v.upper, v.objective, /*integer=*/true);
  }
  for (const LinearRow& row : lp.rows()) {
    out.AddRow(row.name, row.terms, row.sense, row.rhs);
  }
  return out;
}

IntegralSolution FromMip(const LpModel& model, MipResult mip,
                         Provenance provenance) {
  IntegralSolution out;
  out.status = mip.status;
  out.provenance = provenance;
  out.nodes = mip.nodes;
  out.message = mip.message;
  out.bound = mip.bound;
  if (mip.has_solution()) {
    out.values = std::move(mip.values);
    out.objective = mip.objective;
  }
  if (mip.status == SolveStatus::kInfeasible) {
    InfeasibilityCertificate cert;
    if (std::optional<InfeasibilityCertificate> sinks =
            CheckSinkFeasibility(model);
        sinks.has_value()) {
      cert = *sinks;
    }
    for (int row : mip.infeasible_rows) {
      cert.rows.push_back(model.program().row(row).name);
    }
    if (cert.sinks.empty() && cert.rows.empty()) {
      cert.rows.push_back("(integrality)");
    }
    out.certificate = std::move(cert);
  }
  return out;
}

}  // namespace

IntegralSolution SolveIp(const LpModel& model, const TimeBudget& budget,
                         const std::optional<std::vector<double>>& incumbent) {
  MipOptions options;
  options.budget = budget;
  options.incumbent = incumbent;
  return FromMip(model, SolveMip(IntegerCopy(model), options),
                 Provenance::kExactIp);
}

IntegralSolution ApproxHack(const LpModel& model,
                            const FractionalSolution& frac,
                            const TimeBudget& budget) {
  constexpr double kFixTolerance = 1e-7;
  IntegralSolution out;
  out.provenance = Provenance::kApproxHack;
  if (!frac.ok()) {
    out.status = frac.status;
    out.certificate = frac.certificate;
    out.message = "relaxation not solved";
    return out;
  }
  LinearProgram lp = IntegerCopy(model);
  int fixed = 0;
  for (int v = 0; v < lp.num_variables(); ++v) {
    const double value = frac.values[v];
    if (std::abs(value) < kFixTolerance) {
      lp.SetBounds(v, 0.0, 0.0);
      ++fixed;
    } else if (std::abs(value - 1.0) < kFixTolerance) {
      lp.SetBounds(v, 1.0, 1.0);
      ++fixed;
    }
  }
  if (fixed == lp.num_variables()) {
    out.status = SolveStatus::kOptimal;
    out.values = frac.values;
    for (double& v : out.values) v = std::round(v);
    out.objective = model.program().Objective(out.values);
    out.bound = out.objective;
    out.fixed_variables = fixed;
    return out;
  }
  MipOptions options;
  options.budget = budget;
  out = FromMip(model, SolveMip(lp, options), Provenance::kApproxHack);
  out.fixed_variables = fixed;
  if (out.status == SolveStatus::kInfeasible) {
    out.fallback = true;
    out.certificate.reset();
    out.message = "fixing the integral LP values leaves no feasible completion";
  }
  return out;
}

}  // namespace overlay
