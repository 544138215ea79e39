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

#include "overlay/min_cost_flow.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "overlay/linear_program.h"
#include "overlay/random.h"
#include "overlay/simplex.h"

namespace overlay {
namespace {

struct Arc {
  int from;
  int to;
  int64_t capacity;
  double cost;
};

// Max flow value and its minimum cost, from two linear programs over the arc
// flows.
std::pair<double, double> LpOracle(int num_nodes, const std::vector<Arc>& arcs,
                                   int source, int sink) {
  auto build = [&](bool min_cost, double fixed_value) {
    LinearProgram lp;
    for (size_t a = 0; a < arcs.size(); ++a) {
      double objective = 0.0;
      if (min_cost) {
        objective = arcs[a].cost;
      } else if (arcs[a].from == source) {
        objective = -1.0;
      } else if (arcs[a].to == source) {
        objective = 1.0;
      }
      lp.AddVariable("f" + std::to_string(a), 0.0,
                     static_cast<double>(arcs[a].capacity), objective);
    }
    for (int v = 0; v < num_nodes; ++v) {
      std::vector<LinearTerm> terms;
      for (size_t a = 0; a < arcs.size(); ++a) {
        if (arcs[a].from == v) terms.push_back({static_cast<int>(a), 1.0});
        if (arcs[a].to == v) terms.push_back({static_cast<int>(a), -1.0});
      }
      if (v == sink) continue;
      const double rhs = (v == source && min_cost) ? fixed_value : 0.0;
      if (v == source && !min_cost) continue;
      lp.AddRow("n" + std::to_string(v), terms, RowSense::kEqual, rhs);
    }
    return lp;
  };
  const LpResult max_flow = SolveLinearProgram(build(false, 0.0));
  EXPECT_EQ(max_flow.status, LpStatus::kOptimal);
  const double value = -max_flow.objective;
  const LpResult min_cost = SolveLinearProgram(build(true, value));
  EXPECT_EQ(min_cost.status, LpStatus::kOptimal);
  return {value, min_cost.objective};
}

TEST(MinCostFlowTest, SingleChain) {
  MinCostFlow flow(3);
  const int a = flow.AddArc(0, 1, 1, 2.0);
  const int b = flow.AddArc(1, 2, 1, 3.0);
  ASSERT_TRUE(flow.Solve(0, 2).ok());
  EXPECT_EQ(flow.flow_value(), 1);
  EXPECT_DOUBLE_EQ(flow.total_cost(), 5.0);
  EXPECT_EQ(flow.Flow(a), 1);
  EXPECT_EQ(flow.Flow(b), 1);
  EXPECT_EQ(flow.Tail(a), 0);
  EXPECT_EQ(flow.Head(b), 2);
  EXPECT_EQ(flow.Capacity(a), 1);
  EXPECT_DOUBLE_EQ(flow.UnitCost(b), 3.0);
}

TEST(MinCostFlowTest, PrefersCheaperParallelPath) {
  MinCostFlow flow(4);
  const int expensive = flow.AddArc(0, 1, 1, 10.0);
  flow.AddArc(1, 3, 1, 0.0);
  const int cheap = flow.AddArc(0, 2, 1, 1.0);
  flow.AddArc(2, 3, 1, 0.0);
  const int out = flow.AddArc(3, 3, 0, 0.0);  // self loop, never used
  ASSERT_TRUE(flow.Solve(0, 3).ok());
  EXPECT_EQ(flow.flow_value(), 2);
  EXPECT_EQ(flow.Flow(cheap), 1);
  EXPECT_EQ(flow.Flow(expensive), 1);
  EXPECT_EQ(flow.Flow(out), 0);
  EXPECT_DOUBLE_EQ(flow.total_cost(), 11.0);
}

TEST(MinCostFlowTest, ReroutesThroughResidualArcs) {
  // The greedy first path 0-1-2-3 blocks both arcs of the optimal pair of
  // paths; the second augmentation must cancel flow on 1->2.
  MinCostFlow flow(4);
  flow.AddArc(0, 1, 1, 1.0);
  flow.AddArc(0, 2, 1, 5.0);
  const int middle = flow.AddArc(1, 2, 1, 1.0);
  flow.AddArc(1, 3, 1, 5.0);
  flow.AddArc(2, 3, 1, 1.0);
  ASSERT_TRUE(flow.Solve(0, 3).ok());
  EXPECT_EQ(flow.flow_value(), 2);
  EXPECT_EQ(flow.Flow(middle), 0);
  EXPECT_DOUBLE_EQ(flow.total_cost(), 12.0);
}

TEST(MinCostFlowTest, MatchesLpOracleOnRandomGraphs) {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = static_cast<int>(rng.UniformInt(4, 12));
    std::vector<Arc> arcs;
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u == v || rng.Uniform01() > 0.35) continue;
        arcs.push_back({u, v, rng.UniformInt(0, 4),
                        static_cast<double>(rng.UniformInt(0, 9))});
      }
    }
    MinCostFlow flow(n);
    for (const Arc& a : arcs) flow.AddArc(a.from, a.to, a.capacity, a.cost);
    ASSERT_TRUE(flow.Solve(0, n - 1).ok());
    const auto [value, cost] = LpOracle(n, arcs, 0, n - 1);
    EXPECT_NEAR(static_cast<double>(flow.flow_value()), value, 1e-6)
        << "trial " << trial;
    EXPECT_NEAR(flow.total_cost(), cost, 1e-6) << "trial " << trial;

    // Capacities and conservation.
    std::vector<int64_t> balance(n, 0);
    for (int a = 0; a < flow.num_arcs(); ++a) {
      EXPECT_GE(flow.Flow(a), 0);
      EXPECT_LE(flow.Flow(a), flow.Capacity(a));
      balance[flow.Tail(a)] -= flow.Flow(a);
      balance[flow.Head(a)] += flow.Flow(a);
    }
    for (int v = 1; v < n - 1; ++v) EXPECT_EQ(balance[v], 0);
    EXPECT_EQ(balance[n - 1], flow.flow_value());
  }
}

}  // namespace
}  // namespace overlay
