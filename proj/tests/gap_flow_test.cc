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

#include <cmath>
#include <memory>
#include <vector>

#include "gtest/gtest.h"
#include "overlay/generator.h"
#include "overlay/linear_program.h"
#include "overlay/lp_model.h"
#include "overlay/rounding.h"
#include "overlay/simplex.h"
#include "test_instances.h"

namespace overlay {
namespace {

using ::overlay::testing::Shared;
using ::overlay::testing::Star;

// Star with distinct path losses, so weights strictly decrease with the
// reflector index. The threshold needs every path, so no weight is clamped.
LpModel StarModel(int paths) {
  std::vector<double> losses;
  std::vector<double> costs;
  double threshold = 1.0;
  for (int i = 0; i < paths; ++i) {
    losses.push_back(0.1 + 0.1 * i);
    costs.push_back(1.0 + i);
    threshold *= losses.back();
  }
  absl::StatusOr<LpModel> model =
      BuildModel(Shared(Star(losses, costs, threshold)), {});
  EXPECT_TRUE(model.ok()) << model.status();
  return *std::move(model);
}

SemiIntegralSolution Semi(const LpModel& model, std::vector<double> x_bar) {
  SemiIntegralSolution semi;
  semi.multiplier = 2.0;
  semi.x_bar = std::move(x_bar);
  semi.z_bar.assign(model.instance().num_reflectors(), 1);
  semi.y_bar.assign(model.feed_vars().size(), 1);
  semi.cost = model.program().Objective(semi.Values(model));
  return semi;
}

double BoxMass(const Box& box) {
  double mass = 0.0;
  for (const BoxFragment& f : box.fragments) mass += f.mass;
  return mass;
}

TEST(BuildBoxesTest, UnitMassFillsTwoBoxes) {
  const LpModel model = StarModel(3);
  absl::StatusOr<BoxAssignment> boxes =
      BuildBoxes(model, Semi(model, {0.4, 0.3, 0.3}));
  ASSERT_TRUE(boxes.ok()) << boxes.status();
  ASSERT_EQ(boxes->boxes[0].size(), 2u);
  EXPECT_EQ(boxes->eliminated[0], 0);
  EXPECT_NEAR(BoxMass(boxes->boxes[0][0]), 0.5, 1e-12);
  EXPECT_NEAR(BoxMass(boxes->boxes[0][1]), 0.5, 1e-12);
  // Route 1 is split: 0.1 in the first box, 0.2 in the second.
  ASSERT_EQ(boxes->boxes[0][0].fragments.size(), 2u);
  EXPECT_EQ(boxes->boxes[0][0].fragments[1].route, 1);
  EXPECT_NEAR(boxes->boxes[0][0].fragments[1].mass, 0.1, 1e-12);
  EXPECT_EQ(boxes->boxes[0][1].fragments[0].route, 1);
  EXPECT_NEAR(boxes->boxes[0][1].fragments[0].mass, 0.2, 1e-12);
}

TEST(BuildBoxesTest, PartialLastBoxIsEliminated) {
  const LpModel model = StarModel(2);
  absl::StatusOr<BoxAssignment> boxes =
      BuildBoxes(model, Semi(model, {0.5, 0.3}));
  ASSERT_TRUE(boxes.ok());
  ASSERT_EQ(boxes->boxes[0].size(), 1u);
  EXPECT_EQ(boxes->eliminated[0], 1);
  EXPECT_EQ(boxes->num_boxes(), 1);
}

TEST(BuildBoxesTest, SingleValueSplitsAcrossBoxes) {
  const LpModel model = StarModel(1);
  absl::StatusOr<BoxAssignment> boxes = BuildBoxes(model, Semi(model, {0.6}));
  ASSERT_TRUE(boxes.ok());
  ASSERT_EQ(boxes->boxes[0].size(), 1u);
  ASSERT_EQ(boxes->boxes[0][0].fragments.size(), 1u);
  EXPECT_NEAR(boxes->boxes[0][0].fragments[0].mass, 0.5, 1e-12);
  EXPECT_EQ(boxes->eliminated[0], 1);
}

TEST(BuildBoxesTest, OrdersByNonIncreasingWeight) {
  const LpModel model = StarModel(4);
  // Give the lightest path the most mass so ordering matters.
  absl::StatusOr<BoxAssignment> boxes =
      BuildBoxes(model, Semi(model, {0.2, 0.3, 0.4, 0.6}));
  ASSERT_TRUE(boxes.ok());
  const std::vector<Box>& b = boxes->boxes[0];
  ASSERT_EQ(b.size(), 3u);
  for (size_t l = 0; l + 1 < b.size(); ++l) {
    EXPECT_GE(b[l].min_weight, b[l + 1].max_weight);
  }
  EXPECT_EQ(b[0].fragments[0].route, 0);
  EXPECT_GT(b[0].max_weight, b[2].min_weight);
}

TEST(BuildBoxesTest, RejectsMassBelowOneHalf) {
  const LpModel model = StarModel(2);
  absl::StatusOr<BoxAssignment> boxes =
      BuildBoxes(model, Semi(model, {0.2, 0.2}));
  EXPECT_EQ(boxes.status().code(), absl::StatusCode::kFailedPrecondition);
}

absl::StatusOr<GapFlowResult> RunGap(const LpModel& model,
                                     const SemiIntegralSolution& semi,
                                     BoxAssignment* boxes_out = nullptr) {
  absl::StatusOr<BoxAssignment> boxes = BuildBoxes(model, semi);
  if (!boxes.ok()) return boxes.status();
  GapFlowGraph graph = BuildGapFlowGraph(model, semi, *boxes);
  if (absl::Status status = SolveGapFlow(graph); !status.ok()) return status;
  if (boxes_out != nullptr) *boxes_out = *boxes;
  return ExtractAndDouble(model, semi, *boxes, graph);
}

TEST(GapFlowTest, SingleBoxCarriesOneHalf) {
  const LpModel model = StarModel(1);
  const SemiIntegralSolution semi = Semi(model, {0.5});
  absl::StatusOr<BoxAssignment> boxes = BuildBoxes(model, semi);
  ASSERT_TRUE(boxes.ok());
  GapFlowGraph graph = BuildGapFlowGraph(model, semi, *boxes);
  ASSERT_TRUE(SolveGapFlow(graph).ok());
  EXPECT_EQ(graph.flow.flow_value(), 1);  // one half in scaled units
  absl::StatusOr<GapFlowResult> result =
      ExtractAndDouble(model, semi, *boxes, graph);
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_EQ(result->x_tilde[0], 0.5);
  // Doubled into a whole path, so the route cost counts once in full.
  ASSERT_EQ(result->paths.routes[0].size(), 1u);
  EXPECT_DOUBLE_EQ(result->audit.flow_cost, 0.5 * 1.0);
  EXPECT_EQ(result->paths.algorithm, "approx");
}

TEST(GapFlowTest, PairFeedingTwoBoxesIsWhole) {
  const LpModel model = StarModel(1);
  absl::StatusOr<GapFlowResult> result = RunGap(model, Semi(model, {1.0}));
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_EQ(result->x_tilde[0], 1.0);
  EXPECT_DOUBLE_EQ(result->audit.flow_cost, 1.0);
  EXPECT_DOUBLE_EQ(result->audit.fragment_cost, 1.0);
}

// Min cost of a maximum flow on the graph's arcs, from an LP.
double LpFlowCost(const MinCostFlow& flow, int source, int sink) {
  LinearProgram lp;
  for (int a = 0; a < flow.num_arcs(); ++a) {
    lp.AddVariable("f" + std::to_string(a), 0.0,
                   static_cast<double>(flow.Capacity(a)), flow.UnitCost(a));
  }
  for (int v = 0; v < flow.num_nodes(); ++v) {
    if (v == sink) continue;
    std::vector<LinearTerm> terms;
    for (int a = 0; a < flow.num_arcs(); ++a) {
      if (flow.Tail(a) == v) terms.push_back({a, 1.0});
      if (flow.Head(a) == v) terms.push_back({a, -1.0});
    }
    lp.AddRow("n", terms, RowSense::kEqual,
              v == source ? static_cast<double>(flow.flow_value()) : 0.0);
  }
  const LpResult result = SolveLinearProgram(lp);
  EXPECT_EQ(result.status, LpStatus::kOptimal);
  return result.objective;
}

TEST(GapFlowTest, RandomInstancesKeepEveryGuarantee) {
  int checked = 0;
  for (uint64_t seed = 1; seed <= 12; ++seed) {
    RandomInstanceOptions options;
    options.sources = 5;
    options.reflectors = 4;
    options.sinks = 8;
    options.seed = seed;
    absl::StatusOr<Instance> instance = GenerateRandom(options);
    ASSERT_TRUE(instance.ok());
    absl::StatusOr<LpModel> model =
        BuildModel(std::make_shared<const Instance>(*std::move(instance)), {});
    ASSERT_TRUE(model.ok());
    const FractionalSolution frac = SolveLp(*model);
    ASSERT_TRUE(frac.ok());
    RoundingConfig config;
    config.multiplier = 3.0;
    config.seed = seed;
    absl::StatusOr<RoundingOutcome> rounded =
        RoundWithRetries(*model, frac, config);
    ASSERT_TRUE(rounded.ok());
    if (!rounded->success) continue;
    const SemiIntegralSolution& semi = rounded->solution;

    absl::StatusOr<BoxAssignment> boxes = BuildBoxes(*model, semi);
    ASSERT_TRUE(boxes.ok()) << boxes.status();
    for (int j = 0; j < model->instance().num_sinks(); ++j) {
      double total = 0.0;
      for (int r : model->routes_of_sink(j)) total += semi.x_bar[r];
      double boxed = 0.0;
      for (const Box& box : boxes->boxes[j]) {
        EXPECT_NEAR(BoxMass(box), 0.5, 1e-9);
        boxed += BoxMass(box);
      }
      // Box count is ceil(2 * mass) less the eliminated partial box.
      const int expected =
          static_cast<int>(std::ceil(2 * total - 1e-9)) - boxes->eliminated[j];
      EXPECT_EQ(static_cast<int>(boxes->boxes[j].size()), expected);
      EXPECT_LE(boxed, total + 1e-9);
      EXPECT_GT(boxed + 0.5, total - 1e-9);
    }

    GapFlowGraph graph = BuildGapFlowGraph(*model, semi, *boxes);
    ASSERT_TRUE(SolveGapFlow(graph).ok());
    EXPECT_EQ(graph.flow.flow_value(), boxes->num_boxes());
    EXPECT_NEAR(graph.flow.total_cost(),
                LpFlowCost(graph.flow, graph.source, graph.terminal), 1e-6);

    absl::StatusOr<GapFlowResult> result =
        ExtractAndDouble(*model, semi, *boxes, graph);
    ASSERT_TRUE(result.ok()) << result.status();
    for (double v : result->x_tilde) {
      EXPECT_TRUE(v == 0.0 || v == 0.5 || v == 1.0) << v;
    }
    EXPECT_TRUE(result->audit.half_integral);
    EXPECT_LE(result->audit.max_fanout_ratio, 4.0);
    EXPECT_GE(result->audit.min_weight_ratio, 0.25 - 1e-9);
    EXPECT_LE(result->audit.cost, 2 * semi.cost + 1e-9);
    EXPECT_LE(result->audit.flow_cost, result->audit.fragment_cost + 1e-9);
    ++checked;
  }
  EXPECT_GE(checked, 8);
}

TEST(GapAuditTest, JsonCarriesVerdict) {
  GapAudit audit;
  audit.ok = true;
  audit.cost = 3.0;
  const nlohmann::json doc = GapAuditToJson(audit);
  EXPECT_EQ(doc["ok"], true);
  EXPECT_EQ(doc["cost"], 3.0);
  EXPECT_EQ(doc["violation"], "");
}

}  // namespace
}  // namespace overlay
