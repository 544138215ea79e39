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

#include <cmath>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "gtest/gtest.h"
#include "overlay/gap_flow.h"
#include "overlay/generator.h"
#include "overlay/linear_program.h"
#include "overlay/lp_model.h"
#include "overlay/random.h"
#include "overlay/rounding.h"
#include "overlay/verify.h"
#include "test_instances.h"

namespace overlay {
namespace {

using ::overlay::testing::Shared;
using ::overlay::testing::Star;

// Row activities minus b, computed without the library.
std::vector<double> RowExcess(const RoundingSystem& system,
                              const std::vector<double>& values) {
  std::vector<double> excess(system.num_rows, 0.0);
  for (size_t c = 0; c < system.columns.size(); ++c) {
    for (const auto& [row, coef] : system.columns[c]) {
      excess[row] += coef * values[c];
    }
  }
  for (int r = 0; r < system.num_rows; ++r) excess[r] -= system.b[r];
  return excess;
}

bool SatisfiesContract(const RoundingSystem& system,
                       const std::vector<double>& values) {
  for (size_t c = 0; c < values.size(); ++c) {
    if (values[c] != std::floor(system.z[c] + 1e-10) &&
        values[c] != std::ceil(system.z[c] - 1e-10)) {
      return false;
    }
  }
  for (double e : RowExcess(system, values)) {
    if (e >= system.t - 1e-9) return false;
  }
  return true;
}

RoundingSystem OneRowTwoColumns() {
  RoundingSystem system;
  system.num_rows = 1;
  system.num_paths = 2;
  system.columns = {{{0, 1.0}}, {{0, 1.0}}};
  system.z = {0.5, 0.5};
  system.b = {1.0};
  system.rhs = system.b;
  system.t = 1.0;
  return system;
}

TEST(KarpRoundTest, OneRowTwoColumnsMatchesEnumeration) {
  const RoundingSystem system = OneRowTwoColumns();
  absl::StatusOr<KarpResult> result = KarpRound(system);
  ASSERT_TRUE(result.ok()) << result.status();
  // With A = [1 1] and z = (1/2, 1/2) the row must end below 1 + t = 2, so
  // (1, 1) is excluded. The kernel direction moves one coordinate up and the
  // other down.
  const std::vector<double>& v = result->values;
  EXPECT_EQ(v[0] + v[1], 1.0);
  EXPECT_TRUE(SatisfiesContract(system, v));
  for (int mask = 0; mask < 4; ++mask) {
    const std::vector<double> candidate = {double(mask & 1),
                                           double((mask >> 1) & 1)};
    EXPECT_EQ(CheckKarpContract(system, candidate).ok(),
              SatisfiesContract(system, candidate))
        << mask;
  }
  EXPECT_FALSE(CheckKarpContract(system, {1.0, 1.0}).ok());
}

TEST(KarpRoundTest, IntegralInputIsReturnedUnchanged) {
  RoundingSystem system = OneRowTwoColumns();
  system.z = {1.0, 0.0};
  absl::StatusOr<KarpResult> result = KarpRound(system);
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_EQ(result->values, (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(result->iterations, 0);
}

TEST(KarpRoundTest, RejectsColumnsOverTheBound) {
  RoundingSystem system;
  system.num_rows = 2;
  system.columns = {{{0, 5.0}, {1, 5.0}}};
  system.z = {0.5};
  system.b = {2.5, 2.5};
  system.t = 9.0;
  EXPECT_EQ(KarpRound(system).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(KarpRoundTest, RandomSystemsMeetTheContract) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    RoundingSystem system;
    system.t = 9.0;
    system.num_rows = 2 + static_cast<int>(rng.UniformInt(0, 6));
    const int columns = 1 + static_cast<int>(rng.UniformInt(0, 11));
    for (int c = 0; c < columns; ++c) {
      std::vector<std::pair<int, double>> column;
      double positive = rng.Uniform01() * system.t;
      double negative = rng.Uniform01() * system.t;
      for (int r = 0; r < system.num_rows; ++r) {
        if (rng.Uniform01() < 0.5) continue;
        const double share = rng.Uniform01();
        if (rng.Uniform01() < 0.7) {
          column.push_back({r, share * positive});
          positive -= share * positive;
        } else {
          column.push_back({r, -share * negative});
          negative -= share * negative;
        }
      }
      system.columns.push_back(std::move(column));
      system.z.push_back(rng.Uniform01() < 0.2 ? std::floor(3 * rng.Uniform01())
                                               : 3 * rng.Uniform01());
    }
    system.num_paths = columns;
    system.b.assign(system.num_rows, 0.0);
    for (int c = 0; c < columns; ++c) {
      for (const auto& [row, coef] : system.columns[c]) {
        system.b[row] += coef * system.z[c];
      }
    }
    system.rhs = system.b;
    absl::StatusOr<KarpResult> result = KarpRound(system);
    ASSERT_TRUE(result.ok()) << "trial " << trial << ": " << result.status();
    EXPECT_TRUE(SatisfiesContract(system, result->values)) << trial;
    const KarpCertificate cert = CheckKarpContract(system, result->values);
    EXPECT_TRUE(cert.ok());
    double worst = -kInfinity;
    for (double e : RowExcess(system, result->values)) {
      worst = std::max(worst, e);
    }
    EXPECT_NEAR(cert.max_row_excess, worst, 1e-9);
  }
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

// Three paths; path 0 has the best weight and second-hop cost `cost0`.
LpModel ExpensiveStar(double cost0) {
  RawInstance raw = Star({0.1, 0.2, 0.3}, {1.0, 1.0, 1.0}, 0.1 * 0.2 * 0.3);
  raw.refl_edges[0].cost = cost0;
  absl::StatusOr<LpModel> model = BuildModel(Shared(raw), {});
  EXPECT_TRUE(model.ok()) << model.status();
  return *std::move(model);
}

struct Stage {
  BoxAssignment boxes;
  GapFlowGraph graph;
  std::vector<double> flow;
  std::vector<PathVar> paths;
  double flow_cost = 0.0;
};

Stage Enumerate(const LpModel& model, const SemiIntegralSolution& semi) {
  Stage s;
  absl::StatusOr<BoxAssignment> boxes = BuildBoxes(model, semi);
  EXPECT_TRUE(boxes.ok()) << boxes.status();
  s.boxes = *std::move(boxes);
  s.graph = BuildGapFlowGraph(model, semi, s.boxes);
  s.flow = FragmentFlow(s.graph, s.boxes);
  absl::StatusOr<std::vector<PathVar>> paths =
      EnumeratePaths(model, s.graph, s.flow);
  EXPECT_TRUE(paths.ok()) << paths.status();
  s.paths = *std::move(paths);
  for (const PathVar& p : s.paths) s.flow_cost += p.cost * p.pi_bar;
  return s;
}

TEST(FilterAndScaleTest, DropsPathsAboveFourTimesTheFlowCost) {
  // Boxes: {r0 0.1, r1 0.4} and {r1 0.05, r2 0.45}. The flow costs
  // 0.1 * 100 + 0.9 * 1 = 10.9, so the 100-cost path exceeds 4C.
  const LpModel model = ExpensiveStar(100.0);
  const Stage s = Enumerate(model, Semi(model, {0.1, 0.45, 0.45}));
  EXPECT_NEAR(s.flow_cost, 10.9, 1e-9);
  absl::StatusOr<RoundingSystem> system =
      FilterAndScale(model, s.graph, s.boxes, s.paths, s.flow_cost);
  ASSERT_TRUE(system.ok()) << system.status();
  EXPECT_NEAR(system->filtered_mass, 0.1, 1e-12);
  EXPECT_EQ(system->num_paths, static_cast<int>(s.paths.size()) - 1);
  for (int c = 0; c < system->num_paths; ++c) {
    EXPECT_LE(s.paths[system->path_index[c]].cost, 4 * s.flow_cost);
  }
}

TEST(FilterAndScaleTest, KeepsPathsWithinFourTimesTheFlowCost) {
  // 0.1 * 5 + 0.9 * 1 = 1.4 and 4C = 5.6 >= 5.
  const LpModel model = ExpensiveStar(5.0);
  const Stage s = Enumerate(model, Semi(model, {0.1, 0.45, 0.45}));
  absl::StatusOr<RoundingSystem> system =
      FilterAndScale(model, s.graph, s.boxes, s.paths, s.flow_cost);
  ASSERT_TRUE(system.ok()) << system.status();
  EXPECT_EQ(system->filtered_mass, 0.0);
  EXPECT_EQ(system->num_paths, static_cast<int>(s.paths.size()));
}

TEST(FilterAndScaleTest, RejectsScaleBelowTheFlowCost) {
  const LpModel model = ExpensiveStar(10.0);
  const Stage s = Enumerate(model, Semi(model, {0.1, 0.45, 0.45}));
  EXPECT_EQ(FilterAndScale(model, s.graph, s.boxes, s.paths, 0.5 * s.flow_cost)
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(FilterAndScaleTest, ReportsDrawsThatOverloadAColor) {
  // Three same-colored routes at 1/2 fill three whole boxes, which puts 1.5
  // copies on the color row.
  RawInstance raw = Star({0.1, 0.1, 0.1}, {1.0, 1.0, 1.0}, 0.001);
  raw.colors_enabled = true;
  for (RawReflector& r : raw.reflectors) r.color = 1;
  ModeOptions mode;
  mode.colors = true;
  absl::StatusOr<LpModel> model = BuildModel(Shared(raw), mode);
  ASSERT_TRUE(model.ok()) << model.status();
  const Stage s = Enumerate(*model, Semi(*model, {0.5, 0.5, 0.5}));
  const absl::Status status =
      FilterAndScale(*model, s.graph, s.boxes, s.paths, s.flow_cost).status();
  EXPECT_EQ(status.code(), absl::StatusCode::kFailedPrecondition) << status;
  EXPECT_NE(status.message().find("color_d_1"), std::string::npos) << status;
}

// Accepted draws on random colored instances.
class ColorStagesTest : public ::testing::TestWithParam<int> {};

TEST_P(ColorStagesTest, EveryStageKeepsItsInvariants) {
  const int seed = GetParam();
  RandomInstanceOptions options;
  options.sources = 2;
  options.reflectors = 5;
  options.sinks = 6;
  options.colors = 2;
  options.seed = 300 + seed;
  absl::StatusOr<Instance> generated = GenerateRandom(options);
  ASSERT_TRUE(generated.ok()) << generated.status();
  auto instance = std::make_shared<const Instance>(*std::move(generated));
  ModeOptions mode;
  mode.colors = true;
  absl::StatusOr<LpModel> model = BuildModel(instance, mode);
  ASSERT_TRUE(model.ok()) << model.status();
  const FractionalSolution frac = SolveLp(*model);
  ASSERT_TRUE(frac.ok()) << frac.message;
  RoundingConfig config;
  config.multiplier = 4.0;
  config.seed = seed;
  // First draw that passes the rounding check and fits every color row, as
  // the pipeline's retry loop would pick.
  SemiIntegralSolution semi;
  Stage s;
  absl::StatusOr<RoundingSystem> system;
  for (int attempt = 0;; ++attempt) {
    ASSERT_LT(attempt, 200);
    absl::StatusOr<SemiIntegralSolution> draw =
        RandomizedRound(*model, frac, config, attempt);
    ASSERT_TRUE(draw.ok()) << draw.status();
    if (!CheckRounding(*model, *draw, config.delta).ok()) continue;
    semi = *std::move(draw);
    s = Enumerate(*model, semi);
    system = FilterAndScale(*model, s.graph, s.boxes, s.paths, s.flow_cost);
    if (system.ok()) break;
    ASSERT_EQ(system.status().code(), absl::StatusCode::kFailedPrecondition)
        << system.status();
  }

  // Decomposition: at most one path per pair -> box arc, box masses kept,
  // and the path cost equals the arc cost of the flow.
  EXPECT_LE(s.paths.size(), s.graph.fragment_arcs.size());
  std::map<std::pair<int, int>, double> box_mass;
  for (const PathVar& p : s.paths) box_mass[{p.sink, p.box}] += p.pi_bar;
  for (int j = 0; j < instance->num_sinks(); ++j) {
    for (size_t b = 0; b < s.boxes.boxes[j].size(); ++b) {
      EXPECT_NEAR((box_mass[{j, static_cast<int>(b)}]), 0.5, 1e-9);
    }
  }
  double arc_cost = 0.0;
  for (int a = 0; a < s.graph.flow.num_arcs(); ++a) {
    arc_cost += s.flow[a] * s.graph.flow.UnitCost(a);
  }
  EXPECT_NEAR(s.flow_cost, arc_cost, 1e-9 * std::max(1.0, arc_cost));

  for (size_t c = 0; c < system->columns.size(); ++c) {
    double positive = 0.0;
    double negative = 0.0;
    for (const auto& [row, coef] : system->columns[c]) {
      (coef > 0 ? positive : negative) += coef;
    }
    EXPECT_LE(positive, 9.0 + 1e-9);
    EXPECT_GE(negative, -9.0 - 1e-9);
  }
  for (int c = 0; c < system->num_paths; ++c) {
    EXPECT_DOUBLE_EQ(system->z[c], 4 * s.paths[system->path_index[c]].pi_bar);
  }
  for (double e : RowExcess(*system, system->z)) EXPECT_NEAR(e, 0.0, 1e-7);

  absl::StatusOr<KarpResult> rounded = KarpRound(*system);
  ASSERT_TRUE(rounded.ok()) << rounded.status();
  EXPECT_TRUE(SatisfiesContract(*system, rounded->values));

  absl::StatusOr<ColorResult> colored =
      ExtractColoredSolution(*model, semi, s.boxes, s.paths, *system, *rounded);
  ASSERT_TRUE(colored.ok()) << colored.status();
  const ColorAudit& audit = colored->audit;
  EXPECT_TRUE(audit.ok) << audit.violation;
  EXPECT_TRUE(audit.all_served);
  EXPECT_TRUE(audit.boxes_covered);
  EXPECT_LE(audit.max_copies_per_color, 13);
  EXPECT_LE(audit.cost, 13 * semi.cost + 1e-6);
  absl::StatusOr<AuditReport> report =
      Audit(*instance, colored->paths, GuaranteeProfile::kColor);
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_TRUE(report->passed());
}

INSTANTIATE_TEST_SUITE_P(Seeds, ColorStagesTest, ::testing::Range(0, 8));

TEST(ColorAuditJsonTest, CarriesTheCertificate) {
  ColorAudit audit;
  audit.max_copies_per_color = 3;
  audit.certificate.max_row_excess = 4.5;
  audit.certificate.t = 9.0;
  audit.ok = true;
  const nlohmann::json j = ColorAuditToJson(audit);
  EXPECT_EQ(j["max_copies_per_color"], 3);
  EXPECT_EQ(j["certificate"]["max_row_excess"], 4.5);
  EXPECT_EQ(j["certificate"]["t"], 9.0);
  EXPECT_EQ(j["ok"], true);
}

}  // namespace
}  // namespace overlay
