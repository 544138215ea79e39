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

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "gtest/gtest.h"
#include "overlay/generator.h"
#include "overlay/lp_model.h"
#include "overlay/random.h"
#include "test_instances.h"

namespace overlay {
namespace {

using ::overlay::testing::Reflector;
using ::overlay::testing::Shared;
using ::overlay::testing::Sink;
using ::overlay::testing::Source;

// Exhaustive minimum over 0/1 points; +inf when none is feasible.
double Enumerate(const LinearProgram& lp) {
  const int n = lp.num_variables();
  double best = kInfinity;
  std::vector<double> x(n);
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (int v = 0; v < n; ++v) x[v] = (mask >> v) & 1;
    if (lp.MaxViolation(x) <= 1e-9) best = std::min(best, lp.Objective(x));
  }
  return best;
}

TEST(SolveMipTest, MatchesEnumerationOnRandomCoveringPrograms) {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    LinearProgram lp;
    const int n = 8;
    for (int v = 0; v < n; ++v) {
      lp.AddVariable("v" + std::to_string(v), 0, 1, rng.Uniform(1, 10), true);
    }
    for (int r = 0; r < 5; ++r) {
      std::vector<LinearTerm> terms;
      for (int v = 0; v < n; ++v) {
        if (rng.Uniform01() < 0.5) terms.push_back({v, rng.Uniform(0.5, 3)});
      }
      const RowSense sense =
          r < 3 ? RowSense::kGreaterEqual : RowSense::kLessEqual;
      lp.AddRow("r" + std::to_string(r), terms, sense, rng.Uniform(1, 4));
    }
    const double oracle = Enumerate(lp);
    const MipResult mip = SolveMip(lp);
    if (std::isinf(oracle)) {
      EXPECT_EQ(mip.status, SolveStatus::kInfeasible) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(mip.status, SolveStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(mip.objective, oracle, 1e-9) << "trial " << trial;
    EXPECT_LE(lp.MaxViolation(mip.values), 1e-6);
    EXPECT_NEAR(mip.bound, mip.objective, 1e-6);
  }
}

LpModel MustBuild(absl::StatusOr<Instance> instance) {
  EXPECT_TRUE(instance.ok()) << instance.status();
  absl::StatusOr<LpModel> model =
      BuildModel(std::make_shared<const Instance>(*std::move(instance)), {});
  EXPECT_TRUE(model.ok()) << model.status();
  return *std::move(model);
}

TEST(SolveIpTest, SetCoverOptimumIsTwo) {
  const LpModel model = MustBuild(GenerateSetCover(3, {{1, 2}, {2, 3}, {3}}));
  const IntegralSolution ip = SolveIp(model, {});
  ASSERT_EQ(ip.status, SolveStatus::kOptimal) << ip.message;
  EXPECT_EQ(ip.provenance, Provenance::kExactIp);
  // Enumerating the 2^3 reflector subsets: {1,2} and {2,3} alone cover.
  EXPECT_DOUBLE_EQ(ip.objective, 2.0);
  EXPECT_LE(model.program().MaxViolation(ip.values), 1e-9);
  for (double v : ip.values) EXPECT_TRUE(v == 0.0 || v == 1.0);
}

TEST(SolveIpTest, FanoutPigeonholeIsInfeasible) {
  RawInstance raw;
  raw.sources.push_back(Source("s"));
  raw.reflectors.push_back(Reflector("r", 1.0, 1));
  raw.sinks.push_back(Sink("d1", "s", 0.5));
  raw.sinks.push_back(Sink("d2", "s", 0.5));
  raw.src_edges = {{"s", "r", 0.0, 1.0}};
  raw.refl_edges = {{"r", "d1", 0.5, 1.0}, {"r", "d2", 0.5, 1.0}};
  absl::StatusOr<LpModel> model = BuildModel(Shared(raw), {});
  ASSERT_TRUE(model.ok()) << model.status();
  const IntegralSolution ip = SolveIp(*model, {});
  EXPECT_EQ(ip.status, SolveStatus::kInfeasible);
  EXPECT_FALSE(ip.has_solution());
  ASSERT_TRUE(ip.certificate.has_value());
  EXPECT_FALSE(ip.certificate->rows.empty());
}

TEST(SolveIpTest, IgnoresInfeasibleIncumbent) {
  const LpModel model = MustBuild(GenerateSetCover(3, {{1, 2}, {2, 3}, {3}}));
  const std::vector<double> zeros(model.program().num_variables(), 0.0);
  const IntegralSolution ip = SolveIp(model, {}, zeros);
  ASSERT_EQ(ip.status, SolveStatus::kOptimal);
  EXPECT_DOUBLE_EQ(ip.objective, 2.0);
}

TEST(SolveIpTest, NodeLimitReportsTimeoutWithBound) {
  RandomInstanceOptions options;
  options.seed = 4;
  const LpModel model = MustBuild(GenerateRandom(options));
  TimeBudget budget;
  budget.node_limit = 3;
  const IntegralSolution ip = SolveIp(model, budget);
  ASSERT_EQ(ip.status, SolveStatus::kTimeout);
  EXPECT_LE(ip.nodes, 3);
  const FractionalSolution frac = SolveLp(model);
  EXPECT_GE(ip.bound, frac.objective - 1e-6);
  if (ip.has_solution()) {
    EXPECT_LE(ip.bound, ip.objective + 1e-9);
    EXPECT_LE(model.program().MaxViolation(ip.values), 1e-6);
  }
}

TEST(SolveIpTest, NeverWorseThanFeasibleAlternatives) {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    RandomInstanceOptions options;
    options.sources = 1;
    options.reflectors = 3;
    options.sinks = 4;
    options.seed = seed;
    const LpModel model = MustBuild(GenerateRandom(options));
    const IntegralSolution ip = SolveIp(model, {});
    ASSERT_EQ(ip.status, SolveStatus::kOptimal);
    EXPECT_NEAR(ip.objective, Enumerate(model.program()), 1e-9);
  }
}

TEST(ApproxHackTest, IntegralRelaxationIsReturnedUnchanged) {
  RawInstance raw;
  raw.sources.push_back(Source("s"));
  raw.reflectors.push_back(Reflector("r", 5.0, 1));
  raw.sinks.push_back(Sink("d", "s", 0.5));
  raw.src_edges = {{"s", "r", 0.5, 1.0}};
  raw.refl_edges = {{"r", "d", 0.0, 1.0}};
  absl::StatusOr<LpModel> model = BuildModel(Shared(raw), {});
  ASSERT_TRUE(model.ok());
  const FractionalSolution frac = SolveLp(*model);
  ASSERT_TRUE(frac.ok());
  const IntegralSolution hack = ApproxHack(*model, frac, {});
  ASSERT_EQ(hack.status, SolveStatus::kOptimal);
  EXPECT_EQ(hack.provenance, Provenance::kApproxHack);
  EXPECT_EQ(hack.values, frac.values);
  EXPECT_EQ(hack.nodes, 0);
  EXPECT_EQ(hack.fixed_variables, 3);
  EXPECT_DOUBLE_EQ(hack.objective, 7.0);
}

TEST(ApproxHackTest, FullyFractionalInputMatchesTheIp) {
  const LpModel model = MustBuild(GenerateSetCover(3, {{1, 2}, {2, 3}, {3}}));
  FractionalSolution frac;
  frac.status = SolveStatus::kOptimal;
  frac.values.assign(model.program().num_variables(), 0.5);
  const IntegralSolution hack = ApproxHack(model, frac, {});
  ASSERT_EQ(hack.status, SolveStatus::kOptimal);
  EXPECT_EQ(hack.fixed_variables, 0);
  EXPECT_DOUBLE_EQ(hack.objective, SolveIp(model, {}).objective);
}

TEST(ApproxHackTest, BoundedBelowByTheIp) {
  for (uint64_t seed = 1; seed <= 8; ++seed) {
    RandomInstanceOptions options;
    options.sources = 2;
    options.reflectors = 3;
    options.sinks = 4;
    options.seed = seed;
    const LpModel model = MustBuild(GenerateRandom(options));
    const FractionalSolution frac = SolveLp(model);
    ASSERT_TRUE(frac.ok());
    const IntegralSolution hack = ApproxHack(model, frac, {});
    const IntegralSolution ip = SolveIp(model, {});
    ASSERT_EQ(ip.status, SolveStatus::kOptimal);
    if (hack.fallback) {
      EXPECT_EQ(hack.status, SolveStatus::kInfeasible);
      continue;
    }
    ASSERT_EQ(hack.status, SolveStatus::kOptimal);
    EXPECT_GE(hack.objective, ip.objective - 1e-9);
    EXPECT_GE(ip.objective, frac.objective - 1e-7);
    EXPECT_LE(model.program().MaxViolation(hack.values), 1e-6);
    // Fixed variables keep their relaxation values.
    for (size_t v = 0; v < frac.values.size(); ++v) {
      if (frac.values[v] == 0.0 || frac.values[v] == 1.0) {
        EXPECT_EQ(hack.values[v], frac.values[v]);
      }
    }
  }
}

TEST(ProvenanceTest, Names) {
  EXPECT_STREQ(ProvenanceName(Provenance::kExactIp), "exact-ip");
  EXPECT_STREQ(ProvenanceName(Provenance::kApprox), "approx");
  EXPECT_STREQ(ProvenanceName(Provenance::kApproxHack), "approxhack");
}

}  // namespace
}  // namespace overlay
