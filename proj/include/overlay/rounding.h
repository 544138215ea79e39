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

// Randomized rounding of the LP relaxation into a semi-integral solution.
//
// With multiplier M (standing in for c log n):
//   z.i = min(M z^_i, 1),          zbar_i ~ Bernoulli(z.i)
//   y.i = min(M y^_i / z.i, 1),    ybar_i ~ Bernoulli(y.i) if zbar_i = 1
//   xbar_ij = x^_ij                if z.i = y.i = 1
//           = 1/M w.p. x^/y^       if ybar_i = 1
//           = 0                    otherwise
// so that E[xbar] = x^ coordinatewise and the expected cost is at most M
// times the LP cost.
//
// Attempt t draws from Rng(DeriveSeed(seed, t)). Uniforms are consumed in a
// fixed order: one per reflector, then one per feed variable, then one per
// route variable outside the deterministic branch. A draw is accepted when
// every sink keeps at least (1 - delta) of its weight threshold and every
// reflector carries at most twice its copy capacity.

#ifndef OVERLAY_ROUNDING_H_
#define OVERLAY_ROUNDING_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "overlay/lp_model.h"

namespace overlay {

struct RoundingConfig {
  double multiplier = 2.0;
  double delta = 0.25;
  // Total number of draws tried before giving up.
  int max_retries = 20;
  uint64_t seed = 0;
};

// 64 log2 n with log2 n floored at 1.
double TheoreticalMultiplier(int n);

// Smallest M for which every Bernoulli probability is 1: the reciprocal of the
// smallest nonzero z^ or y^. Returns 1 for an all-zero solution.
double SaturationMultiplier(const LpModel& model,
                            const FractionalSolution& frac);

absl::Status ValidateConfig(const RoundingConfig& config);

struct SemiIntegralSolution {
  double multiplier = 0.0;
  int attempt = 0;  // 0-based index of the draw
  std::vector<double> z_dot;
  std::vector<double> y_dot;
  std::vector<uint8_t> z_bar;  // per reflector
  std::vector<uint8_t> y_bar;  // per feed variable
  std::vector<double> x_bar;   // per route variable
  std::vector<double> weight;  // per sink: sum_i xbar w
  std::vector<double> load;    // per reflector: sum xbar
  double cost = 0.0;           // C-bar

  // Values laid out as LP variables.
  std::vector<double> Values(const LpModel& model) const;
};

// One draw (attempt index `attempt`). Fails only on inconsistent input.
absl::StatusOr<SemiIntegralSolution> RandomizedRound(
    const LpModel& model, const FractionalSolution& frac,
    const RoundingConfig& config, int attempt);

struct RoundingCheck {
  int weight_violations = 0;
  int capacity_violations = 0;
  double min_weight_ratio = 1.0;  // over sinks with W > 0
  double max_load_ratio = 0.0;    // load / copy capacity
  bool ok() const { return weight_violations == 0 && capacity_violations == 0; }
};

RoundingCheck CheckRounding(const LpModel& model,
                            const SemiIntegralSolution& semi, double delta);

struct RoundingOutcome {
  bool success = false;
  int attempts = 0;
  // Accepted draw, or the draw with the best minimum weight ratio on failure.
  SemiIntegralSolution solution;
  RoundingCheck check;
  int first_attempt_violations = 0;
};

absl::StatusOr<RoundingOutcome> RoundWithRetries(const LpModel& model,
                                                 const FractionalSolution& frac,
                                                 const RoundingConfig& config);

}  // namespace overlay

#endif  // OVERLAY_ROUNDING_H_
