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

// Synthetic instances: random three-level deployments with a planted
// feasible routing, and the set-cover embedding (one source, one reflector
// per set, one sink per element).

#ifndef OVERLAY_GENERATOR_H_
#define OVERLAY_GENERATOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "overlay/model.h"

namespace overlay {

// Link-loss ranges. Synthetic stand-ins for measured loss periods:
//   low  U[0, 0.01]   avg  U[0.005, 0.05]   high  U[0.02, 0.20]
enum class Regime { kLow, kAvg, kHigh };

const char* RegimeName(Regime regime);
std::optional<Regime> ParseRegime(const std::string& name);

struct RandomInstanceOptions {
  int sources = 4;
  int reflectors = 7;
  int sinks = 14;
  Regime regime = Regime::kAvg;
  // Overrides the regime's loss range when set.
  std::optional<std::pair<double, double>> loss_range;
  uint64_t seed = 1;
  // Probability that each potential link exists.
  double density = 1.0;
  // Number of ISP colors; 0 leaves reflectors uncolored.
  int colors = 0;
  // Attach bitrates (uniform) and reflector bandwidth caps.
  bool bandwidth = false;
  double bitrate = 1e6;
  CostMode mode = CostMode::kFull;
};

// Costs U[1, 10], fixed costs U[5, 50], fan-outs uniform in
// [2, ceil(2 |D| / |R|)]. Sink j < |S| demands stream j, the rest a random
// stream. Loss thresholds come from a planted routing: each sink asks for
// 1-3 reflectors and is given as many as spare fan-out allows (at least one,
// distinct colors when colored); then Phi = min(1, u * product of their path
// losses) with u ~ U[1, 1.5], so the instance is feasible by construction. A
// draw that cannot give every sink a reflector is redrawn, at most 100 times.
absl::StatusOr<Instance> GenerateRandom(const RandomInstanceOptions& options);

// Elements are 1-based. Every set becomes a reflector with unit fixed cost,
// every element a sink with Phi = 1/2 (W = 1); a set containing an element
// gets a path of loss 1/2 (weight 1) to it, other links are absent.
absl::StatusOr<Instance> GenerateSetCover(
    int universe_size, const std::vector<std::vector<int>>& sets);

// Random set system over {1..universe_size} where every element is covered.
std::vector<std::vector<int>> RandomSetSystem(int universe_size, int num_sets,
                                              uint64_t seed);

}  // namespace overlay

#endif  // OVERLAY_GENERATOR_H_
