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

// Integral overlay plan: open reflectors, stream feeds, and per-sink routes.

#ifndef OVERLAY_PATH_SET_H_
#define OVERLAY_PATH_SET_H_

#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "overlay/lp_model.h"
#include "overlay/model.h"

namespace overlay {

struct CostSplit {
  double reflector = 0.0;
  double first_hop = 0.0;
  double second_hop = 0.0;
  double total() const { return reflector + first_hop + second_hop; }
};

struct PathSet {
  std::string algorithm;
  std::vector<int> reflectors;             // sorted
  std::vector<std::pair<int, int>> feeds;  // (stream, reflector), sorted
  std::vector<std::vector<int>> routes;    // per sink, sorted reflectors
  CostSplit cost;                          // as declared by the producer

  int num_copies() const;
};

// Cost of the plan under `mode`: in full mode every open reflector and feed
// is paid for; in transmission mode only the per-route path costs count.
CostSplit ComputeCost(const Instance& instance, CostMode mode,
                      const PathSet& paths);

// Builds a plan from 0/1 LP values (z, y, x) and fills in its cost.
PathSet PathSetFromValues(const LpModel& model, std::span<const double> values,
                          std::string algorithm);

// Smallest consistent plan for the given routes: opens exactly the reflectors
// and feeds the routes need.
PathSet PathSetFromRoutes(const Instance& instance, CostMode mode,
                          std::vector<std::vector<int>> routes,
                          std::string algorithm);

// LP values (z, y, x) of a plan.
std::vector<double> PathSetValues(const LpModel& model, const PathSet& paths);

nlohmann::json PathSetToJson(const Instance& instance, const PathSet& paths);
absl::StatusOr<PathSet> PathSetFromJson(const Instance& instance,
                                        const nlohmann::json& doc);

}  // namespace overlay

#endif  // OVERLAY_PATH_SET_H_
