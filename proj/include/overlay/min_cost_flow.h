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

// Min-cost maximum flow by successive shortest augmenting paths.
//
// Capacities are integers; costs are nonnegative doubles. Shortest paths are
// found with Dijkstra on reduced costs (Johnson potentials), which stay
// nonnegative after every augmentation. Each augmentation pushes the
// bottleneck capacity, so integral capacities give an integral flow.

#ifndef OVERLAY_MIN_COST_FLOW_H_
#define OVERLAY_MIN_COST_FLOW_H_

#include <cstdint>
#include <vector>

#include "absl/status/status.h"

namespace overlay {

class MinCostFlow {
 public:
  explicit MinCostFlow(int num_nodes) : adjacency_(num_nodes) {}

  int num_nodes() const { return static_cast<int>(adjacency_.size()); }
  int num_arcs() const { return static_cast<int>(arcs_.size()) / 2; }

  // Returns the arc index (forward arcs only are numbered).
  int AddArc(int from, int to, int64_t capacity, double unit_cost);

  // Sends as much flow as possible from source to sink at minimum cost.
  absl::Status Solve(int source, int sink);

  int64_t flow_value() const { return flow_value_; }
  double total_cost() const { return total_cost_; }
  int64_t Flow(int arc) const { return arcs_[2 * arc + 1].capacity; }
  int Tail(int arc) const { return arcs_[2 * arc + 1].head; }
  int Head(int arc) const { return arcs_[2 * arc].head; }
  int64_t Capacity(int arc) const {
    return arcs_[2 * arc].capacity + arcs_[2 * arc + 1].capacity;
  }
  double UnitCost(int arc) const { return arcs_[2 * arc].cost; }
  int64_t augmentations() const { return augmentations_; }

 private:
  struct Residual {
    int head;
    int64_t capacity;  // residual capacity
    double cost;
  };

  // arcs_[2a] is forward arc a, arcs_[2a+1] its reverse.
  std::vector<Residual> arcs_;
  std::vector<std::vector<int>> adjacency_;
  int64_t flow_value_ = 0;
  double total_cost_ = 0.0;
  int64_t augmentations_ = 0;
};

}  // namespace overlay

#endif  // OVERLAY_MIN_COST_FLOW_H_
