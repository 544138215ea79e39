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

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <utility>

#include "absl/strings/str_cat.h"

namespace overlay {

int MinCostFlow::AddArc(int from, int to, int64_t capacity, double unit_cost) {
  const int index = static_cast<int>(arcs_.size()) / 2;
  adjacency_[from].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({to, capacity, unit_cost});
  adjacency_[to].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({from, 0, -unit_cost});
  return index;
}

absl::Status MinCostFlow::Solve(int source, int sink) {
  for (const Residual& arc : arcs_) {
    if (arc.capacity > 0 && arc.cost < 0.0) {
      return absl::InvalidArgumentError("MinCostFlow: negative arc cost");
    }
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int n = num_nodes();
  std::vector<double> potential(n, 0.0);
  std::vector<double> dist(n);
  std::vector<int> parent_arc(n);
  using Entry = std::pair<double, int>;

  while (true) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
    dist[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (int a : adjacency_[u]) {
        const Residual& arc = arcs_[a];
        if (arc.capacity <= 0) continue;
        // Reduced costs are nonnegative up to rounding.
        const double reduced =
            std::max(0.0, arc.cost + potential[u] - potential[arc.head]);
        const double nd = d + reduced;
        if (nd < dist[arc.head]) {
          dist[arc.head] = nd;
          parent_arc[arc.head] = a;
          heap.push({nd, arc.head});
        }
      }
    }
    if (dist[sink] == kInf) break;
    for (int v = 0; v < n; ++v) {
      if (dist[v] < kInf) potential[v] += dist[v];
    }
    int64_t push = std::numeric_limits<int64_t>::max();
    for (int v = sink; v != source;) {
      const int a = parent_arc[v];
      push = std::min(push, arcs_[a].capacity);
      v = arcs_[a ^ 1].head;
    }
    for (int v = sink; v != source;) {
      const int a = parent_arc[v];
      arcs_[a].capacity -= push;
      arcs_[a ^ 1].capacity += push;
      total_cost_ += static_cast<double>(push) * arcs_[a].cost;
      v = arcs_[a ^ 1].head;
    }
    flow_value_ += push;
    ++augmentations_;
  }
  return absl::OkStatus();
}

}  // namespace overlay
