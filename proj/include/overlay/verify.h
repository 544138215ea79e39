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

// Independent checks of an integral plan: constraint ratios, cost
// re-accounting, analytic end-to-end loss and a packet-level loss simulator.

#ifndef OVERLAY_VERIFY_H_
#define OVERLAY_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "overlay/model.h"
#include "overlay/path_set.h"

namespace overlay {

enum class GuaranteeProfile {
  kExact,   // every constraint as written
  kApprox,  // weight >= W/4, copies <= 4 F_i
  kColor,   // every sink served, <= 13 copies per (sink, color)
};

const char* GuaranteeProfileName(GuaranteeProfile profile);

struct SinkReport {
  int sink = 0;
  int copies = 0;
  double weight = 0.0;  // sum of clamped path weights
  double weight_ratio = 0.0;
  double analytic_loss = 1.0;
  int max_copies_per_color = 0;
  bool ok = true;
};

struct ReflectorReport {
  int reflector = 0;
  int copies = 0;
  double fanout_ratio = 0.0;
  double bandwidth = 0.0;  // bits/sec, bandwidth mode only
  double bandwidth_ratio = 0.0;
  bool ok = true;
};

struct AuditReport {
  GuaranteeProfile profile = GuaranteeProfile::kExact;
  std::vector<SinkReport> sinks;
  std::vector<ReflectorReport> reflectors;
  CostSplit cost;  // recomputed
  double declared_cost = 0.0;
  bool cost_matches = true;
  double min_weight_ratio = 1.0;
  double max_fanout_ratio = 0.0;
  double max_bandwidth_ratio = 0.0;
  int max_copies_per_color = 0;
  std::vector<std::string> violations;
  bool passed() const { return violations.empty(); }
};

// Fails with InvalidArgument on dangling references (unknown indices or
// routes over absent links).
absl::StatusOr<AuditReport> Audit(const Instance& instance,
                                  const PathSet& paths,
                                  GuaranteeProfile profile);

nlohmann::json AuditToJson(const Instance& instance, const AuditReport& report);

struct LossSimulation {
  int64_t packets = 0;
  std::vector<int64_t> lost;  // per sink (simulated sinks only)
  double rate(int sink) const {
    return packets > 0 ? static_cast<double>(lost[sink]) / packets : 1.0;
  }
};

// Packet-level simulation for all sinks at once. Each packet draws one loss
// event per link in use; a first-hop link shared by several sinks is drawn
// once. Packets are split into fixed shards seeded with DeriveSeed(seed, s),
// so the result does not depend on `workers`. Sinks without routes lose
// every packet.
LossSimulation SimulateAllLosses(const Instance& instance, const PathSet& paths,
                                 int64_t packets, uint64_t seed,
                                 int workers = 1);

// Empirical loss rate at one sink; 1.0 (with a logged warning) when the sink
// has no route.
double SimulateLoss(const Instance& instance, const PathSet& paths, int sink,
                    int64_t packets, uint64_t seed, int workers = 1);

}  // namespace overlay

#endif  // OVERLAY_VERIFY_H_
