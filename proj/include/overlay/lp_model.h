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

// Integer program for overlay construction and its LP relaxation.
//
// Variables (all in [0,1]):
//   z_i      reflector i is used
//   y_i^k    stream k is fed into reflector i      (only when link k->i exists)
//   x_ij^k   sink j receives its stream k through i (only when both links
//   exist)
//
// Rows:
//   reflector-use   y_i^k - z_i <= 0
//   feed-use        x_ij^k - y_i^k <= 0
//   fanout          sum_{k,j} x_ij^k - F_i z_i <= 0
//   cutting-plane   sum_j x_ij^k - F_i y_i^k <= 0        (redundant for the IP)
//   weight          sum_i w_ij^k x_ij^k >= W_j^k          (exactly one per
//   sink) bandwidth       sum_k B^k sum_j x_ij^k - F'_i z_i <= 0 bandwidth-feed
//   B^k sum_j x_ij^k - F'_i y_i^k <= 0 color           sum_{i in R_l} x_ij^k <=
//   1            (per sink and color)
//
// In bandwidth mode the bandwidth rows replace the fan-out rows for every
// reflector that declares a bandwidth cap.

#ifndef OVERLAY_LP_MODEL_H_
#define OVERLAY_LP_MODEL_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "overlay/linear_program.h"
#include "overlay/model.h"
#include "overlay/simplex.h"

namespace overlay {

enum class RowKind {
  kReflectorUse,
  kFeedUse,
  kFanout,
  kCuttingPlane,
  kWeight,
  kBandwidth,
  kBandwidthFeed,
  kColor,
};

const char* RowKindName(RowKind kind);

struct ModeOptions {
  CostMode mode = CostMode::kFull;
  bool bandwidth = false;
  bool colors = false;

  static ModeOptions FromInstance(const Instance& instance) {
    return {instance.mode(), instance.bandwidth_enabled(),
            instance.colors_enabled()};
  }
};

struct FeedVar {
  int stream = 0;
  int reflector = 0;
  int var = 0;
};

struct RouteVar {
  int stream = 0;
  int reflector = 0;
  int sink = 0;
  double weight = 0.0;  // clamped path weight
  double cost = 0.0;    // objective coefficient
  double first_hop_cost = 0.0;
  double second_hop_cost = 0.0;
  int var = 0;
  int feed = 0;  // index into feed_vars()
};

class LpModel {
 public:
  const Instance& instance() const { return *instance_; }
  std::shared_ptr<const Instance> shared_instance() const { return instance_; }
  const ModeOptions& options() const { return options_; }
  const LinearProgram& program() const { return program_; }
  LinearProgram& mutable_program() { return program_; }

  int z_var(int reflector) const { return z_vars_[reflector]; }
  const std::vector<FeedVar>& feed_vars() const { return feed_vars_; }
  const std::vector<RouteVar>& route_vars() const { return route_vars_; }
  const std::vector<RowKind>& row_kinds() const { return row_kinds_; }

  // Feed index for (stream, reflector), or -1.
  int FeedIndex(int stream, int reflector) const {
    return feed_index_[stream * instance_->num_reflectors() + reflector];
  }
  // Route indices grouped by sink / by reflector.
  const std::vector<int>& routes_of_sink(int sink) const {
    return routes_of_sink_[sink];
  }
  const std::vector<int>& routes_of_reflector(int reflector) const {
    return routes_of_reflector_[reflector];
  }
  int weight_row(int sink) const { return weight_rows_[sink]; }

  int CountRows(RowKind kind) const;

  // Capacity of reflector i in "copies": F_i, or floor(F'_i / B) in bandwidth
  // mode (requires a uniform bitrate; see UniformBitrate()).
  double CopyCapacity(int reflector) const;

  // The common bitrate when every stream has the same B, else nullopt.
  std::optional<double> UniformBitrate() const;

  // Objective split of a (possibly fractional) assignment.
  struct CostBreakdown {
    double reflector = 0.0;
    double first_hop = 0.0;
    double second_hop = 0.0;
    double total() const { return reflector + first_hop + second_hop; }
  };
  CostBreakdown Breakdown(std::span<const double> values) const;

 private:
  friend absl::StatusOr<LpModel> BuildModel(
      std::shared_ptr<const Instance> instance, const ModeOptions& options);

  std::shared_ptr<const Instance> instance_;
  ModeOptions options_;
  LinearProgram program_;
  std::vector<int> z_vars_;
  std::vector<FeedVar> feed_vars_;
  std::vector<RouteVar> route_vars_;
  std::vector<int> feed_index_;
  std::vector<std::vector<int>> routes_of_sink_;
  std::vector<std::vector<int>> routes_of_reflector_;
  std::vector<int> weight_rows_;
  std::vector<RowKind> row_kinds_;
};

// Builds the model. Fails with FailedPrecondition naming the sink when a sink
// with a positive threshold has no usable path.
absl::StatusOr<LpModel> BuildModel(std::shared_ptr<const Instance> instance,
                                   const ModeOptions& options);

// Sink-level infeasibility evidence: the best weight reachable by using every
// admissible path is still below the threshold.
struct InfeasibleSink {
  std::string sink;
  double max_weight = 0.0;
  double threshold = 0.0;
};

struct InfeasibilityCertificate {
  std::vector<InfeasibleSink> sinks;
  // Rows the LP could not satisfy jointly (capacity-driven infeasibility).
  std::vector<std::string> rows;
  std::string ToString() const;
};

// Per-sink pre-check: sum of admissible weights < W.
std::optional<InfeasibilityCertificate> CheckSinkFeasibility(
    const LpModel& model);

enum class SolveStatus {
  kOptimal,
  kInfeasible,
  kTimeout,
  kError,
};

const char* SolveStatusName(SolveStatus status);

struct FractionalSolution {
  SolveStatus status = SolveStatus::kError;
  std::vector<double> values;  // per LP variable, snapped to [0,1]
  double objective = 0.0;
  int64_t iterations = 0;
  std::optional<InfeasibilityCertificate> certificate;
  std::string message;

  bool ok() const { return status == SolveStatus::kOptimal; }
};

// Solves the LP relaxation. Values within 1e-9 of 0 or 1 are snapped.
FractionalSolution SolveLp(const LpModel& model,
                           const SimplexOptions& options = {});

// Solution JSON keyed by variable name.
nlohmann::json SolutionToJson(const LpModel& model,
                              std::span<const double> values);

}  // namespace overlay

#endif  // OVERLAY_LP_MODEL_H_
