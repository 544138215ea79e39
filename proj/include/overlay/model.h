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

// Problem instance for three-level live-stream overlay construction.
//
// A deployment is a tripartite digraph: sources (entry points) feed
// reflectors, reflectors feed sinks (edge servers). Each link carries a
// packet-loss probability and a per-stream transmission cost; reflectors have
// a fixed usage cost and a fan-out cap. Every sink demands one stream with a
// maximum tolerated end-to-end loss.
//
// Losses are handled in the weight domain: a path with loss p has weight
// -log2(p), weights of edge-disjoint paths add, and a sink's loss threshold
// Phi becomes the weight threshold W = -log2(Phi).
//
// The raw format may list several streams per physical entry point and
// several demanded streams per physical edge server. Normalize() replicates
// those into one-stream-per-source / one-stream-per-sink form, naming
// replicas "<original id>#<stream id>".

#ifndef OVERLAY_MODEL_H_
#define OVERLAY_MODEL_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace overlay {

// Absolute tolerance for all weight comparisons.
inline constexpr double kWeightTolerance = 1e-9;

enum class CostMode {
  kFull,          // reflector fixed cost + first hop + second hop
  kTransmission,  // reflectors free; cost is the per-path transmission cost
};

const char* CostModeName(CostMode mode);
std::optional<CostMode> ParseCostMode(const std::string& name);

struct EdgeSpec {
  double loss = 0.0;
  double cost = 0.0;
};

// ---------------------------------------------------------------------------
// Raw (pre-normalization) records, mirroring the JSON document.

struct RawStream {
  std::string id;
  std::optional<double> bitrate;
};

struct RawSource {
  std::string id;
  std::optional<double> bitrate;
  // When present the source is replicated once per stream.
  std::optional<std::vector<RawStream>> streams;
};

struct RawReflector {
  std::string id;
  double fixed_cost = 0.0;
  int fanout = 1;
  std::optional<double> bandwidth_cap;
  std::optional<int> color;
};

struct RawDemand {
  std::string stream;
  double loss_threshold = 1.0;
};

struct RawSink {
  std::string id;
  // Single-stream form.
  std::optional<std::string> stream;
  std::optional<double> loss_threshold;
  // Multi-stream form; the sink is replicated once per demand.
  std::optional<std::vector<RawDemand>> demands;
};

struct RawEdge {
  std::string from;
  std::string to;
  double loss = 0.0;
  double cost = 0.0;
};

struct RawInstance {
  std::vector<RawSource> sources;
  std::vector<RawReflector> reflectors;
  std::vector<RawSink> sinks;
  std::vector<RawEdge> src_edges;
  std::vector<RawEdge> refl_edges;
  std::optional<CostMode> mode;
  bool colors_enabled = false;
  bool bandwidth_enabled = false;
};

// ---------------------------------------------------------------------------
// Normalized instance.

struct SourceSpec {
  std::string id;
  std::optional<double> bitrate;  // bits/sec, bandwidth mode only
};

struct ReflectorSpec {
  std::string id;
  double fixed_cost = 0.0;
  int fanout = 1;
  std::optional<double> bandwidth_cap;  // bits/sec
  std::optional<int> color;             // 1..m
};

struct SinkSpec {
  std::string id;
  int stream = 0;  // index into sources()
  double loss_threshold = 1.0;
  double weight_threshold = 0.0;  // -log2(loss_threshold)
};

// Immutable after construction; safe to share read-only between solver runs.
class Instance {
 public:
  const std::vector<SourceSpec>& sources() const { return sources_; }
  const std::vector<ReflectorSpec>& reflectors() const { return reflectors_; }
  const std::vector<SinkSpec>& sinks() const { return sinks_; }
  int num_sources() const { return static_cast<int>(sources_.size()); }
  int num_reflectors() const { return static_cast<int>(reflectors_.size()); }
  int num_sinks() const { return static_cast<int>(sinks_.size()); }

  CostMode mode() const { return mode_; }
  bool colors_enabled() const { return colors_enabled_; }
  bool bandwidth_enabled() const { return bandwidth_enabled_; }

  // n = max(|R|, |D|).
  int n() const;
  // Largest color label in use (0 when no reflector is colored).
  int num_colors() const;

  const std::optional<EdgeSpec>& src_edge(int source, int reflector) const {
    return src_edges_[source * num_reflectors() + reflector];
  }
  const std::optional<EdgeSpec>& refl_edge(int reflector, int sink) const {
    return refl_edges_[reflector * num_sinks() + sink];
  }

  // True when the path source(sink) -> reflector -> sink exists.
  bool HasPath(int reflector, int sink) const;

  // Loss of the path stream(sink) -> reflector -> sink, or nullopt when
  // either link is absent.
  std::optional<double> PathLoss(int reflector, int sink) const;

  // Clamped weight min(-log2(path loss), W_sink), floored at 0. Zero-loss
  // paths clamp to the sink's threshold. nullopt when the path is absent.
  std::optional<double> PathWeight(int reflector, int sink) const;

  // -log2(path loss) without the clamp (may be +inf).
  std::optional<double> UnclampedPathWeight(int reflector, int sink) const;

  int FindSource(const std::string& id) const;
  int FindReflector(const std::string& id) const;
  int FindSink(const std::string& id) const;

  // Copy with mode / feature flags replaced; used by CLI overrides.
  Instance WithOptions(CostMode mode, bool colors_enabled,
                       bool bandwidth_enabled) const;

 private:
  friend absl::StatusOr<Instance> Normalize(const RawInstance& raw);

  Instance() = default;
  void BuildWeightTable();

  std::vector<SourceSpec> sources_;
  std::vector<ReflectorSpec> reflectors_;
  std::vector<SinkSpec> sinks_;
  std::vector<std::optional<EdgeSpec>> src_edges_;   // |S| x |R|
  std::vector<std::optional<EdgeSpec>> refl_edges_;  // |R| x |D|
  std::vector<double> weights_;  // |R| x |D|, negative when absent
  CostMode mode_ = CostMode::kFull;
  bool colors_enabled_ = false;
  bool bandwidth_enabled_ = false;
};

// Validates and normalizes a raw instance. Errors name the offending field,
// e.g. "src_edges[3].loss: 1.5 is outside [0, 1]".
absl::StatusOr<Instance> Normalize(const RawInstance& raw);

// Inverse of Normalize for an already-normalized instance.
RawInstance ToRaw(const Instance& instance);

// Loss of a single source->reflector->sink path: p1 + p2 - p1 p2.
double CombinedLoss(double first_hop_loss, double second_hop_loss);

// -log2(loss); +inf for loss 0.
double LossToWeight(double loss);

// Weight threshold for a loss threshold: -log2(phi).
double ThresholdWeight(double loss_threshold);

// Post-reconstruction loss of a sink fed through `reflectors`: the product of
// the per-path losses (links fail independently). Empty set -> 1.
double AnalyticLoss(const Instance& instance, std::span<const int> reflectors,
                    int sink);

}  // namespace overlay

#endif  // OVERLAY_MODEL_H_
