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

#include "overlay/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace overlay {
namespace {

absl::Status FieldError(const std::string& field, const std::string& what) {
  return absl::InvalidArgumentError(absl::StrCat(field, ": ", what));
}

bool IsFiniteNonNegative(double v) { return std::isfinite(v) && v >= 0.0; }

absl::Status CheckLoss(const std::string& field, double loss) {
  if (!(loss >= 0.0 && loss <= 1.0)) {
    return FieldError(field, absl::StrCat(loss, " is outside [0, 1]"));
  }
  return absl::OkStatus();
}

absl::Status CheckCost(const std::string& field, double cost) {
  if (!IsFiniteNonNegative(cost)) {
    return FieldError(field,
                      absl::StrCat(cost, " must be finite and non-negative"));
  }
  return absl::OkStatus();
}

absl::Status CheckThreshold(const std::string& field, double phi) {
  if (!(phi > 0.0 && phi <= 1.0)) {
    return FieldError(field, absl::StrCat(phi, " is outside (0, 1]"));
  }
  return absl::OkStatus();
}

absl::Status CheckBitrate(const std::string& field, double bitrate) {
  if (!(std::isfinite(bitrate) && bitrate > 0.0)) {
    return FieldError(field, absl::StrCat(bitrate, " must be positive"));
  }
  return absl::OkStatus();
}

}  // namespace

const char* CostModeName(CostMode mode) {
  return mode == CostMode::kTransmission ? "transmission" : "full";
}

std::optional<CostMode> ParseCostMode(const std::string& name) {
  if (name == "full") return CostMode::kFull;
  if (name == "transmission") return CostMode::kTransmission;
  return std::nullopt;
}

double CombinedLoss(double first_hop_loss, double second_hop_loss) {
  return first_hop_loss + second_hop_loss - first_hop_loss * second_hop_loss;
}

double LossToWeight(double loss) {
  if (loss <= 0.0) return std::numeric_limits<double>::infinity();
  if (loss >= 1.0) return 0.0;
  return -std::log2(loss);
}

double ThresholdWeight(double loss_threshold) {
  return LossToWeight(loss_threshold);
}

int Instance::n() const { return std::max(num_reflectors(), num_sinks()); }

int Instance::num_colors() const {
  int m = 0;
  for (const ReflectorSpec& r : reflectors_) {
    if (r.color) m = std::max(m, *r.color);
  }
  return m;
}

bool Instance::HasPath(int reflector, int sink) const {
  return weights_[reflector * num_sinks() + sink] >= 0.0;
}

std::optional<double> Instance::PathLoss(int reflector, int sink) const {
  const auto& first = src_edge(sinks_[sink].stream, reflector);
  const auto& second = refl_edge(reflector, sink);
  if (!first || !second) return std::nullopt;
  return CombinedLoss(first->loss, second->loss);
}

std::optional<double> Instance::UnclampedPathWeight(int reflector,
                                                    int sink) const {
  std::optional<double> loss = PathLoss(reflector, sink);
  if (!loss) return std::nullopt;
  return LossToWeight(*loss);
}

std::optional<double> Instance::PathWeight(int reflector, int sink) const {
  const double w = weights_[reflector * num_sinks() + sink];
  if (w < 0.0) return std::nullopt;
  return w;
}

void Instance::BuildWeightTable() {
  weights_.assign(static_cast<size_t>(num_reflectors()) * num_sinks(), -1.0);
  for (int i = 0; i < num_reflectors(); ++i) {
    for (int j = 0; j < num_sinks(); ++j) {
      std::optional<double> w = UnclampedPathWeight(i, j);
      if (!w) continue;
      weights_[i * num_sinks() + j] =
          std::clamp(*w, 0.0, sinks_[j].weight_threshold);
    }
  }
}

int Instance::FindSource(const std::string& id) const {
  for (int k = 0; k < num_sources(); ++k) {
    if (sources_[k].id == id) return k;
  }
  return -1;
}

int Instance::FindReflector(const std::string& id) const {
  for (int i = 0; i < num_reflectors(); ++i) {
    if (reflectors_[i].id == id) return i;
  }
  return -1;
}

int Instance::FindSink(const std::string& id) const {
  for (int j = 0; j < num_sinks(); ++j) {
    if (sinks_[j].id == id) return j;
  }
  return -1;
}

Instance Instance::WithOptions(CostMode mode, bool colors_enabled,
                               bool bandwidth_enabled) const {
  Instance copy = *this;
  copy.mode_ = mode;
  copy.colors_enabled_ = colors_enabled;
  copy.bandwidth_enabled_ = bandwidth_enabled;
  return copy;
}

absl::StatusOr<Instance> Normalize(const RawInstance& raw) {
  Instance inst;
  inst.mode_ = raw.mode.value_or(CostMode::kFull);
  inst.colors_enabled_ = raw.colors_enabled;
  inst.bandwidth_enabled_ = raw.bandwidth_enabled;

  // Sources -> one normalized source per stream.
  std::map<std::string, std::vector<int>> replicas_of_source;
  std::map<std::string, int> stream_index;
  for (size_t s = 0; s < raw.sources.size(); ++s) {
    const RawSource& src = raw.sources[s];
    const std::string field = absl::StrCat("sources[", s, "]");
    if (src.id.empty()) return FieldError(field + ".id", "empty id");
    if (replicas_of_source.count(src.id)) {
      return FieldError(field + ".id",
                        absl::StrCat("duplicate id '", src.id, "'"));
    }
    if (src.bitrate) {
      if (auto st = CheckBitrate(field + ".bitrate", *src.bitrate); !st.ok()) {
        return st;
      }
    }
    std::vector<int>& replicas = replicas_of_source[src.id];
    auto add_stream = [&](const std::string& stream_id,
                          const std::string& normalized_id,
                          std::optional<double> bitrate,
                          const std::string& f) -> absl::Status {
      if (stream_index.count(stream_id)) {
        return FieldError(
            f, absl::StrCat("duplicate stream id '", stream_id, "'"));
      }
      const int k = static_cast<int>(inst.sources_.size());
      stream_index[stream_id] = k;
      if (normalized_id != stream_id) stream_index.emplace(normalized_id, k);
      inst.sources_.push_back({normalized_id, bitrate});
      replicas.push_back(k);
      return absl::OkStatus();
    };
    if (!src.streams) {
      if (auto st = add_stream(src.id, src.id, src.bitrate, field + ".id");
          !st.ok()) {
        return st;
      }
      continue;
    }
    if (src.streams->empty()) {
      return FieldError(field + ".streams", "empty stream list");
    }
    for (size_t t = 0; t < src.streams->size(); ++t) {
      const RawStream& stream = (*src.streams)[t];
      const std::string f = absl::StrCat(field, ".streams[", t, "]");
      if (stream.id.empty()) return FieldError(f + ".id", "empty id");
      std::optional<double> bitrate =
          stream.bitrate ? stream.bitrate : src.bitrate;
      if (stream.bitrate) {
        if (auto st = CheckBitrate(f + ".bitrate", *stream.bitrate); !st.ok()) {
          return st;
        }
      }
      if (auto st = add_stream(stream.id, src.id + "#" + stream.id, bitrate,
                               f + ".id");
          !st.ok()) {
        return st;
      }
    }
  }

  // Reflectors.
  std::set<std::string> reflector_ids;
  for (size_t r = 0; r < raw.reflectors.size(); ++r) {
    const RawReflector& refl = raw.reflectors[r];
    const std::string field = absl::StrCat("reflectors[", r, "]");
    if (refl.id.empty()) return FieldError(field + ".id", "empty id");
    if (!reflector_ids.insert(refl.id).second) {
      return FieldError(field + ".id",
                        absl::StrCat("duplicate id '", refl.id, "'"));
    }
    if (auto st = CheckCost(field + ".fixed_cost", refl.fixed_cost); !st.ok()) {
      return st;
    }
    if (refl.fanout < 1) {
      return FieldError(field + ".fanout",
                        absl::StrCat(refl.fanout, " must be >= 1"));
    }
    if (refl.bandwidth_cap) {
      if (auto st = CheckBitrate(field + ".bandwidth_cap", *refl.bandwidth_cap);
          !st.ok()) {
        return st;
      }
    }
    if (refl.color && *refl.color < 1) {
      return FieldError(field + ".color",
                        absl::StrCat(*refl.color, " must be >= 1"));
    }
    inst.reflectors_.push_back({refl.id, refl.fixed_cost, refl.fanout,
                                refl.bandwidth_cap, refl.color});
  }

  // Sinks -> one normalized sink per demanded stream.
  std::map<std::string, std::vector<int>> replicas_of_sink;
  for (size_t d = 0; d < raw.sinks.size(); ++d) {
    const RawSink& sink = raw.sinks[d];
    const std::string field = absl::StrCat("sinks[", d, "]");
    if (sink.id.empty()) return FieldError(field + ".id", "empty id");
    if (replicas_of_sink.count(sink.id)) {
      return FieldError(field + ".id",
                        absl::StrCat("duplicate id '", sink.id, "'"));
    }
    std::vector<int>& replicas = replicas_of_sink[sink.id];
    auto add_demand = [&](const std::string& stream, double phi,
                          const std::string& normalized_id,
                          const std::string& f) -> absl::Status {
      auto it = stream_index.find(stream);
      if (it == stream_index.end()) {
        return FieldError(f + ".stream",
                          absl::StrCat("unknown stream '", stream, "'"));
      }
      if (auto st = CheckThreshold(f + ".loss_threshold", phi); !st.ok()) {
        return st;
      }
      replicas.push_back(static_cast<int>(inst.sinks_.size()));
      inst.sinks_.push_back(
          {normalized_id, it->second, phi, ThresholdWeight(phi)});
      return absl::OkStatus();
    };
    if (sink.demands) {
      if (sink.stream || sink.loss_threshold) {
        return FieldError(field,
                          "use either 'stream'/'loss_threshold' or "
                          "'demands', not both");
      }
      if (sink.demands->empty()) {
        return FieldError(field + ".demands", "empty demand list");
      }
      std::set<std::string> seen;
      for (size_t t = 0; t < sink.demands->size(); ++t) {
        const RawDemand& demand = (*sink.demands)[t];
        const std::string f = absl::StrCat(field, ".demands[", t, "]");
        if (!seen.insert(demand.stream).second) {
          return FieldError(
              f + ".stream",
              absl::StrCat("stream '", demand.stream, "' demanded twice"));
        }
        if (auto st = add_demand(demand.stream, demand.loss_threshold,
                                 sink.id + "#" + demand.stream, f);
            !st.ok()) {
          return st;
        }
      }
    } else {
      if (!sink.stream) return FieldError(field + ".stream", "missing");
      if (!sink.loss_threshold) {
        return FieldError(field + ".loss_threshold", "missing");
      }
      if (auto st =
              add_demand(*sink.stream, *sink.loss_threshold, sink.id, field);
          !st.ok()) {
        return st;
      }
    }
  }

  if (inst.sources_.empty()) return FieldError("sources", "no sources");
  if (inst.reflectors_.empty()) {
    return FieldError("reflectors", "no reflectors");
  }
  if (inst.sinks_.empty()) return FieldError("sinks", "no sinks");
  if (inst.sources_.size() > inst.sinks_.size()) {
    return FieldError("sources",
                      absl::StrCat(inst.sources_.size(), " streams but only ",
                                   inst.sinks_.size(), " sink demands"));
  }

  const int num_s = inst.num_sources();
  const int num_r = inst.num_reflectors();
  const int num_d = inst.num_sinks();
  std::map<std::string, int> reflector_index;
  for (int i = 0; i < num_r; ++i) reflector_index[inst.reflectors_[i].id] = i;

  inst.src_edges_.assign(static_cast<size_t>(num_s) * num_r, std::nullopt);
  for (size_t e = 0; e < raw.src_edges.size(); ++e) {
    const RawEdge& edge = raw.src_edges[e];
    const std::string field = absl::StrCat("src_edges[", e, "]");
    auto src = replicas_of_source.find(edge.from);
    if (src == replicas_of_source.end()) {
      return FieldError(field + ".from",
                        absl::StrCat("unknown source '", edge.from, "'"));
    }
    auto refl = reflector_index.find(edge.to);
    if (refl == reflector_index.end()) {
      return FieldError(field + ".to",
                        absl::StrCat("unknown reflector '", edge.to, "'"));
    }
    if (auto st = CheckLoss(field + ".loss", edge.loss); !st.ok()) return st;
    if (auto st = CheckCost(field + ".cost", edge.cost); !st.ok()) return st;
    for (int k : src->second) {
      auto& slot = inst.src_edges_[k * num_r + refl->second];
      if (slot) {
        return FieldError(
            field, absl::StrCat("duplicate edge ", edge.from, " -> ", edge.to));
      }
      slot = EdgeSpec{edge.loss, edge.cost};
    }
  }

  inst.refl_edges_.assign(static_cast<size_t>(num_r) * num_d, std::nullopt);
  for (size_t e = 0; e < raw.refl_edges.size(); ++e) {
    const RawEdge& edge = raw.refl_edges[e];
    const std::string field = absl::StrCat("refl_edges[", e, "]");
    auto refl = reflector_index.find(edge.from);
    if (refl == reflector_index.end()) {
      return FieldError(field + ".from",
                        absl::StrCat("unknown reflector '", edge.from, "'"));
    }
    auto sink = replicas_of_sink.find(edge.to);
    if (sink == replicas_of_sink.end()) {
      return FieldError(field + ".to",
                        absl::StrCat("unknown sink '", edge.to, "'"));
    }
    if (auto st = CheckLoss(field + ".loss", edge.loss); !st.ok()) return st;
    if (auto st = CheckCost(field + ".cost", edge.cost); !st.ok()) return st;
    for (int j : sink->second) {
      auto& slot = inst.refl_edges_[refl->second * num_d + j];
      if (slot) {
        return FieldError(
            field, absl::StrCat("duplicate edge ", edge.from, " -> ", edge.to));
      }
      slot = EdgeSpec{edge.loss, edge.cost};
    }
  }

  if (inst.bandwidth_enabled_) {
    for (int k = 0; k < num_s; ++k) {
      if (!inst.sources_[k].bitrate) {
        return FieldError(absl::StrCat("sources[", inst.sources_[k].id, "]"),
                          "bitrate is required when bandwidth_enabled");
      }
    }
  }

  inst.BuildWeightTable();
  return inst;
}

RawInstance ToRaw(const Instance& instance) {
  RawInstance raw;
  raw.mode = instance.mode();
  raw.colors_enabled = instance.colors_enabled();
  raw.bandwidth_enabled = instance.bandwidth_enabled();
  for (const SourceSpec& s : instance.sources()) {
    raw.sources.push_back({s.id, s.bitrate, std::nullopt});
  }
  for (const ReflectorSpec& r : instance.reflectors()) {
    raw.reflectors.push_back(
        {r.id, r.fixed_cost, r.fanout, r.bandwidth_cap, r.color});
  }
  for (const SinkSpec& d : instance.sinks()) {
    raw.sinks.push_back({d.id, instance.sources()[d.stream].id,
                         d.loss_threshold, std::nullopt});
  }
  for (int k = 0; k < instance.num_sources(); ++k) {
    for (int i = 0; i < instance.num_reflectors(); ++i) {
      if (const auto& e = instance.src_edge(k, i)) {
        raw.src_edges.push_back({instance.sources()[k].id,
                                 instance.reflectors()[i].id, e->loss,
                                 e->cost});
      }
    }
  }
  for (int i = 0; i < instance.num_reflectors(); ++i) {
    for (int j = 0; j < instance.num_sinks(); ++j) {
      if (const auto& e = instance.refl_edge(i, j)) {
        raw.refl_edges.push_back({instance.reflectors()[i].id,
                                  instance.sinks()[j].id, e->loss, e->cost});
      }
    }
  }
  return raw;
}

double AnalyticLoss(const Instance& instance, std::span<const int> reflectors,
                    int sink) {
  double loss = 1.0;
  for (int i : reflectors) {
    std::optional<double> p = instance.PathLoss(i, sink);
    loss *= p.value_or(1.0);
  }
  return loss;
}

}  // namespace overlay
