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

#include "overlay/lp_model.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"

namespace overlay {
namespace {

constexpr double kSnapTolerance = 1e-9;

// LP-format names allow a limited character set; keep ids readable.
std::string Sanitize(const std::string& id) {
  std::string out;
  out.reserve(id.size());
  for (char c : id) {
    const bool keep =
        std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    out.push_back(keep ? c : '_');
  }
  return out;
}

}  // namespace

const char* RowKindName(RowKind kind) {
  switch (kind) {
    case RowKind::kReflectorUse:
      return "reflector-use";
    case RowKind::kFeedUse:
      return "feed-use";
    case RowKind::kFanout:
      return "fanout";
    case RowKind::kCuttingPlane:
      return "cutting-plane";
    case RowKind::kWeight:
      return "weight";
    case RowKind::kBandwidth:
      return "bandwidth";
    case RowKind::kBandwidthFeed:
      return "bandwidth-feed";
    case RowKind::kColor:
      return "color";
  }
  return "unknown";
}

const char* SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kTimeout:
      return "timeout";
    case SolveStatus::kError:
      return "error";
  }
  return "unknown";
}

int LpModel::CountRows(RowKind kind) const {
  return static_cast<int>(
      std::count(row_kinds_.begin(), row_kinds_.end(), kind));
}

std::optional<double> LpModel::UniformBitrate() const {
  std::optional<double> rate;
  for (const SourceSpec& source : instance_->sources()) {
    if (!source.bitrate.has_value()) return std::nullopt;
    if (rate.has_value() && *rate != *source.bitrate) return std::nullopt;
    rate = source.bitrate;
  }
  return rate;
}

double LpModel::CopyCapacity(int reflector) const {
  const ReflectorSpec& spec = instance_->reflectors()[reflector];
  if (options_.bandwidth && spec.bandwidth_cap.has_value()) {
    const std::optional<double> rate = UniformBitrate();
    if (rate.has_value()) {
      // Guard against 2.9999999 style quotients.
      return std::floor(*spec.bandwidth_cap / *rate + 1e-9);
    }
  }
  return spec.fanout;
}

LpModel::CostBreakdown LpModel::Breakdown(
    std::span<const double> values) const {
  CostBreakdown out;
  if (options_.mode == CostMode::kFull) {
    for (int i = 0; i < instance_->num_reflectors(); ++i) {
      out.reflector +=
          instance_->reflectors()[i].fixed_cost * values[z_vars_[i]];
    }
    for (const FeedVar& feed : feed_vars_) {
      out.first_hop += instance_->src_edge(feed.stream, feed.reflector)->cost *
                       values[feed.var];
    }
    for (const RouteVar& route : route_vars_) {
      out.second_hop += route.second_hop_cost * values[route.var];
    }
  } else {
    for (const RouteVar& route : route_vars_) {
      out.first_hop += route.first_hop_cost * values[route.var];
      out.second_hop += route.second_hop_cost * values[route.var];
    }
  }
  return out;
}

absl::StatusOr<LpModel> BuildModel(std::shared_ptr<const Instance> instance,
                                   const ModeOptions& options) {
  if (instance == nullptr) {
    return absl::InvalidArgumentError("BuildModel: null instance");
  }
  const Instance& inst = *instance;
  const int num_s = inst.num_sources();
  const int num_r = inst.num_reflectors();
  const int num_d = inst.num_sinks();
  if (options.bandwidth) {
    for (const SourceSpec& source : inst.sources()) {
      if (!source.bitrate.has_value()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "bandwidth mode: source ", source.id, " has no bitrate"));
      }
    }
  }

  LpModel model;
  model.instance_ = instance;
  model.options_ = options;
  LinearProgram& lp = model.program_;
  const bool full = options.mode == CostMode::kFull;

  for (int i = 0; i < num_r; ++i) {
    const ReflectorSpec& spec = inst.reflectors()[i];
    model.z_vars_.push_back(
        lp.AddVariable(absl::StrCat("z_", Sanitize(spec.id)), 0.0, 1.0,
                       full ? spec.fixed_cost : 0.0));
  }

  // A feed variable exists only when the source link does and some sink of
  // that stream can be reached through the reflector.
  model.feed_index_.assign(static_cast<size_t>(num_s) * num_r, -1);
  for (int k = 0; k < num_s; ++k) {
    for (int i = 0; i < num_r; ++i) {
      const std::optional<EdgeSpec>& edge = inst.src_edge(k, i);
      if (!edge.has_value()) continue;
      bool useful = false;
      for (int j = 0; j < num_d && !useful; ++j) {
        useful = inst.sinks()[j].stream == k && inst.HasPath(i, j);
      }
      if (!useful) continue;
      FeedVar feed;
      feed.stream = k;
      feed.reflector = i;
      feed.var =
          lp.AddVariable(absl::StrCat("y_", Sanitize(inst.sources()[k].id), "_",
                                      Sanitize(inst.reflectors()[i].id)),
                         0.0, 1.0, full ? edge->cost : 0.0);
      model.feed_index_[k * num_r + i] =
          static_cast<int>(model.feed_vars_.size());
      model.feed_vars_.push_back(feed);
    }
  }

  model.routes_of_sink_.resize(num_d);
  model.routes_of_reflector_.resize(num_r);
  for (int j = 0; j < num_d; ++j) {
    const SinkSpec& sink = inst.sinks()[j];
    for (int i = 0; i < num_r; ++i) {
      if (!inst.HasPath(i, j)) continue;
      RouteVar route;
      route.stream = sink.stream;
      route.reflector = i;
      route.sink = j;
      route.weight = *inst.PathWeight(i, j);
      route.first_hop_cost = inst.src_edge(sink.stream, i)->cost;
      route.second_hop_cost = inst.refl_edge(i, j)->cost;
      route.cost = full ? route.second_hop_cost
                        : route.first_hop_cost + route.second_hop_cost;
      route.feed = model.FeedIndex(sink.stream, i);
      route.var = lp.AddVariable(
          absl::StrCat("x_", Sanitize(inst.sources()[sink.stream].id), "_",
                       Sanitize(inst.reflectors()[i].id), "_",
                       Sanitize(sink.id)),
          0.0, 1.0, route.cost);
      const int index = static_cast<int>(model.route_vars_.size());
      model.routes_of_sink_[j].push_back(index);
      model.routes_of_reflector_[i].push_back(index);
      model.route_vars_.push_back(route);
    }
  }

  auto add_row = [&](RowKind kind, std::string name,
                     std::vector<LinearTerm> terms, RowSense sense,
                     double rhs) {
    model.row_kinds_.push_back(kind);
    return lp.AddRow(std::move(name), std::move(terms), sense, rhs);
  };

  // (1) y <= z.
  for (const FeedVar& feed : model.feed_vars_) {
    add_row(RowKind::kReflectorUse,
            absl::StrCat("use_", lp.variable(feed.var).name),
            {{feed.var, 1.0}, {model.z_vars_[feed.reflector], -1.0}},
            RowSense::kLessEqual, 0.0);
  }
  // (2) x <= y.
  for (const RouteVar& route : model.route_vars_) {
    add_row(RowKind::kFeedUse,
            absl::StrCat("feed_", lp.variable(route.var).name),
            {{route.var, 1.0}, {model.feed_vars_[route.feed].var, -1.0}},
            RowSense::kLessEqual, 0.0);
  }

  // (3)/(3'): per reflector capacity.
  for (int i = 0; i < num_r; ++i) {
    const ReflectorSpec& spec = inst.reflectors()[i];
    const std::string rid = Sanitize(spec.id);
    const bool by_bandwidth =
        options.bandwidth && spec.bandwidth_cap.has_value();
    std::vector<LinearTerm> terms;
    for (int r : model.routes_of_reflector_[i]) {
      const RouteVar& route = model.route_vars_[r];
      // Bandwidth rows are divided by F'_i to keep coefficients near 1.
      const double coef = by_bandwidth ? *inst.sources()[route.stream].bitrate /
                                             *spec.bandwidth_cap
                                       : 1.0;
      terms.push_back({route.var, coef});
    }
    if (terms.empty()) continue;
    if (by_bandwidth) {
      terms.push_back({model.z_vars_[i], -1.0});
      add_row(RowKind::kBandwidth, absl::StrCat("bandwidth_", rid),
              std::move(terms), RowSense::kLessEqual, 0.0);
    } else {
      terms.push_back({model.z_vars_[i], -static_cast<double>(spec.fanout)});
      add_row(RowKind::kFanout, absl::StrCat("fanout_", rid), std::move(terms),
              RowSense::kLessEqual, 0.0);
    }
  }

  // (4)/(4'): per (stream, reflector).
  for (size_t f = 0; f < model.feed_vars_.size(); ++f) {
    const FeedVar& feed = model.feed_vars_[f];
    const ReflectorSpec& spec = inst.reflectors()[feed.reflector];
    const bool by_bandwidth =
        options.bandwidth && spec.bandwidth_cap.has_value();
    const double coef = by_bandwidth ? *inst.sources()[feed.stream].bitrate /
                                           *spec.bandwidth_cap
                                     : 1.0;
    std::vector<LinearTerm> terms;
    for (int r : model.routes_of_reflector_[feed.reflector]) {
      const RouteVar& route = model.route_vars_[r];
      if (route.feed == static_cast<int>(f)) terms.push_back({route.var, coef});
    }
    const std::string& yname = lp.variable(feed.var).name;
    if (by_bandwidth) {
      terms.push_back({feed.var, -1.0});
      add_row(RowKind::kBandwidthFeed, absl::StrCat("bwfeed_", yname),
              std::move(terms), RowSense::kLessEqual, 0.0);
    } else {
      terms.push_back({feed.var, -static_cast<double>(spec.fanout)});
      add_row(RowKind::kCuttingPlane, absl::StrCat("cut_", yname),
              std::move(terms), RowSense::kLessEqual, 0.0);
    }
  }

  // (5) one weight row per sink.
  model.weight_rows_.assign(num_d, -1);
  for (int j = 0; j < num_d; ++j) {
    const SinkSpec& sink = inst.sinks()[j];
    std::vector<LinearTerm> terms;
    for (int r : model.routes_of_sink_[j]) {
      const RouteVar& route = model.route_vars_[r];
      if (route.weight > 0.0) terms.push_back({route.var, route.weight});
    }
    model.weight_rows_[j] = add_row(
        RowKind::kWeight, absl::StrCat("weight_", Sanitize(sink.id)),
        std::move(terms), RowSense::kGreaterEqual, sink.weight_threshold);
  }

  // (7) at most one copy per (sink, color).
  if (options.colors) {
    const int num_colors = inst.num_colors();
    for (int j = 0; j < num_d; ++j) {
      for (int color = 1; color <= num_colors; ++color) {
        std::vector<LinearTerm> terms;
        for (int r : model.routes_of_sink_[j]) {
          const RouteVar& route = model.route_vars_[r];
          if (inst.reflectors()[route.reflector].color == color) {
            terms.push_back({route.var, 1.0});
          }
        }
        // A single variable is already bounded by 1.
        if (terms.size() < 2) continue;
        add_row(
            RowKind::kColor,
            absl::StrCat("color_", Sanitize(inst.sinks()[j].id), "_", color),
            std::move(terms), RowSense::kLessEqual, 1.0);
      }
    }
  }

  if (std::optional<InfeasibilityCertificate> cert =
          CheckSinkFeasibility(model);
      cert.has_value()) {
    return absl::FailedPreconditionError(
        absl::StrCat("infeasible: ", cert->ToString()));
  }
  return model;
}

std::string InfeasibilityCertificate::ToString() const {
  std::vector<std::string> parts;
  for (const InfeasibleSink& s : sinks) {
    parts.push_back(
        absl::StrFormat("sink %s reaches total weight %.6g < threshold %.6g",
                        s.sink, s.max_weight, s.threshold));
  }
  if (!rows.empty()) {
    parts.push_back(absl::StrCat("rows not jointly satisfiable: ",
                                 absl::StrJoin(rows, ", ")));
  }
  return absl::StrJoin(parts, "; ");
}

std::optional<InfeasibilityCertificate> CheckSinkFeasibility(
    const LpModel& model) {
  const Instance& inst = model.instance();
  InfeasibilityCertificate cert;
  for (int j = 0; j < inst.num_sinks(); ++j) {
    const SinkSpec& sink = inst.sinks()[j];
    double total = 0.0;
    for (int r : model.routes_of_sink(j)) total += model.route_vars()[r].weight;
    if (total < sink.weight_threshold - kWeightTolerance) {
      cert.sinks.push_back({sink.id, total, sink.weight_threshold});
    }
  }
  if (cert.sinks.empty()) return std::nullopt;
  return cert;
}

FractionalSolution SolveLp(const LpModel& model,
                           const SimplexOptions& options) {
  FractionalSolution out;
  const LpResult result = SolveLinearProgram(model.program(), options);
  out.iterations = result.iterations;
  switch (result.status) {
    case LpStatus::kOptimal:
      break;
    case LpStatus::kInfeasible: {
      out.status = SolveStatus::kInfeasible;
      InfeasibilityCertificate cert;
      if (std::optional<InfeasibilityCertificate> sinks =
              CheckSinkFeasibility(model);
          sinks.has_value()) {
        cert = *sinks;
      }
      for (int row : result.infeasible_rows) {
        cert.rows.push_back(model.program().row(row).name);
      }
      out.message = cert.ToString();
      out.certificate = std::move(cert);
      return out;
    }
    case LpStatus::kTimeLimit:
    case LpStatus::kIterationLimit:
      out.status = SolveStatus::kTimeout;
      out.message = LpStatusName(result.status);
      return out;
    case LpStatus::kUnbounded:
      // Every variable is boxed, so this can only be a solver defect.
      out.status = SolveStatus::kError;
      out.message = "internal error: LP reported unbounded";
      return out;
  }
  out.status = SolveStatus::kOptimal;
  out.values = result.values;
  for (double& v : out.values) {
    if (std::abs(v) < kSnapTolerance) v = 0.0;
    if (std::abs(v - 1.0) < kSnapTolerance) v = 1.0;
    v = std::clamp(v, 0.0, 1.0);
  }
  out.objective = model.program().Objective(out.values);
  return out;
}

nlohmann::json SolutionToJson(const LpModel& model,
                              std::span<const double> values) {
  nlohmann::json doc = nlohmann::json::object();
  const LinearProgram& lp = model.program();
  for (int v = 0; v < lp.num_variables(); ++v) {
    doc[lp.variable(v).name] = values[v];
  }
  return doc;
}

}  // namespace overlay
