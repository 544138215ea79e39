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

#include "overlay/verify.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <thread>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "overlay/random.h"

namespace overlay {
namespace {

constexpr int64_t kShardPackets = 1 << 15;

}  // namespace

const char* GuaranteeProfileName(GuaranteeProfile profile) {
  switch (profile) {
    case GuaranteeProfile::kExact:
      return "exact";
    case GuaranteeProfile::kApprox:
      return "approx";
    case GuaranteeProfile::kColor:
      return "color";
  }
  return "unknown";
}

absl::StatusOr<AuditReport> Audit(const Instance& instance,
                                  const PathSet& paths,
                                  GuaranteeProfile profile) {
  const int num_r = instance.num_reflectors();
  const int num_d = instance.num_sinks();
  if (static_cast<int>(paths.routes.size()) != num_d) {
    return absl::InvalidArgumentError(
        absl::StrFormat("solution lists %d sinks, instance has %d",
                        paths.routes.size(), num_d));
  }
  for (int i : paths.reflectors) {
    if (i < 0 || i >= num_r) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown reflector index ", i));
    }
  }
  for (const auto& [k, i] : paths.feeds) {
    if (k < 0 || k >= instance.num_sources() || i < 0 || i >= num_r ||
        !instance.src_edge(k, i).has_value()) {
      return absl::InvalidArgumentError(
          absl::StrCat("feed (", k, ", ", i, ") uses no existing link"));
    }
  }
  for (int j = 0; j < num_d; ++j) {
    for (int i : paths.routes[j]) {
      if (i < 0 || i >= num_r || !instance.HasPath(i, j)) {
        return absl::InvalidArgumentError(
            absl::StrCat("route of sink ", instance.sinks()[j].id,
                         " via reflector index ", i, " uses an absent link"));
      }
    }
  }

  AuditReport report;
  report.profile = profile;
  auto violate = [&](std::string what) {
    report.violations.push_back(std::move(what));
  };

  // Structure: routes need their feed and reflector, no duplicates.
  for (int j = 0; j < num_d; ++j) {
    const std::vector<int>& via = paths.routes[j];
    const int k = instance.sinks()[j].stream;
    for (size_t a = 0; a < via.size(); ++a) {
      if (std::count(via.begin(), via.end(), via[a]) > 1) {
        violate(absl::StrCat("sink ", instance.sinks()[j].id,
                             " lists a reflector twice"));
        break;
      }
      if (!std::binary_search(paths.feeds.begin(), paths.feeds.end(),
                              std::make_pair(k, via[a]))) {
        violate(absl::StrCat("route ", instance.sinks()[j].id, " via ",
                             instance.reflectors()[via[a]].id,
                             " has no feed from its source"));
      }
    }
  }
  for (const auto& [k, i] : paths.feeds) {
    if (!std::binary_search(paths.reflectors.begin(), paths.reflectors.end(),
                            i)) {
      violate(absl::StrCat("feed into ", instance.reflectors()[i].id,
                           " but the reflector is closed"));
    }
  }

  const double weight_factor =
      profile == GuaranteeProfile::kApprox ? 0.25 : 1.0;
  const double copy_factor = profile == GuaranteeProfile::kApprox ? 4.0 : 1.0;

  std::vector<int> copies(num_r, 0);
  std::vector<double> bandwidth(num_r, 0.0);
  for (int j = 0; j < num_d; ++j) {
    const SinkSpec& sink = instance.sinks()[j];
    SinkReport sr;
    sr.sink = j;
    sr.copies = static_cast<int>(paths.routes[j].size());
    sr.analytic_loss = AnalyticLoss(instance, paths.routes[j], j);
    std::map<int, int> per_color;
    for (int i : paths.routes[j]) {
      sr.weight += *instance.PathWeight(i, j);
      ++copies[i];
      if (instance.sources()[sink.stream].bitrate.has_value()) {
        bandwidth[i] += *instance.sources()[sink.stream].bitrate;
      }
      if (const std::optional<int>& color = instance.reflectors()[i].color;
          color.has_value()) {
        sr.max_copies_per_color =
            std::max(sr.max_copies_per_color, ++per_color[*color]);
      }
    }
    sr.weight_ratio =
        sink.weight_threshold > 0.0 ? sr.weight / sink.weight_threshold : 1.0;
    if (profile == GuaranteeProfile::kColor) {
      if (sink.weight_threshold > 0.0 && sr.copies == 0) {
        sr.ok = false;
        violate(absl::StrCat("sink ", sink.id, " is not served"));
      }
      if (sr.max_copies_per_color > 13) {
        sr.ok = false;
        violate(absl::StrFormat("sink %s: %d copies of one color", sink.id,
                                sr.max_copies_per_color));
      }
    } else {
      if (sr.weight <
          weight_factor * sink.weight_threshold - kWeightTolerance) {
        sr.ok = false;
        violate(absl::StrFormat("sink %s: weight %.9g below %.9g", sink.id,
                                sr.weight,
                                weight_factor * sink.weight_threshold));
      }
      if (profile == GuaranteeProfile::kExact && instance.colors_enabled() &&
          sr.max_copies_per_color > 1) {
        sr.ok = false;
        violate(absl::StrFormat("sink %s: %d copies of one color", sink.id,
                                sr.max_copies_per_color));
      }
    }
    if (sink.weight_threshold > 0.0) {
      report.min_weight_ratio =
          std::min(report.min_weight_ratio, sr.weight_ratio);
    }
    report.max_copies_per_color =
        std::max(report.max_copies_per_color, sr.max_copies_per_color);
    report.sinks.push_back(sr);
  }

  for (int i = 0; i < num_r; ++i) {
    const ReflectorSpec& spec = instance.reflectors()[i];
    ReflectorReport rr;
    rr.reflector = i;
    rr.copies = copies[i];
    rr.fanout_ratio = static_cast<double>(copies[i]) / spec.fanout;
    const bool by_bandwidth =
        instance.bandwidth_enabled() && spec.bandwidth_cap.has_value();
    if (by_bandwidth) {
      rr.bandwidth = bandwidth[i];
      rr.bandwidth_ratio = bandwidth[i] / *spec.bandwidth_cap;
      report.max_bandwidth_ratio =
          std::max(report.max_bandwidth_ratio, rr.bandwidth_ratio);
    }
    if (profile != GuaranteeProfile::kColor) {
      const double ratio = by_bandwidth ? rr.bandwidth_ratio : rr.fanout_ratio;
      if (ratio > copy_factor * (1.0 + 1e-12)) {
        rr.ok = false;
        violate(absl::StrFormat("reflector %s: %s ratio %.6g exceeds %g",
                                spec.id, by_bandwidth ? "bandwidth" : "fan-out",
                                ratio, copy_factor));
      }
    }
    report.max_fanout_ratio =
        std::max(report.max_fanout_ratio, rr.fanout_ratio);
    report.reflectors.push_back(rr);
  }

  report.cost = ComputeCost(instance, instance.mode(), paths);
  report.declared_cost = paths.cost.total();
  report.cost_matches = std::abs(report.cost.total() - report.declared_cost) <=
                        1e-6 * std::max(1.0, std::abs(report.declared_cost));
  if (!report.cost_matches) {
    violate(absl::StrFormat("declared cost %.9g differs from recomputed %.9g",
                            report.declared_cost, report.cost.total()));
  }
  return report;
}

nlohmann::json AuditToJson(const Instance& instance,
                           const AuditReport& report) {
  nlohmann::json sinks = nlohmann::json::array();
  for (const SinkReport& sr : report.sinks) {
    const SinkSpec& sink = instance.sinks()[sr.sink];
    sinks.push_back({{"sink", sink.id},
                     {"copies", sr.copies},
                     {"weight", sr.weight},
                     {"weight_threshold", sink.weight_threshold},
                     {"weight_ratio", sr.weight_ratio},
                     {"analytic_loss", sr.analytic_loss},
                     {"loss_threshold", sink.loss_threshold},
                     {"max_copies_per_color", sr.max_copies_per_color},
                     {"ok", sr.ok}});
  }
  nlohmann::json reflectors = nlohmann::json::array();
  for (const ReflectorReport& rr : report.reflectors) {
    nlohmann::json entry = {
        {"reflector", instance.reflectors()[rr.reflector].id},
        {"copies", rr.copies},
        {"fanout_ratio", rr.fanout_ratio},
        {"ok", rr.ok}};
    if (instance.bandwidth_enabled()) {
      entry["bandwidth"] = rr.bandwidth;
      entry["bandwidth_ratio"] = rr.bandwidth_ratio;
    }
    reflectors.push_back(std::move(entry));
  }
  return {{"profile", GuaranteeProfileName(report.profile)},
          {"passed", report.passed()},
          {"violations", report.violations},
          {"cost",
           {{"reflector", report.cost.reflector},
            {"first_hop", report.cost.first_hop},
            {"second_hop", report.cost.second_hop},
            {"total", report.cost.total()},
            {"declared", report.declared_cost},
            {"matches", report.cost_matches}}},
          {"min_weight_ratio", report.min_weight_ratio},
          {"max_fanout_ratio", report.max_fanout_ratio},
          {"max_bandwidth_ratio", report.max_bandwidth_ratio},
          {"max_copies_per_color", report.max_copies_per_color},
          {"sinks", std::move(sinks)},
          {"reflectors", std::move(reflectors)}};
}

LossSimulation SimulateAllLosses(const Instance& instance, const PathSet& paths,
                                 int64_t packets, uint64_t seed, int workers) {
  const int num_d = instance.num_sinks();
  // Distinct first-hop links in use, and each route's slot in that list.
  std::vector<std::pair<int, int>> first_links;
  struct Route {
    int sink;
    int first;  // index into first_links
    double first_loss;
    double second_loss;
  };
  std::vector<Route> routes;
  std::map<std::pair<int, int>, int> first_index;
  for (int j = 0; j < num_d; ++j) {
    const int k = instance.sinks()[j].stream;
    for (int i : paths.routes[j]) {
      auto [it, inserted] =
          first_index.try_emplace({k, i}, static_cast<int>(first_links.size()));
      if (inserted) first_links.push_back({k, i});
      routes.push_back({j, it->second, instance.src_edge(k, i)->loss,
                        instance.refl_edge(i, j)->loss});
    }
  }
  std::vector<double> first_loss(first_links.size());
  for (size_t f = 0; f < first_links.size(); ++f) {
    first_loss[f] =
        instance.src_edge(first_links[f].first, first_links[f].second)->loss;
  }

  const int64_t num_shards = (packets + kShardPackets - 1) / kShardPackets;
  auto run_shard = [&](int64_t shard, std::vector<int64_t>& lost) {
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(shard)));
    const int64_t begin = shard * kShardPackets;
    const int64_t end = std::min(packets, begin + kShardPackets);
    std::vector<uint8_t> first_dropped(first_links.size());
    std::vector<uint8_t> delivered(num_d);
    for (int64_t p = begin; p < end; ++p) {
      for (size_t f = 0; f < first_links.size(); ++f) {
        first_dropped[f] = rng.Bernoulli(first_loss[f]) ? 1 : 0;
      }
      std::fill(delivered.begin(), delivered.end(), 0);
      for (const Route& route : routes) {
        const bool second_dropped = rng.Bernoulli(route.second_loss);
        if (!first_dropped[route.first] && !second_dropped) {
          delivered[route.sink] = 1;
        }
      }
      for (int j = 0; j < num_d; ++j) lost[j] += delivered[j] ? 0 : 1;
    }
  };

  workers = std::max(1, workers);
  std::vector<std::vector<int64_t>> partial(workers,
                                            std::vector<int64_t>(num_d, 0));
  if (workers == 1) {
    for (int64_t s = 0; s < num_shards; ++s) run_shard(s, partial[0]);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        for (int64_t s = w; s < num_shards; s += workers)
          run_shard(s, partial[w]);
      });
    }
    for (std::thread& t : threads) t.join();
  }
  LossSimulation out;
  out.packets = packets;
  out.lost.assign(num_d, 0);
  for (const std::vector<int64_t>& part : partial) {
    for (int j = 0; j < num_d; ++j) out.lost[j] += part[j];
  }
  return out;
}

double SimulateLoss(const Instance& instance, const PathSet& paths, int sink,
                    int64_t packets, uint64_t seed, int workers) {
  if (paths.routes[sink].empty()) {
    std::cerr << "warning: sink " << instance.sinks()[sink].id
              << " has no route; every packet is lost\n";
    return 1.0;
  }
  PathSet single;
  single.routes.resize(instance.num_sinks());
  single.routes[sink] = paths.routes[sink];
  return SimulateAllLosses(instance, single, packets, seed, workers).rate(sink);
}

}  // namespace overlay
