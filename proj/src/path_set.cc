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

#include "overlay/path_set.h"

#include <algorithm>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace overlay {

int PathSet::num_copies() const {
  int total = 0;
  for (const std::vector<int>& r : routes) total += static_cast<int>(r.size());
  return total;
}

CostSplit ComputeCost(const Instance& instance, CostMode mode,
                      const PathSet& paths) {
  CostSplit cost;
  for (int j = 0; j < static_cast<int>(paths.routes.size()); ++j) {
    const int k = instance.sinks()[j].stream;
    for (int i : paths.routes[j]) {
      const std::optional<EdgeSpec>& second = instance.refl_edge(i, j);
      if (second.has_value()) cost.second_hop += second->cost;
      if (mode == CostMode::kTransmission) {
        const std::optional<EdgeSpec>& first = instance.src_edge(k, i);
        if (first.has_value()) cost.first_hop += first->cost;
      }
    }
  }
  if (mode == CostMode::kFull) {
    for (int i : paths.reflectors) {
      cost.reflector += instance.reflectors()[i].fixed_cost;
    }
    for (const auto& [k, i] : paths.feeds) {
      const std::optional<EdgeSpec>& first = instance.src_edge(k, i);
      if (first.has_value()) cost.first_hop += first->cost;
    }
  }
  return cost;
}

PathSet PathSetFromValues(const LpModel& model, std::span<const double> values,
                          std::string algorithm) {
  const Instance& inst = model.instance();
  PathSet paths;
  paths.algorithm = std::move(algorithm);
  for (int i = 0; i < inst.num_reflectors(); ++i) {
    if (values[model.z_var(i)] > 0.5) paths.reflectors.push_back(i);
  }
  for (const FeedVar& feed : model.feed_vars()) {
    if (values[feed.var] > 0.5)
      paths.feeds.push_back({feed.stream, feed.reflector});
  }
  std::sort(paths.feeds.begin(), paths.feeds.end());
  paths.routes.resize(inst.num_sinks());
  for (const RouteVar& route : model.route_vars()) {
    if (values[route.var] > 0.5)
      paths.routes[route.sink].push_back(route.reflector);
  }
  for (std::vector<int>& r : paths.routes) std::sort(r.begin(), r.end());
  paths.cost = ComputeCost(inst, model.options().mode, paths);
  return paths;
}

PathSet PathSetFromRoutes(const Instance& instance, CostMode mode,
                          std::vector<std::vector<int>> routes,
                          std::string algorithm) {
  PathSet paths;
  paths.algorithm = std::move(algorithm);
  std::set<int> reflectors;
  std::set<std::pair<int, int>> feeds;
  for (int j = 0; j < static_cast<int>(routes.size()); ++j) {
    std::sort(routes[j].begin(), routes[j].end());
    for (int i : routes[j]) {
      reflectors.insert(i);
      feeds.insert({instance.sinks()[j].stream, i});
    }
  }
  paths.reflectors.assign(reflectors.begin(), reflectors.end());
  paths.feeds.assign(feeds.begin(), feeds.end());
  paths.routes = std::move(routes);
  paths.cost = ComputeCost(instance, mode, paths);
  return paths;
}

std::vector<double> PathSetValues(const LpModel& model, const PathSet& paths) {
  std::vector<double> values(model.program().num_variables(), 0.0);
  for (int i : paths.reflectors) values[model.z_var(i)] = 1.0;
  for (const auto& [k, i] : paths.feeds) {
    const int f = model.FeedIndex(k, i);
    if (f >= 0) values[model.feed_vars()[f].var] = 1.0;
  }
  for (int j = 0; j < static_cast<int>(paths.routes.size()); ++j) {
    for (int r : model.routes_of_sink(j)) {
      const RouteVar& route = model.route_vars()[r];
      if (std::binary_search(paths.routes[j].begin(), paths.routes[j].end(),
                             route.reflector)) {
        values[route.var] = 1.0;
      }
    }
  }
  return values;
}

nlohmann::json PathSetToJson(const Instance& instance, const PathSet& paths) {
  nlohmann::json doc;
  doc["algorithm"] = paths.algorithm;
  doc["cost"] = {{"reflector", paths.cost.reflector},
                 {"first_hop", paths.cost.first_hop},
                 {"second_hop", paths.cost.second_hop},
                 {"total", paths.cost.total()}};
  nlohmann::json reflectors = nlohmann::json::array();
  for (int i : paths.reflectors)
    reflectors.push_back(instance.reflectors()[i].id);
  doc["reflectors"] = std::move(reflectors);
  nlohmann::json feeds = nlohmann::json::array();
  for (const auto& [k, i] : paths.feeds) {
    feeds.push_back({{"stream", instance.sources()[k].id},
                     {"reflector", instance.reflectors()[i].id}});
  }
  doc["feeds"] = std::move(feeds);
  nlohmann::json routes = nlohmann::json::array();
  for (int j = 0; j < static_cast<int>(paths.routes.size()); ++j) {
    nlohmann::json via = nlohmann::json::array();
    for (int i : paths.routes[j]) via.push_back(instance.reflectors()[i].id);
    routes.push_back(
        {{"sink", instance.sinks()[j].id},
         {"stream", instance.sources()[instance.sinks()[j].stream].id},
         {"reflectors", std::move(via)}});
  }
  doc["routes"] = std::move(routes);
  return doc;
}

absl::StatusOr<PathSet> PathSetFromJson(const Instance& instance,
                                        const nlohmann::json& doc) {
  if (!doc.is_object())
    return absl::InvalidArgumentError("solution: not an object");
  PathSet paths;
  paths.routes.resize(instance.num_sinks());
  try {
    paths.algorithm = doc.value("algorithm", "");
    if (doc.contains("cost")) {
      const nlohmann::json& cost = doc.at("cost");
      paths.cost.reflector = cost.at("reflector").get<double>();
      paths.cost.first_hop = cost.at("first_hop").get<double>();
      paths.cost.second_hop = cost.at("second_hop").get<double>();
    }
    for (const nlohmann::json& id : doc.at("reflectors")) {
      const int i = instance.FindReflector(id.get<std::string>());
      if (i < 0) {
        return absl::InvalidArgumentError(
            absl::StrCat("reflectors: unknown reflector ", id.dump()));
      }
      paths.reflectors.push_back(i);
    }
    for (const nlohmann::json& feed : doc.at("feeds")) {
      const int k = instance.FindSource(feed.at("stream").get<std::string>());
      const int i =
          instance.FindReflector(feed.at("reflector").get<std::string>());
      if (k < 0 || i < 0) {
        return absl::InvalidArgumentError(
            absl::StrCat("feeds: dangling reference ", feed.dump()));
      }
      paths.feeds.push_back({k, i});
    }
    for (const nlohmann::json& route : doc.at("routes")) {
      const int j = instance.FindSink(route.at("sink").get<std::string>());
      if (j < 0) {
        return absl::InvalidArgumentError(
            absl::StrCat("routes: unknown sink ", route.at("sink").dump()));
      }
      for (const nlohmann::json& id : route.at("reflectors")) {
        const int i = instance.FindReflector(id.get<std::string>());
        if (i < 0) {
          return absl::InvalidArgumentError(
              absl::StrCat("routes[", route.at("sink").get<std::string>(),
                           "]: unknown reflector ", id.dump()));
        }
        paths.routes[j].push_back(i);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("solution: ", e.what()));
  }
  std::sort(paths.reflectors.begin(), paths.reflectors.end());
  std::sort(paths.feeds.begin(), paths.feeds.end());
  for (std::vector<int>& r : paths.routes) std::sort(r.begin(), r.end());
  return paths;
}

}  // namespace overlay
