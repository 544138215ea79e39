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

#include "overlay/instance_io.h"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace overlay {
namespace {

using nlohmann::json;

absl::Status CheckKeys(const json& obj, const std::string& where,
                       std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ": expected an object"));
  }
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!keys.count(item.key())) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": unknown key '", item.key(), "'"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::string> GetString(const json& obj, const char* key,
                                      const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ".", key, ": expected a string"));
  }
  return it->get<std::string>();
}

absl::StatusOr<double> GetNumber(const json& obj, const char* key,
                                 const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ".", key, ": expected a number"));
  }
  return it->get<double>();
}

absl::StatusOr<std::optional<double>> GetOptionalNumber(
    const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::optional<double>();
  if (!it->is_number()) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ".", key, ": expected a number"));
  }
  return std::optional<double>(it->get<double>());
}

absl::StatusOr<int> GetInt(const json& obj, const char* key,
                           const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer()) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, ".", key, ": expected an integer"));
  }
  return it->get<int>();
}

absl::StatusOr<const json*> GetArray(const json& obj, const char* key,
                                     const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) {
    return absl::InvalidArgumentError(
        absl::StrCat(where, key, ": expected an array"));
  }
  return &*it;
}

#define OVERLAY_ASSIGN_OR_RETURN(lhs, expr)     \
  auto lhs##_or = (expr);                       \
  if (!lhs##_or.ok()) return lhs##_or.status(); \
  auto lhs = *std::move(lhs##_or)

absl::StatusOr<RawEdge> ParseEdge(const json& e, const std::string& where) {
  if (auto st = CheckKeys(e, where, {"from", "to", "loss", "cost"}); !st.ok()) {
    return st;
  }
  OVERLAY_ASSIGN_OR_RETURN(from, GetString(e, "from", where));
  OVERLAY_ASSIGN_OR_RETURN(to, GetString(e, "to", where));
  OVERLAY_ASSIGN_OR_RETURN(loss, GetNumber(e, "loss", where));
  OVERLAY_ASSIGN_OR_RETURN(cost, GetNumber(e, "cost", where));
  return RawEdge{from, to, loss, cost};
}

}  // namespace

absl::StatusOr<RawInstance> RawInstanceFromJson(const json& doc) {
  if (auto st = CheckKeys(
          doc, "instance",
          {"sources", "reflectors", "sinks", "src_edges", "refl_edges", "mode",
           "colors_enabled", "bandwidth_enabled"});
      !st.ok()) {
    return st;
  }
  RawInstance raw;

  OVERLAY_ASSIGN_OR_RETURN(sources, GetArray(doc, "sources", ""));
  for (size_t s = 0; s < sources->size(); ++s) {
    const json& src = (*sources)[s];
    const std::string where = absl::StrCat("sources[", s, "]");
    if (auto st = CheckKeys(src, where, {"id", "bitrate", "streams"});
        !st.ok()) {
      return st;
    }
    RawSource out;
    OVERLAY_ASSIGN_OR_RETURN(id, GetString(src, "id", where));
    out.id = id;
    OVERLAY_ASSIGN_OR_RETURN(bitrate, GetOptionalNumber(src, "bitrate", where));
    out.bitrate = bitrate;
    if (src.contains("streams")) {
      OVERLAY_ASSIGN_OR_RETURN(streams, GetArray(src, "streams", where + "."));
      out.streams.emplace();
      for (size_t t = 0; t < streams->size(); ++t) {
        const json& stream = (*streams)[t];
        const std::string w = absl::StrCat(where, ".streams[", t, "]");
        if (auto st = CheckKeys(stream, w, {"id", "bitrate"}); !st.ok()) {
          return st;
        }
        OVERLAY_ASSIGN_OR_RETURN(sid, GetString(stream, "id", w));
        OVERLAY_ASSIGN_OR_RETURN(sbitrate,
                                 GetOptionalNumber(stream, "bitrate", w));
        out.streams->push_back({sid, sbitrate});
      }
    }
    raw.sources.push_back(std::move(out));
  }

  OVERLAY_ASSIGN_OR_RETURN(reflectors, GetArray(doc, "reflectors", ""));
  for (size_t r = 0; r < reflectors->size(); ++r) {
    const json& refl = (*reflectors)[r];
    const std::string where = absl::StrCat("reflectors[", r, "]");
    if (auto st =
            CheckKeys(refl, where,
                      {"id", "fixed_cost", "fanout", "bandwidth_cap", "color"});
        !st.ok()) {
      return st;
    }
    RawReflector out;
    OVERLAY_ASSIGN_OR_RETURN(id, GetString(refl, "id", where));
    OVERLAY_ASSIGN_OR_RETURN(fixed_cost, GetNumber(refl, "fixed_cost", where));
    OVERLAY_ASSIGN_OR_RETURN(fanout, GetInt(refl, "fanout", where));
    OVERLAY_ASSIGN_OR_RETURN(cap,
                             GetOptionalNumber(refl, "bandwidth_cap", where));
    out.id = id;
    out.fixed_cost = fixed_cost;
    out.fanout = fanout;
    out.bandwidth_cap = cap;
    if (refl.contains("color") && !refl["color"].is_null()) {
      OVERLAY_ASSIGN_OR_RETURN(color, GetInt(refl, "color", where));
      out.color = color;
    }
    raw.reflectors.push_back(std::move(out));
  }

  OVERLAY_ASSIGN_OR_RETURN(sinks, GetArray(doc, "sinks", ""));
  for (size_t d = 0; d < sinks->size(); ++d) {
    const json& sink = (*sinks)[d];
    const std::string where = absl::StrCat("sinks[", d, "]");
    if (auto st = CheckKeys(sink, where,
                            {"id", "stream", "loss_threshold", "demands"});
        !st.ok()) {
      return st;
    }
    RawSink out;
    OVERLAY_ASSIGN_OR_RETURN(id, GetString(sink, "id", where));
    out.id = id;
    if (sink.contains("stream")) {
      OVERLAY_ASSIGN_OR_RETURN(stream, GetString(sink, "stream", where));
      out.stream = stream;
    }
    OVERLAY_ASSIGN_OR_RETURN(phi,
                             GetOptionalNumber(sink, "loss_threshold", where));
    out.loss_threshold = phi;
    if (sink.contains("demands")) {
      OVERLAY_ASSIGN_OR_RETURN(demands, GetArray(sink, "demands", where + "."));
      out.demands.emplace();
      for (size_t t = 0; t < demands->size(); ++t) {
        const json& demand = (*demands)[t];
        const std::string w = absl::StrCat(where, ".demands[", t, "]");
        if (auto st = CheckKeys(demand, w, {"stream", "loss_threshold"});
            !st.ok()) {
          return st;
        }
        OVERLAY_ASSIGN_OR_RETURN(stream, GetString(demand, "stream", w));
        OVERLAY_ASSIGN_OR_RETURN(threshold,
                                 GetNumber(demand, "loss_threshold", w));
        out.demands->push_back({stream, threshold});
      }
    }
    raw.sinks.push_back(std::move(out));
  }

  OVERLAY_ASSIGN_OR_RETURN(src_edges, GetArray(doc, "src_edges", ""));
  for (size_t e = 0; e < src_edges->size(); ++e) {
    OVERLAY_ASSIGN_OR_RETURN(
        edge, ParseEdge((*src_edges)[e], absl::StrCat("src_edges[", e, "]")));
    raw.src_edges.push_back(edge);
  }
  OVERLAY_ASSIGN_OR_RETURN(refl_edges, GetArray(doc, "refl_edges", ""));
  for (size_t e = 0; e < refl_edges->size(); ++e) {
    OVERLAY_ASSIGN_OR_RETURN(
        edge, ParseEdge((*refl_edges)[e], absl::StrCat("refl_edges[", e, "]")));
    raw.refl_edges.push_back(edge);
  }

  if (doc.contains("mode")) {
    OVERLAY_ASSIGN_OR_RETURN(mode_name, GetString(doc, "mode", "instance"));
    std::optional<CostMode> mode = ParseCostMode(mode_name);
    if (!mode) {
      return absl::InvalidArgumentError(absl::StrCat(
          "mode: '", mode_name, "' is not one of full, transmission"));
    }
    raw.mode = mode;
  }
  for (const char* flag : {"colors_enabled", "bandwidth_enabled"}) {
    if (!doc.contains(flag)) continue;
    if (!doc[flag].is_boolean()) {
      return absl::InvalidArgumentError(
          absl::StrCat(flag, ": expected a boolean"));
    }
    (std::string(flag) == "colors_enabled" ? raw.colors_enabled
                                           : raw.bandwidth_enabled) =
        doc[flag].get<bool>();
  }
  return raw;
}

#undef OVERLAY_ASSIGN_OR_RETURN

json RawInstanceToJson(const RawInstance& raw) {
  json doc = json::object();
  json sources = json::array();
  for (const RawSource& s : raw.sources) {
    json src = {{"id", s.id}};
    if (s.bitrate) src["bitrate"] = *s.bitrate;
    if (s.streams) {
      json streams = json::array();
      for (const RawStream& t : *s.streams) {
        json stream = {{"id", t.id}};
        if (t.bitrate) stream["bitrate"] = *t.bitrate;
        streams.push_back(stream);
      }
      src["streams"] = streams;
    }
    sources.push_back(src);
  }
  json reflectors = json::array();
  for (const RawReflector& r : raw.reflectors) {
    json refl = {
        {"id", r.id}, {"fixed_cost", r.fixed_cost}, {"fanout", r.fanout}};
    if (r.bandwidth_cap) refl["bandwidth_cap"] = *r.bandwidth_cap;
    if (r.color) refl["color"] = *r.color;
    reflectors.push_back(refl);
  }
  json sinks = json::array();
  for (const RawSink& d : raw.sinks) {
    json sink = {{"id", d.id}};
    if (d.stream) sink["stream"] = *d.stream;
    if (d.loss_threshold) sink["loss_threshold"] = *d.loss_threshold;
    if (d.demands) {
      json demands = json::array();
      for (const RawDemand& m : *d.demands) {
        demands.push_back(
            {{"stream", m.stream}, {"loss_threshold", m.loss_threshold}});
      }
      sink["demands"] = demands;
    }
    sinks.push_back(sink);
  }
  auto edges = [](const std::vector<RawEdge>& list) {
    json out = json::array();
    for (const RawEdge& e : list) {
      out.push_back(
          {{"from", e.from}, {"to", e.to}, {"loss", e.loss}, {"cost", e.cost}});
    }
    return out;
  };
  doc["sources"] = sources;
  doc["reflectors"] = reflectors;
  doc["sinks"] = sinks;
  doc["src_edges"] = edges(raw.src_edges);
  doc["refl_edges"] = edges(raw.refl_edges);
  doc["mode"] = CostModeName(raw.mode.value_or(CostMode::kFull));
  doc["colors_enabled"] = raw.colors_enabled;
  doc["bandwidth_enabled"] = raw.bandwidth_enabled;
  return doc;
}

absl::StatusOr<Instance> ParseInstance(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError("instance: malformed JSON");
  }
  absl::StatusOr<RawInstance> raw = RawInstanceFromJson(doc);
  if (!raw.ok()) return raw.status();
  return Normalize(*raw);
}

absl::StatusOr<Instance> LoadInstance(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseInstance(*text);
}

json InstanceToJson(const Instance& instance) {
  return RawInstanceToJson(ToRaw(instance));
}

std::string SerializeInstance(const Instance& instance) {
  return InstanceToJson(instance).dump(2) + "\n";
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

absl::Status WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  }
  out << contents;
  return out ? absl::OkStatus()
             : absl::InternalError(absl::StrCat("write failed: ", path));
}

}  // namespace overlay
