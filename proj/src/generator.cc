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

#include "overlay/generator.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "overlay/random.h"

namespace overlay {
namespace {

constexpr int kMaxAttempts = 100;

std::pair<double, double> RegimeRange(Regime regime) {
  switch (regime) {
    case Regime::kLow:
      return {0.0, 0.01};
    case Regime::kAvg:
      return {0.005, 0.05};
    case Regime::kHigh:
      return {0.02, 0.20};
  }
  return {0.0, 0.0};
}

// One draw; nullopt when the planted routing runs out of capacity.
std::optional<RawInstance> DrawInstance(const RandomInstanceOptions& options,
                                        Rng& rng) {
  const int num_s = options.sources;
  const int num_r = options.reflectors;
  const int num_d = options.sinks;
  const auto [loss_lo, loss_hi] =
      options.loss_range.value_or(RegimeRange(options.regime));
  const int fanout_hi = std::max(
      2, static_cast<int>(std::ceil(2.0 * num_d / static_cast<double>(num_r))));

  RawInstance raw;
  raw.mode = options.mode;
  raw.colors_enabled = options.colors > 0;
  raw.bandwidth_enabled = options.bandwidth;
  for (int k = 0; k < num_s; ++k) {
    RawSource source;
    source.id = absl::StrCat("s", k + 1);
    if (options.bandwidth) source.bitrate = options.bitrate;
    raw.sources.push_back(std::move(source));
  }
  for (int i = 0; i < num_r; ++i) {
    RawReflector reflector;
    reflector.id = absl::StrCat("r", i + 1);
    reflector.fixed_cost = rng.Uniform(5.0, 50.0);
    reflector.fanout = static_cast<int>(rng.UniformInt(2, fanout_hi));
    if (options.colors > 0) {
      reflector.color = static_cast<int>(rng.UniformInt(1, options.colors));
    }
    if (options.bandwidth) {
      reflector.bandwidth_cap =
          reflector.fanout * options.bitrate * rng.Uniform(1.0, 1.5);
    }
    raw.reflectors.push_back(std::move(reflector));
  }
  std::vector<int> stream(num_d);
  for (int j = 0; j < num_d; ++j) {
    stream[j] = j < num_s ? j : static_cast<int>(rng.UniformInt(0, num_s - 1));
  }

  // Links. loss < 0 marks an absent link.
  std::vector<double> src_loss(static_cast<size_t>(num_s) * num_r, -1.0);
  std::vector<double> refl_loss(static_cast<size_t>(num_r) * num_d, -1.0);
  for (int k = 0; k < num_s; ++k) {
    for (int i = 0; i < num_r; ++i) {
      const bool present = rng.Uniform01() < options.density;
      const double loss = rng.Uniform(loss_lo, loss_hi);
      const double cost = rng.Uniform(1.0, 10.0);
      if (!present) continue;
      src_loss[k * num_r + i] = loss;
      raw.src_edges.push_back(
          {raw.sources[k].id, raw.reflectors[i].id, loss, cost});
    }
  }
  for (int i = 0; i < num_r; ++i) {
    for (int j = 0; j < num_d; ++j) {
      const bool present = rng.Uniform01() < options.density;
      const double loss = rng.Uniform(loss_lo, loss_hi);
      const double cost = rng.Uniform(1.0, 10.0);
      if (!present) continue;
      refl_loss[i * num_d + j] = loss;
      raw.refl_edges.push_back(
          {raw.reflectors[i].id, absl::StrCat("d", j + 1), loss, cost});
    }
  }

  // Planted routing: one reflector per sink first so that capacity goes to
  // coverage, then up to two more per sink while fan-out remains.
  std::vector<int> spare(num_r);
  for (int i = 0; i < num_r; ++i) spare[i] = raw.reflectors[i].fanout;
  std::vector<int> wanted(num_d);
  std::vector<double> slack(num_d);
  for (int j = 0; j < num_d; ++j) {
    wanted[j] = static_cast<int>(rng.UniformInt(1, 3));
    slack[j] = rng.Uniform(1.0, 1.5);
  }
  std::vector<std::vector<int>> planted(num_d);
  for (int round = 0; round < 3; ++round) {
    for (int j = 0; j < num_d; ++j) {
      if (static_cast<int>(planted[j].size()) >= wanted[j]) continue;
      const int k = stream[j];
      std::vector<int> candidates;
      for (int i = 0; i < num_r; ++i) {
        if (spare[i] <= 0 || src_loss[k * num_r + i] < 0.0 ||
            refl_loss[i * num_d + j] < 0.0 ||
            std::count(planted[j].begin(), planted[j].end(), i) > 0) {
          continue;
        }
        if (options.colors > 0) {
          bool repeat = false;
          for (int used : planted[j]) {
            repeat =
                repeat || raw.reflectors[used].color == raw.reflectors[i].color;
          }
          if (repeat) continue;
        }
        candidates.push_back(i);
      }
      if (candidates.empty()) {
        if (round == 0) return std::nullopt;
        continue;
      }
      const int i = candidates[rng.UniformInt(
          0, static_cast<int64_t>(candidates.size()) - 1)];
      --spare[i];
      planted[j].push_back(i);
    }
  }
  for (int j = 0; j < num_d; ++j) {
    const int k = stream[j];
    double product = 1.0;
    for (int i : planted[j]) {
      product *=
          CombinedLoss(src_loss[k * num_r + i], refl_loss[i * num_d + j]);
    }
    RawSink sink;
    sink.id = absl::StrCat("d", j + 1);
    sink.stream = raw.sources[k].id;
    sink.loss_threshold =
        product > 0.0 ? std::min(1.0, slack[j] * product) : 1e-6;
    raw.sinks.push_back(std::move(sink));
  }
  return raw;
}

}  // namespace

const char* RegimeName(Regime regime) {
  switch (regime) {
    case Regime::kLow:
      return "low";
    case Regime::kAvg:
      return "avg";
    case Regime::kHigh:
      return "high";
  }
  return "unknown";
}

std::optional<Regime> ParseRegime(const std::string& name) {
  if (name == "low") return Regime::kLow;
  if (name == "avg") return Regime::kAvg;
  if (name == "high") return Regime::kHigh;
  return std::nullopt;
}

absl::StatusOr<Instance> GenerateRandom(const RandomInstanceOptions& options) {
  if (options.sources < 1 || options.reflectors < 1 || options.sinks < 1) {
    return absl::InvalidArgumentError("sizes must be at least 1x1x1");
  }
  if (options.sources > options.sinks) {
    return absl::InvalidArgumentError("need at most as many sources as sinks");
  }
  if (!(options.density > 0.0 && options.density <= 1.0)) {
    return absl::InvalidArgumentError("density must be in (0, 1]");
  }
  if (options.colors < 0) {
    return absl::InvalidArgumentError("colors must be >= 0");
  }
  if (options.loss_range.has_value() &&
      !(0.0 <= options.loss_range->first &&
        options.loss_range->first <= options.loss_range->second &&
        options.loss_range->second < 1.0)) {
    return absl::InvalidArgumentError(
        "loss range must satisfy 0 <= lo <= hi < 1");
  }
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(DeriveSeed(options.seed, static_cast<uint64_t>(attempt)));
    std::optional<RawInstance> raw = DrawInstance(options, rng);
    if (raw.has_value()) return Normalize(*raw);
  }
  return absl::FailedPreconditionError(absl::StrFormat(
      "no feasible draw in %d attempts for %dx%dx%d at density %g; raise the "
      "density or use fewer sinks per reflector",
      kMaxAttempts, options.sources, options.reflectors, options.sinks,
      options.density));
}

absl::StatusOr<Instance> GenerateSetCover(
    int universe_size, const std::vector<std::vector<int>>& sets) {
  if (universe_size < 1) {
    return absl::InvalidArgumentError("universe must be non-empty");
  }
  if (sets.empty()) return absl::InvalidArgumentError("no sets given");
  std::vector<uint8_t> covered(universe_size + 1, 0);
  for (size_t s = 0; s < sets.size(); ++s) {
    for (int e : sets[s]) {
      if (e < 1 || e > universe_size) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "sets[%d]: element %d outside 1..%d", s, e, universe_size));
      }
      covered[e] = 1;
    }
  }
  for (int e = 1; e <= universe_size; ++e) {
    if (!covered[e]) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "element %d is in no set; the instance is infeasible", e));
    }
  }

  RawInstance raw;
  raw.sources.push_back({"s1", std::nullopt, std::nullopt});
  for (size_t s = 0; s < sets.size(); ++s) {
    RawReflector reflector;
    reflector.id = absl::StrCat("r", s + 1);
    reflector.fixed_cost = 1.0;
    reflector.fanout = universe_size;
    raw.reflectors.push_back(std::move(reflector));
    raw.src_edges.push_back({"s1", raw.reflectors.back().id, 0.0, 0.0});
  }
  for (int e = 1; e <= universe_size; ++e) {
    RawSink sink;
    sink.id = absl::StrCat("d", e);
    sink.stream = "s1";
    sink.loss_threshold = 0.5;
    raw.sinks.push_back(std::move(sink));
  }
  for (size_t s = 0; s < sets.size(); ++s) {
    std::vector<int> elements = sets[s];
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()),
                   elements.end());
    for (int e : elements) {
      raw.refl_edges.push_back(
          {raw.reflectors[s].id, absl::StrCat("d", e), 0.5, 0.0});
    }
  }
  return Normalize(raw);
}

std::vector<std::vector<int>> RandomSetSystem(int universe_size, int num_sets,
                                              uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<int>> sets(num_sets);
  std::vector<uint8_t> covered(universe_size + 1, 0);
  for (auto& set : sets) {
    for (int e = 1; e <= universe_size; ++e) {
      if (rng.Uniform01() < 0.35) {
        set.push_back(e);
        covered[e] = 1;
      }
    }
  }
  for (int e = 1; e <= universe_size; ++e) {
    if (covered[e]) continue;
    auto& set = sets[rng.UniformInt(0, num_sets - 1)];
    set.insert(std::upper_bound(set.begin(), set.end(), e), e);
  }
  return sets;
}

}  // namespace overlay
