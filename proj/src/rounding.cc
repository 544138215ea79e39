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

#include "overlay/rounding.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "overlay/random.h"

namespace overlay {
namespace {

constexpr double kConsistencyTolerance = 1e-7;
// Products like z^ * (1 / z^) may land a hair below 1.
constexpr double kSaturationTolerance = 1e-9;

double ClampProbability(double p) {
  return p >= 1.0 - kSaturationTolerance ? 1.0 : std::max(p, 0.0);
}

}  // namespace

double TheoreticalMultiplier(int n) {
  return 64.0 * std::max(1.0, std::log2(static_cast<double>(n)));
}

double SaturationMultiplier(const LpModel& model,
                            const FractionalSolution& frac) {
  double smallest = 1.0;
  auto visit = [&](double v) {
    if (v > 0.0) smallest = std::min(smallest, v);
  };
  for (int i = 0; i < model.instance().num_reflectors(); ++i) {
    visit(frac.values[model.z_var(i)]);
  }
  for (const FeedVar& feed : model.feed_vars()) visit(frac.values[feed.var]);
  return 1.0 / smallest;
}

absl::Status ValidateConfig(const RoundingConfig& config) {
  if (!(config.multiplier > 1.0) || !std::isfinite(config.multiplier)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("multiplier must be > 1, got %g", config.multiplier));
  }
  if (!(config.delta > 0.0 && config.delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must be in (0, 1), got %g", config.delta));
  }
  if (config.max_retries < 1) {
    return absl::InvalidArgumentError("max_retries must be >= 1");
  }
  return absl::OkStatus();
}

std::vector<double> SemiIntegralSolution::Values(const LpModel& model) const {
  std::vector<double> values(model.program().num_variables(), 0.0);
  for (int i = 0; i < model.instance().num_reflectors(); ++i) {
    values[model.z_var(i)] = z_bar[i];
  }
  for (size_t f = 0; f < model.feed_vars().size(); ++f) {
    values[model.feed_vars()[f].var] = y_bar[f];
  }
  for (size_t r = 0; r < model.route_vars().size(); ++r) {
    values[model.route_vars()[r].var] = x_bar[r];
  }
  return values;
}

absl::StatusOr<SemiIntegralSolution> RandomizedRound(
    const LpModel& model, const FractionalSolution& frac,
    const RoundingConfig& config, int attempt) {
  if (absl::Status status = ValidateConfig(config); !status.ok()) return status;
  if (!frac.ok()) {
    return absl::FailedPreconditionError(
        "rounding needs an optimal LP solution");
  }
  const Instance& inst = model.instance();
  const double m = config.multiplier;
  const std::vector<FeedVar>& feeds = model.feed_vars();
  const std::vector<RouteVar>& routes = model.route_vars();

  SemiIntegralSolution out;
  out.multiplier = m;
  out.attempt = attempt;
  out.z_dot.resize(inst.num_reflectors());
  out.y_dot.resize(feeds.size());
  out.z_bar.assign(inst.num_reflectors(), 0);
  out.y_bar.assign(feeds.size(), 0);
  out.x_bar.assign(routes.size(), 0.0);

  for (size_t f = 0; f < feeds.size(); ++f) {
    const double y = frac.values[feeds[f].var];
    const double z = frac.values[model.z_var(feeds[f].reflector)];
    if (y > z + kConsistencyTolerance) {
      return absl::InternalError(absl::StrFormat(
          "LP solution has %s = %.12g above %s = %.12g",
          model.program().variable(feeds[f].var).name, y,
          model.program().variable(model.z_var(feeds[f].reflector)).name, z));
    }
  }
  for (const RouteVar& route : routes) {
    const double x = frac.values[route.var];
    const double y = frac.values[feeds[route.feed].var];
    if (x > y + kConsistencyTolerance) {
      return absl::InternalError(
          absl::StrFormat("LP solution has %s = %.12g above its feed %.12g",
                          model.program().variable(route.var).name, x, y));
    }
  }

  Rng rng(DeriveSeed(config.seed, static_cast<uint64_t>(attempt)));
  for (int i = 0; i < inst.num_reflectors(); ++i) {
    out.z_dot[i] = ClampProbability(frac.values[model.z_var(i)] * m);
    out.z_bar[i] = rng.Bernoulli(out.z_dot[i]) ? 1 : 0;
  }
  for (size_t f = 0; f < feeds.size(); ++f) {
    const double z_dot = out.z_dot[feeds[f].reflector];
    out.y_dot[f] = z_dot > 0.0
                       ? ClampProbability(frac.values[feeds[f].var] * m / z_dot)
                       : 0.0;
    const bool draw = rng.Bernoulli(out.y_dot[f]);
    out.y_bar[f] = (out.z_bar[feeds[f].reflector] == 1 && draw) ? 1 : 0;
  }
  for (size_t r = 0; r < routes.size(); ++r) {
    const RouteVar& route = routes[r];
    const double x_hat = frac.values[route.var];
    if (out.z_dot[route.reflector] == 1.0 && out.y_dot[route.feed] == 1.0) {
      // Both gates fired surely, so z-bar = y-bar = 1.
      out.x_bar[r] = x_hat;
      continue;
    }
    const double y_hat = frac.values[feeds[route.feed].var];
    const double p = y_hat > 0.0 ? x_hat / y_hat : 0.0;
    const bool draw = rng.Bernoulli(p);
    if (out.y_bar[route.feed] == 1 && draw) out.x_bar[r] = 1.0 / m;
  }

  out.weight.assign(inst.num_sinks(), 0.0);
  out.load.assign(inst.num_reflectors(), 0.0);
  for (size_t r = 0; r < routes.size(); ++r) {
    out.weight[routes[r].sink] += out.x_bar[r] * routes[r].weight;
    out.load[routes[r].reflector] += out.x_bar[r];
  }
  out.cost = model.program().Objective(out.Values(model));
  return out;
}

RoundingCheck CheckRounding(const LpModel& model,
                            const SemiIntegralSolution& semi, double delta) {
  const Instance& inst = model.instance();
  RoundingCheck check;
  for (int j = 0; j < inst.num_sinks(); ++j) {
    const double threshold = inst.sinks()[j].weight_threshold;
    if (threshold <= 0.0) continue;
    check.min_weight_ratio =
        std::min(check.min_weight_ratio, semi.weight[j] / threshold);
    if (semi.weight[j] < (1.0 - delta) * threshold - kWeightTolerance) {
      ++check.weight_violations;
    }
  }
  for (int i = 0; i < inst.num_reflectors(); ++i) {
    const double capacity = model.CopyCapacity(i);
    const double ratio = capacity > 0.0       ? semi.load[i] / capacity
                         : semi.load[i] > 0.0 ? kInfinity
                                              : 0.0;
    check.max_load_ratio = std::max(check.max_load_ratio, ratio);
    if (semi.load[i] > 2.0 * capacity + kWeightTolerance) {
      ++check.capacity_violations;
    }
  }
  return check;
}

absl::StatusOr<RoundingOutcome> RoundWithRetries(const LpModel& model,
                                                 const FractionalSolution& frac,
                                                 const RoundingConfig& config) {
  if (absl::Status status = ValidateConfig(config); !status.ok()) return status;
  RoundingOutcome outcome;
  bool have_best = false;
  for (int attempt = 0; attempt < config.max_retries; ++attempt) {
    absl::StatusOr<SemiIntegralSolution> semi =
        RandomizedRound(model, frac, config, attempt);
    if (!semi.ok()) return semi.status();
    const RoundingCheck check = CheckRounding(model, *semi, config.delta);
    outcome.attempts = attempt + 1;
    if (attempt == 0) {
      outcome.first_attempt_violations =
          check.weight_violations + check.capacity_violations;
    }
    if (check.ok()) {
      outcome.success = true;
      outcome.solution = *std::move(semi);
      outcome.check = check;
      return outcome;
    }
    if (!have_best || check.min_weight_ratio > outcome.check.min_weight_ratio) {
      have_best = true;
      outcome.solution = *std::move(semi);
      outcome.check = check;
    }
  }
  return outcome;
}

}  // namespace overlay
