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

#include "overlay/pipeline.h"

#include <utility>

#include "absl/strings/str_cat.h"

namespace overlay {
namespace {

// Color pipeline for one accepted draw.
absl::StatusOr<ColorResult> RoundColored(const LpModel& model,
                                         const SemiIntegralSolution& semi,
                                         const BoxAssignment& boxes,
                                         const GapFlowGraph& graph) {
  absl::StatusOr<std::vector<PathVar>> paths =
      EnumeratePaths(model, graph, FragmentFlow(graph, boxes));
  if (!paths.ok()) return paths.status();
  double flow_cost = 0.0;
  for (const PathVar& p : *paths) flow_cost += p.cost * p.pi_bar;
  absl::StatusOr<RoundingSystem> system =
      FilterAndScale(model, graph, boxes, *paths, flow_cost);
  if (!system.ok()) return system.status();
  absl::StatusOr<KarpResult> rounded = KarpRound(*system);
  if (!rounded.ok()) return rounded.status();
  return ExtractColoredSolution(model, semi, boxes, *paths, *system, *rounded);
}

}  // namespace

const char* ApproxStatusName(ApproxStatus status) {
  switch (status) {
    case ApproxStatus::kOk:
      return "ok";
    case ApproxStatus::kInfeasible:
      return "infeasible";
    case ApproxStatus::kRetriesExhausted:
      return "retries-exhausted";
    case ApproxStatus::kError:
      return "error";
  }
  return "unknown";
}

ApproxResult RunApprox(const LpModel& model, const FractionalSolution& frac,
                       const RoundingConfig& config) {
  ApproxResult result;
  result.lp_bound = frac.objective;
  if (!frac.ok()) {
    result.status = frac.status == SolveStatus::kInfeasible
                        ? ApproxStatus::kInfeasible
                        : ApproxStatus::kError;
    result.certificate = frac.certificate;
    result.message = absl::StrCat("lp: ", frac.message);
    return result;
  }
  if (absl::Status status = ValidateConfig(config); !status.ok()) {
    result.message = absl::StrCat("rounding: ", status.message());
    return result;
  }
  if (model.options().bandwidth && !model.UniformBitrate().has_value()) {
    result.message =
        "gapflow: bandwidth rounding needs one common stream bitrate; use the "
        "exact IP for mixed bitrates";
    return result;
  }

  for (int attempt = 0; attempt < config.max_retries; ++attempt) {
    result.attempts = attempt + 1;
    absl::StatusOr<SemiIntegralSolution> semi =
        RandomizedRound(model, frac, config, attempt);
    if (!semi.ok()) {
      result.message = absl::StrCat("rounding: ", semi.status().message());
      return result;
    }
    const RoundingCheck check = CheckRounding(model, *semi, config.delta);
    if (attempt == 0) {
      result.first_attempt_violations =
          check.weight_violations + check.capacity_violations;
    }
    if (!check.ok()) {
      result.rejected.push_back(
          absl::StrCat("rounding: ", check.weight_violations, " weight and ",
                       check.capacity_violations, " capacity violations"));
      continue;
    }
    absl::StatusOr<BoxAssignment> boxes = BuildBoxes(model, *semi);
    if (!boxes.ok()) {
      result.rejected.push_back(
          absl::StrCat("gapflow: ", boxes.status().message()));
      continue;
    }
    GapFlowGraph graph = BuildGapFlowGraph(model, *semi, *boxes);

    if (model.options().colors) {
      absl::StatusOr<ColorResult> colored =
          RoundColored(model, *semi, *boxes, graph);
      if (!colored.ok()) {
        result.rejected.push_back(
            absl::StrCat("color: ", colored.status().message()));
        continue;
      }
      result.paths = std::move(colored->paths);
      result.color_audit = std::move(colored->audit);
    } else {
      if (absl::Status status = SolveGapFlow(graph); !status.ok()) {
        result.rejected.push_back(absl::StrCat("gapflow: ", status.message()));
        continue;
      }
      absl::StatusOr<GapFlowResult> gap =
          ExtractAndDouble(model, *semi, *boxes, graph);
      if (!gap.ok()) {
        result.rejected.push_back(
            absl::StrCat("gapflow: ", gap.status().message()));
        continue;
      }
      result.paths = std::move(gap->paths);
      result.x_tilde = std::move(gap->x_tilde);
      result.gap_audit = std::move(gap->audit);
    }
    result.semi = *std::move(semi);
    result.status = ApproxStatus::kOk;
    return result;
  }
  result.status = ApproxStatus::kRetriesExhausted;
  result.message =
      absl::StrCat("no acceptable draw in ", config.max_retries, " attempts");
  if (!result.rejected.empty()) {
    absl::StrAppend(&result.message, "; last: ", result.rejected.back());
  }
  return result;
}

ApproxResult SolveApprox(std::shared_ptr<const Instance> instance,
                         const ModeOptions& options,
                         const RoundingConfig& config) {
  absl::StatusOr<LpModel> model = BuildModel(std::move(instance), options);
  if (!model.ok()) {
    ApproxResult result;
    result.status = absl::IsFailedPrecondition(model.status())
                        ? ApproxStatus::kInfeasible
                        : ApproxStatus::kError;
    result.message = absl::StrCat("lp: ", model.status().message());
    return result;
  }
  const FractionalSolution frac = SolveLp(*model);
  return RunApprox(*model, frac, config);
}

}  // namespace overlay
