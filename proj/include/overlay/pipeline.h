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

// The Approx algorithm end to end: LP relaxation, randomized rounding, then
// GAP flow rounding (or, with color limits, path-based dependent rounding).
// A draw that fails any check downstream of the rounding is discarded and the
// next attempt seed is used, up to RoundingConfig::max_retries draws.

#ifndef OVERLAY_PIPELINE_H_
#define OVERLAY_PIPELINE_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "overlay/color.h"
#include "overlay/gap_flow.h"
#include "overlay/lp_model.h"
#include "overlay/path_set.h"
#include "overlay/rounding.h"

namespace overlay {

enum class ApproxStatus {
  kOk,
  kInfeasible,  // LP relaxation infeasible
  kRetriesExhausted,
  kError,
};

const char* ApproxStatusName(ApproxStatus status);

struct ApproxResult {
  ApproxStatus status = ApproxStatus::kError;
  PathSet paths;
  SemiIntegralSolution semi;    // accepted draw
  std::vector<double> x_tilde;  // pre-doubling GAP values (uncolored runs)
  GapAudit gap_audit;
  std::optional<ColorAudit> color_audit;
  int attempts = 0;
  int first_attempt_violations = 0;
  double lp_bound = 0.0;
  std::optional<InfeasibilityCertificate> certificate;
  std::vector<std::string> rejected;  // reason per discarded draw
  std::string message;

  bool ok() const { return status == ApproxStatus::kOk; }
};

// Rounds an already solved relaxation.
ApproxResult RunApprox(const LpModel& model, const FractionalSolution& frac,
                       const RoundingConfig& config);

// Builds the model, solves the relaxation and rounds it.
ApproxResult SolveApprox(std::shared_ptr<const Instance> instance,
                         const ModeOptions& options,
                         const RoundingConfig& config);

}  // namespace overlay

#endif  // OVERLAY_PIPELINE_H_
