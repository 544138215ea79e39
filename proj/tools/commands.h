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

// Subcommands of the `overlay` tool. Each returns the process exit code:
//   0  success / audit passed
//   1  usage or internal error
//   2  audit failure (including exhausted rounding retries)
//   3  infeasible instance

#ifndef OVERLAY_TOOLS_COMMANDS_H_
#define OVERLAY_TOOLS_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace overlay {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitAuditFailure = 2;
inline constexpr int kExitInfeasible = 3;

struct SolverFlags {
  std::optional<std::string> mode;   // overrides the instance's mode
  std::optional<double> multiplier;  // default 64 log2 n
  uint64_t seed = 1;
  int max_retries = 20;
  bool colors = false;
  bool bandwidth = false;
  std::optional<double> time_budget_secs;
  std::string out_dir = ".";
};

int RunSolve(const std::string& instance_file, const std::string& algorithm,
             const SolverFlags& flags, std::ostream& out, std::ostream& err);

int RunCompare(const std::string& instance_file,
               const std::vector<std::string>& algorithms,
               const SolverFlags& flags, std::ostream& out, std::ostream& err);

int RunSweep(const std::string& instance_file,
             const std::vector<double>& multipliers,
             const std::vector<uint64_t>& seeds, const SolverFlags& flags,
             std::ostream& out, std::ostream& err);

int RunVerify(const std::string& instance_file,
              const std::string& solution_file, const std::string& profile,
              int64_t packets, uint64_t seed, std::ostream& out,
              std::ostream& err);

int RunExportLp(const std::string& instance_file, const SolverFlags& flags,
                const std::string& out_file, std::ostream& out,
                std::ostream& err);

// Full command line, argv[0] included.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace overlay

#endif  // OVERLAY_TOOLS_COMMANDS_H_
