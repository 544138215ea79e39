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

#include "commands.h"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "overlay/branch_and_bound.h"
#include "overlay/generator.h"
#include "overlay/instance_io.h"
#include "overlay/lp_model.h"
#include "overlay/path_set.h"
#include "overlay/pipeline.h"
#include "overlay/verify.h"

namespace overlay {
namespace {

using Clock = std::chrono::steady_clock;

constexpr char kCsvHeader[] =
    "alg,M,seed,cost,lp_bound,ratio,attempts,wall_ms,status";

int64_t MillisSince(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                               start)
      .count();
}

// Loads an instance and applies the mode / feature overrides.
absl::StatusOr<std::shared_ptr<const Instance>> LoadWithFlags(
    const std::string& path, const SolverFlags& flags) {
  absl::StatusOr<Instance> instance = LoadInstance(path);
  if (!instance.ok()) return instance.status();
  CostMode mode = instance->mode();
  if (flags.mode.has_value()) {
    std::optional<CostMode> parsed = ParseCostMode(*flags.mode);
    if (!parsed.has_value()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "--mode: expected full or transmission, got ", *flags.mode));
    }
    mode = *parsed;
  }
  const bool colors = flags.colors || instance->colors_enabled();
  const bool bandwidth = flags.bandwidth || instance->bandwidth_enabled();
  if (bandwidth) {
    for (const SourceSpec& source : instance->sources()) {
      if (!source.bitrate.has_value()) {
        return absl::InvalidArgumentError(
            absl::StrCat("--bandwidth: source ", source.id, " has no bitrate"));
      }
    }
  }
  return std::make_shared<const Instance>(
      instance->WithOptions(mode, colors, bandwidth));
}

TimeBudget BudgetFrom(const SolverFlags& flags) {
  TimeBudget budget;
  budget.seconds = flags.time_budget_secs;
  return budget;
}

SimplexOptions SimplexFrom(const SolverFlags& flags) {
  SimplexOptions options;
  if (flags.time_budget_secs.has_value()) {
    options.deadline =
        Clock::now() +
        std::chrono::duration_cast<Clock::duration>(
            std::chrono::duration<double>(*flags.time_budget_secs));
  }
  return options;
}

RoundingConfig ConfigFrom(const SolverFlags& flags, const Instance& instance) {
  RoundingConfig config;
  config.multiplier =
      flags.multiplier.value_or(TheoreticalMultiplier(instance.n()));
  config.seed = flags.seed;
  config.max_retries = flags.max_retries;
  return config;
}

std::string FormatNumber(double v) { return absl::StrFormat("%.10g", v); }

absl::Status WriteJson(const std::string& dir, const std::string& name,
                       const nlohmann::json& doc) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::InternalError(
        absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  return WriteFile((std::filesystem::path(dir) / name).string(),
                   doc.dump(2) + "\n");
}

// Outcome of one algorithm on one instance.
struct AlgorithmRun {
  std::string alg;
  std::string status;  // ok, timeout, infeasible, fallback, failed, error
  std::optional<PathSet> paths;
  double lp_bound = 0.0;
  int attempts = 0;
  int violations = 0;
  int64_t wall_ms = 0;
  std::string message;
  nlohmann::json pipeline_audit;
  std::optional<InfeasibilityCertificate> certificate;
};

AlgorithmRun RunApproxOn(const LpModel& model, const FractionalSolution& frac,
                         const RoundingConfig& config) {
  AlgorithmRun run;
  run.alg = "approx";
  const Clock::time_point start = Clock::now();
  ApproxResult result = RunApprox(model, frac, config);
  run.wall_ms = MillisSince(start);
  run.lp_bound = frac.objective;
  run.attempts = result.attempts;
  run.violations = result.first_attempt_violations;
  run.message = result.message;
  run.certificate = result.certificate;
  switch (result.status) {
    case ApproxStatus::kOk:
      run.status = "ok";
      run.paths = std::move(result.paths);
      run.pipeline_audit = result.color_audit.has_value()
                               ? ColorAuditToJson(*result.color_audit)
                               : GapAuditToJson(result.gap_audit);
      run.pipeline_audit["rounded_cost"] = result.semi.cost;
      break;
    case ApproxStatus::kInfeasible:
      run.status = "infeasible";
      break;
    case ApproxStatus::kRetriesExhausted:
      run.status = "failed";
      break;
    case ApproxStatus::kError:
      run.status = "error";
      break;
  }
  return run;
}

void FillFromIntegral(const LpModel& model, const IntegralSolution& sol,
                      AlgorithmRun& run) {
  run.message = sol.message;
  run.certificate = sol.certificate;
  if (sol.has_solution()) {
    run.paths = PathSetFromValues(model, sol.values, run.alg);
  }
  switch (sol.status) {
    case SolveStatus::kOptimal:
      run.status = "ok";
      break;
    case SolveStatus::kTimeout:
      run.status = "timeout";
      break;
    case SolveStatus::kInfeasible:
      run.status = sol.fallback ? "fallback" : "infeasible";
      break;
    case SolveStatus::kError:
      run.status = "error";
      break;
  }
}

AlgorithmRun RunIpOn(const LpModel& model, const FractionalSolution& frac,
                     const TimeBudget& budget,
                     const std::optional<PathSet>& warm_start) {
  AlgorithmRun run;
  run.alg = "ip";
  run.lp_bound = frac.objective;
  std::optional<std::vector<double>> incumbent;
  if (warm_start.has_value()) incumbent = PathSetValues(model, *warm_start);
  const Clock::time_point start = Clock::now();
  const IntegralSolution sol = SolveIp(model, budget, incumbent);
  run.wall_ms = MillisSince(start);
  FillFromIntegral(model, sol, run);
  return run;
}

AlgorithmRun RunHackOn(const LpModel& model, const FractionalSolution& frac,
                       const TimeBudget& budget) {
  AlgorithmRun run;
  run.alg = "hack";
  run.lp_bound = frac.objective;
  const Clock::time_point start = Clock::now();
  const IntegralSolution sol = ApproxHack(model, frac, budget);
  run.wall_ms = MillisSince(start);
  FillFromIntegral(model, sol, run);
  return run;
}

std::string CsvRow(const AlgorithmRun& run, const std::string& m,
                   const std::string& seed) {
  const double cost = run.paths.has_value() ? run.paths->cost.total() : 0.0;
  const bool has_cost = run.paths.has_value();
  std::string ratio;
  if (has_cost && run.lp_bound > 0.0) ratio = FormatNumber(cost / run.lp_bound);
  return absl::StrJoin(
      {run.alg, m, seed, has_cost ? FormatNumber(cost) : std::string(),
       FormatNumber(run.lp_bound), ratio, absl::StrCat(run.attempts),
       absl::StrCat(run.wall_ms), run.status},
      ",");
}

int ExitFor(const absl::Status& status) {
  return absl::IsFailedPrecondition(status) ? kExitInfeasible : kExitError;
}

GuaranteeProfile ProfileFor(const std::string& alg, const Instance& instance) {
  if (alg == "approx") {
    return instance.colors_enabled() ? GuaranteeProfile::kColor
                                     : GuaranteeProfile::kApprox;
  }
  return GuaranteeProfile::kExact;
}

}  // namespace

int RunSolve(const std::string& instance_file, const std::string& algorithm,
             const SolverFlags& flags, std::ostream& out, std::ostream& err) {
  const Clock::time_point start = Clock::now();
  absl::StatusOr<std::shared_ptr<const Instance>> instance =
      LoadWithFlags(instance_file, flags);
  if (!instance.ok()) {
    err << "model: " << instance.status().message() << "\n";
    return kExitError;
  }
  absl::StatusOr<LpModel> model =
      BuildModel(*instance, ModeOptions::FromInstance(**instance));
  if (!model.ok()) {
    err << "lp: " << model.status().message() << "\n";
    return ExitFor(model.status());
  }
  const FractionalSolution frac = SolveLp(*model, SimplexFrom(flags));
  if (!frac.ok()) {
    err << "lp: " << SolveStatusName(frac.status) << ": " << frac.message
        << "\n";
    return frac.status == SolveStatus::kInfeasible ? kExitInfeasible
                                                   : kExitError;
  }

  const RoundingConfig config = ConfigFrom(flags, **instance);
  AlgorithmRun run;
  if (algorithm == "approx") {
    run = RunApproxOn(*model, frac, config);
  } else if (algorithm == "ip") {
    run = RunIpOn(*model, frac, BudgetFrom(flags), std::nullopt);
  } else if (algorithm == "hack") {
    run = RunHackOn(*model, frac, BudgetFrom(flags));
    if (run.status == "fallback") {
      err << "hack: " << run.message << "; falling back to approx\n";
      run = RunApproxOn(*model, frac, config);
    }
  } else {
    err << "--alg: expected approx, hack or ip, got " << algorithm << "\n";
    return kExitError;
  }

  if (!run.paths.has_value()) {
    err << run.alg << ": " << run.status;
    if (!run.message.empty()) err << ": " << run.message;
    err << "\n";
    if (run.status == "infeasible") return kExitInfeasible;
    return run.status == "failed" ? kExitAuditFailure : kExitError;
  }

  const GuaranteeProfile profile = ProfileFor(run.alg, **instance);
  absl::StatusOr<AuditReport> audit = Audit(**instance, *run.paths, profile);
  if (!audit.ok()) {
    err << "verify: " << audit.status().message() << "\n";
    return kExitError;
  }
  nlohmann::json solution = PathSetToJson(**instance, *run.paths);
  solution["lp_bound"] = frac.objective;
  solution["status"] = run.status;
  if (run.alg == "approx") {
    solution["multiplier"] = config.multiplier;
    solution["seed"] = config.seed;
    solution["attempts"] = run.attempts;
    solution["audit"] = run.pipeline_audit;
  }
  if (absl::Status s = WriteJson(flags.out_dir, "solution.json", solution);
      !s.ok()) {
    err << "cli: " << s.message() << "\n";
    return kExitError;
  }
  if (absl::Status s = WriteJson(flags.out_dir, "audit.json",
                                 AuditToJson(**instance, *audit));
      !s.ok()) {
    err << "cli: " << s.message() << "\n";
    return kExitError;
  }
  const double cost = run.paths->cost.total();
  out << absl::StrFormat(
      "%s status=%s audit=%s cost=%.6f lp_bound=%.6f ratio=%s "
      "min_weight_ratio=%.4f max_fanout_ratio=%.4f attempts=%d wall_ms=%d\n",
      run.alg, run.status, audit->passed() ? "pass" : "fail", cost,
      frac.objective,
      frac.objective > 0.0 ? absl::StrFormat("%.4f", cost / frac.objective)
                           : std::string("n/a"),
      audit->min_weight_ratio, audit->max_fanout_ratio, run.attempts,
      MillisSince(start));
  if (!audit->passed()) {
    for (const std::string& v : audit->violations)
      err << "audit: " << v << "\n";
    return kExitAuditFailure;
  }
  return kExitOk;
}

int RunCompare(const std::string& instance_file,
               const std::vector<std::string>& algorithms,
               const SolverFlags& flags, std::ostream& out, std::ostream& err) {
  for (const std::string& alg : algorithms) {
    if (alg != "approx" && alg != "hack" && alg != "ip") {
      err << "--algs: unknown algorithm " << alg << "\n";
      return kExitError;
    }
  }
  absl::StatusOr<std::shared_ptr<const Instance>> instance =
      LoadWithFlags(instance_file, flags);
  if (!instance.ok()) {
    err << "model: " << instance.status().message() << "\n";
    return kExitError;
  }
  absl::StatusOr<LpModel> model =
      BuildModel(*instance, ModeOptions::FromInstance(**instance));
  if (!model.ok()) {
    err << "lp: " << model.status().message() << "\n";
    return ExitFor(model.status());
  }
  const FractionalSolution frac = SolveLp(*model, SimplexFrom(flags));
  if (!frac.ok()) {
    err << "lp: " << SolveStatusName(frac.status) << ": " << frac.message
        << "\n";
    return frac.status == SolveStatus::kInfeasible ? kExitInfeasible
                                                   : kExitError;
  }
  const RoundingConfig config = ConfigFrom(flags, **instance);
  std::map<std::string, AlgorithmRun> runs;
  // Approx first so that its plan can seed the IP search.
  for (const std::string alg : {"approx", "hack", "ip"}) {
    if (std::find(algorithms.begin(), algorithms.end(), alg) ==
        algorithms.end()) {
      continue;
    }
    if (alg == "approx") {
      runs[alg] = RunApproxOn(*model, frac, config);
    } else if (alg == "hack") {
      runs[alg] = RunHackOn(*model, frac, BudgetFrom(flags));
    } else {
      std::optional<PathSet> warm;
      if (runs.contains("approx")) warm = runs["approx"].paths;
      runs[alg] = RunIpOn(*model, frac, BudgetFrom(flags), warm);
    }
  }
  out << kCsvHeader << "\n";
  for (const std::string& alg : algorithms) {
    const AlgorithmRun& run = runs[alg];
    const bool randomized = alg == "approx";
    out << CsvRow(run, randomized ? FormatNumber(config.multiplier) : "",
                  randomized ? absl::StrCat(config.seed) : "")
        << "\n";
  }

  auto cost_of = [&](const std::string& alg) -> std::optional<double> {
    auto it = runs.find(alg);
    if (it == runs.end() || it->second.status != "ok" || !it->second.paths) {
      return std::nullopt;
    }
    return it->second.paths->cost.total();
  };
  if (runs.contains("hack") && runs["hack"].status == "fallback") {
    err << "warning: hack fixing left no feasible completion; excluded from "
           "the ordering check\n";
  }
  const std::optional<double> ip = cost_of("ip");
  const std::optional<double> hack = cost_of("hack");
  const std::optional<double> approx = cost_of("approx");
  constexpr double kSlack = 1e-6;
  if (ip && hack && *ip > *hack + kSlack) {
    err << "warning: cost(ip) > cost(hack)\n";
  }
  if (hack && approx && *hack > *approx + kSlack) {
    err << "warning: cost(hack) > cost(approx)\n";
  }
  if (ip && approx && *ip > *approx + kSlack) {
    err << "warning: cost(ip) > cost(approx)\n";
  }
  return kExitOk;
}

int RunSweep(const std::string& instance_file,
             const std::vector<double>& multipliers,
             const std::vector<uint64_t>& seeds, const SolverFlags& flags,
             std::ostream& out, std::ostream& err) {
  absl::StatusOr<std::shared_ptr<const Instance>> instance =
      LoadWithFlags(instance_file, flags);
  if (!instance.ok()) {
    err << "model: " << instance.status().message() << "\n";
    return kExitError;
  }
  absl::StatusOr<LpModel> model =
      BuildModel(*instance, ModeOptions::FromInstance(**instance));
  if (!model.ok()) {
    err << "lp: " << model.status().message() << "\n";
    return ExitFor(model.status());
  }
  const FractionalSolution frac = SolveLp(*model, SimplexFrom(flags));
  if (!frac.ok()) {
    err << "lp: " << SolveStatusName(frac.status) << ": " << frac.message
        << "\n";
    return frac.status == SolveStatus::kInfeasible ? kExitInfeasible
                                                   : kExitError;
  }
  out << kCsvHeader << ",violations,stable\n";
  for (double m : multipliers) {
    std::vector<AlgorithmRun> runs;
    std::vector<std::string> plans;
    for (uint64_t seed : seeds) {
      RoundingConfig config = ConfigFrom(flags, **instance);
      config.multiplier = m;
      config.seed = seed;
      runs.push_back(RunApproxOn(*model, frac, config));
      plans.push_back(runs.back().paths.has_value()
                          ? PathSetToJson(**instance, *runs.back().paths).dump()
                          : std::string());
    }
    bool stable = !plans.empty() && !plans.front().empty();
    for (const std::string& plan : plans)
      stable = stable && plan == plans.front();
    for (size_t s = 0; s < seeds.size(); ++s) {
      out << CsvRow(runs[s], FormatNumber(m), absl::StrCat(seeds[s])) << ","
          << runs[s].violations << "," << (stable ? 1 : 0) << "\n";
    }
  }
  return kExitOk;
}

int RunVerify(const std::string& instance_file,
              const std::string& solution_file, const std::string& profile,
              int64_t packets, uint64_t seed, std::ostream& out,
              std::ostream& err) {
  absl::StatusOr<Instance> instance = LoadInstance(instance_file);
  if (!instance.ok()) {
    err << "model: " << instance.status().message() << "\n";
    return kExitError;
  }
  absl::StatusOr<std::string> text = ReadFile(solution_file);
  if (!text.ok()) {
    err << "verify: " << text.status().message() << "\n";
    return kExitError;
  }
  nlohmann::json doc = nlohmann::json::parse(*text, nullptr, false);
  if (doc.is_discarded()) {
    err << "verify: " << solution_file << " is not valid JSON\n";
    return kExitError;
  }
  absl::StatusOr<PathSet> paths = PathSetFromJson(*instance, doc);
  if (!paths.ok()) {
    err << "verify: " << paths.status().message() << "\n";
    return kExitError;
  }
  GuaranteeProfile chosen;
  if (profile == "exact") {
    chosen = GuaranteeProfile::kExact;
  } else if (profile == "approx") {
    chosen = GuaranteeProfile::kApprox;
  } else if (profile == "color") {
    chosen = GuaranteeProfile::kColor;
  } else {
    err << "--profile: expected exact, approx or color, got " << profile
        << "\n";
    return kExitError;
  }
  absl::StatusOr<AuditReport> audit = Audit(*instance, *paths, chosen);
  if (!audit.ok()) {
    err << "verify: " << audit.status().message() << "\n";
    return kExitError;
  }
  nlohmann::json report = AuditToJson(*instance, *audit);
  if (packets > 0) {
    const LossSimulation sim =
        SimulateAllLosses(*instance, *paths, packets, seed);
    nlohmann::json rows = nlohmann::json::array();
    for (int j = 0; j < instance->num_sinks(); ++j) {
      rows.push_back({{"sink", instance->sinks()[j].id},
                      {"empirical_loss", sim.rate(j)},
                      {"analytic_loss", audit->sinks[j].analytic_loss}});
    }
    report["simulation"] = {
        {"packets", packets}, {"seed", seed}, {"sinks", rows}};
  }
  out << report.dump(2) << "\n";
  return audit->passed() ? kExitOk : kExitAuditFailure;
}

int RunExportLp(const std::string& instance_file, const SolverFlags& flags,
                const std::string& out_file, std::ostream& out,
                std::ostream& err) {
  absl::StatusOr<std::shared_ptr<const Instance>> instance =
      LoadWithFlags(instance_file, flags);
  if (!instance.ok()) {
    err << "model: " << instance.status().message() << "\n";
    return kExitError;
  }
  absl::StatusOr<LpModel> model =
      BuildModel(*instance, ModeOptions::FromInstance(**instance));
  if (!model.ok()) {
    err << "lp: " << model.status().message() << "\n";
    return ExitFor(model.status());
  }
  // Export the integer program; relax by dropping the General section.
  LinearProgram ip;
  for (const Variable& v : model->program().variables()) {
    ip.AddVariable(v.name, v.lower, v.upper, v.objective, /*integer=*/true);
  }
  for (const LinearRow& row : model->program().rows()) {
    ip.AddRow(row.name, row.terms, row.sense, row.rhs);
  }
  const std::string text = ip.ToLpFormat(
      absl::StrCat("overlay model, mode ", CostModeName((*instance)->mode())));
  if (out_file.empty() || out_file == "-") {
    out << text;
    return kExitOk;
  }
  if (absl::Status s = WriteFile(out_file, text); !s.ok()) {
    err << "cli: " << s.message() << "\n";
    return kExitError;
  }
  return kExitOk;
}

namespace {

absl::StatusOr<std::vector<double>> ParseDoubles(const std::string& text) {
  std::vector<double> values;
  for (absl::string_view piece : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    double v;
    if (!absl::SimpleAtod(piece, &v)) {
      return absl::InvalidArgumentError(absl::StrCat("not a number: ", piece));
    }
    values.push_back(v);
  }
  return values;
}

// "1,2,5" or "1-10" or a mix.
absl::StatusOr<std::vector<uint64_t>> ParseSeeds(const std::string& text) {
  std::vector<uint64_t> seeds;
  for (absl::string_view piece : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    std::vector<absl::string_view> range = absl::StrSplit(piece, '-');
    uint64_t lo, hi;
    if (range.size() == 1 && absl::SimpleAtoi(range[0], &lo)) {
      seeds.push_back(lo);
    } else if (range.size() == 2 && absl::SimpleAtoi(range[0], &lo) &&
               absl::SimpleAtoi(range[1], &hi) && lo <= hi) {
      for (uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      return absl::InvalidArgumentError(absl::StrCat("bad seed list: ", piece));
    }
  }
  return seeds;
}

absl::StatusOr<std::vector<std::vector<int>>> ParseSets(
    const std::string& text) {
  std::vector<std::vector<int>> sets;
  for (absl::string_view set : absl::StrSplit(text, ';')) {
    std::vector<int> elements;
    for (absl::string_view piece :
         absl::StrSplit(set, ',', absl::SkipEmpty())) {
      int e;
      if (!absl::SimpleAtoi(piece, &e)) {
        return absl::InvalidArgumentError(absl::StrCat("bad element: ", piece));
      }
      elements.push_back(e);
    }
    sets.push_back(std::move(elements));
  }
  return sets;
}

void AddSolverFlags(CLI::App* cmd, SolverFlags& flags) {
  cmd->add_option("--mode", flags.mode, "Cost mode: full or transmission");
  cmd->add_option("--multiplier", flags.multiplier,
                  "Rounding multiplier M (default 64 log2 n)");
  cmd->add_option("--seed", flags.seed, "Random seed");
  cmd->add_option("--max-retries", flags.max_retries,
                  "Rounding draws before giving up")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--colors", flags.colors, "Enforce per-sink color limits");
  cmd->add_flag("--bandwidth", flags.bandwidth, "Use bandwidth capacities");
  cmd->add_option("--time-budget-secs", flags.time_budget_secs,
                  "Time budget for LP and IP solves");
  cmd->add_option("--out-dir", flags.out_dir, "Directory for output files");
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Three-level overlay construction"};
  app.require_subcommand(1);
  SolverFlags flags;
  std::string instance_file;

  CLI::App* solve =
      app.add_subcommand("solve", "Build an overlay for an instance");
  std::string algorithm = "approx";
  solve->add_option("instance", instance_file, "Instance JSON")->required();
  solve->add_option("--alg", algorithm, "approx, hack or ip");
  AddSolverFlags(solve, flags);

  CLI::App* compare = app.add_subcommand("compare", "Run several algorithms");
  std::string algs = "approx,hack,ip";
  compare->add_option("instance", instance_file, "Instance JSON")->required();
  compare->add_option("--algs", algs,
                      "Comma-separated subset of approx,hack,ip");
  AddSolverFlags(compare, flags);

  CLI::App* sweep = app.add_subcommand("sweep", "Multiplier sweep");
  std::string multipliers = "1.5,2,3,4,6,8,12,16,32,64";
  std::string seeds = "1-10";
  sweep->add_option("instance", instance_file, "Instance JSON")->required();
  sweep->add_option("--multipliers", multipliers,
                    "Comma-separated multipliers");
  sweep->add_option("--seeds", seeds, "Seeds, e.g. 1-10 or 1,4,9");
  AddSolverFlags(sweep, flags);

  CLI::App* verify = app.add_subcommand("verify", "Audit a solution file");
  std::string solution_file;
  std::string profile = "exact";
  int64_t packets = 100000;
  uint64_t sim_seed = 1;
  verify->add_option("instance", instance_file, "Instance JSON")->required();
  verify->add_option("solution", solution_file, "Solution JSON")->required();
  verify->add_option("--profile", profile, "exact, approx or color");
  verify->add_option("--packets", packets, "Simulated packets (0 to skip)");
  verify->add_option("--seed", sim_seed, "Simulation seed");

  CLI::App* export_lp =
      app.add_subcommand("export-lp", "Write the IP in LP format");
  std::string lp_out;
  export_lp->add_option("instance", instance_file, "Instance JSON")->required();
  export_lp->add_option("--out", lp_out, "Output file (default stdout)");
  AddSolverFlags(export_lp, flags);

  CLI::App* gen = app.add_subcommand("gen", "Generate an instance");
  std::string size = "4x7x14";
  std::string regime = "avg";
  std::string gen_mode = "full";
  std::string gen_out;
  std::string setcover;
  int universe = 0;
  RandomInstanceOptions gen_options;
  gen->add_option("--size", size, "SOURCESxREFLECTORSxSINKS");
  gen->add_option("--regime", regime, "Loss regime: low, avg or high");
  gen->add_option("--seed", gen_options.seed, "Random seed");
  gen->add_option("--density", gen_options.density, "Link probability");
  gen->add_option("--num-colors", gen_options.colors, "ISP colors (0 = none)");
  gen->add_flag("--bandwidth", gen_options.bandwidth,
                "Attach bitrates and caps");
  gen->add_option("--mode", gen_mode, "Cost mode recorded in the file");
  gen->add_option("--setcover", setcover,
                  "Set-cover instance, sets as '1,2;2,3;3'");
  gen->add_option("--universe", universe, "Universe size for --setcover");
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  if (solve->parsed())
    return RunSolve(instance_file, algorithm, flags, out, err);
  if (compare->parsed()) {
    std::vector<std::string> list =
        absl::StrSplit(algs, ',', absl::SkipEmpty());
    return RunCompare(instance_file, list, flags, out, err);
  }
  if (sweep->parsed()) {
    absl::StatusOr<std::vector<double>> ms = ParseDoubles(multipliers);
    absl::StatusOr<std::vector<uint64_t>> ss = ParseSeeds(seeds);
    if (!ms.ok() || !ss.ok()) {
      err << "sweep: " << (!ms.ok() ? ms.status() : ss.status()).message()
          << "\n";
      return kExitError;
    }
    return RunSweep(instance_file, *ms, *ss, flags, out, err);
  }
  if (verify->parsed()) {
    return RunVerify(instance_file, solution_file, profile, packets, sim_seed,
                     out, err);
  }
  if (export_lp->parsed()) {
    return RunExportLp(instance_file, flags, lp_out, out, err);
  }
  if (gen->parsed()) {
    absl::StatusOr<Instance> instance = absl::UnknownError("unset");
    if (!setcover.empty()) {
      absl::StatusOr<std::vector<std::vector<int>>> sets = ParseSets(setcover);
      if (!sets.ok()) {
        err << "gen: " << sets.status().message() << "\n";
        return kExitError;
      }
      int u = universe;
      for (const std::vector<int>& s : *sets) {
        for (int e : s) u = std::max(u, e);
      }
      instance = GenerateSetCover(u, *sets);
    } else {
      std::vector<std::string> dims = absl::StrSplit(size, 'x');
      if (dims.size() != 3 ||
          !absl::SimpleAtoi(dims[0], &gen_options.sources) ||
          !absl::SimpleAtoi(dims[1], &gen_options.reflectors) ||
          !absl::SimpleAtoi(dims[2], &gen_options.sinks)) {
        err << "--size: expected AxBxC, got " << size << "\n";
        return kExitError;
      }
      std::optional<Regime> parsed_regime = ParseRegime(regime);
      std::optional<CostMode> parsed_mode = ParseCostMode(gen_mode);
      if (!parsed_regime.has_value() || !parsed_mode.has_value()) {
        err << "gen: bad --regime or --mode\n";
        return kExitError;
      }
      gen_options.regime = *parsed_regime;
      gen_options.mode = *parsed_mode;
      instance = GenerateRandom(gen_options);
    }
    if (!instance.ok()) {
      err << "gen: " << instance.status().message() << "\n";
      return ExitFor(instance.status());
    }
    const std::string text = SerializeInstance(*instance);
    if (gen_out.empty() || gen_out == "-") {
      out << text;
    } else if (absl::Status s = WriteFile(gen_out, text); !s.ok()) {
      err << "cli: " << s.message() << "\n";
      return kExitError;
    }
    return kExitOk;
  }
  return kExitError;
}

}  // namespace overlay
