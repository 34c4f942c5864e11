#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ishikawa/config.hpp"
#include "ishikawa/verification.hpp"

namespace ishikawa {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2 };

struct CommandOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> maxSteps;
  std::filesystem::path outDir = "out";
  bool json = false;
};

/// Applies --seed and --max-steps. Throws ConfigError for a step cap outside
/// [1, kHardStepCap].
ExperimentConfig applyOverrides(ExperimentConfig config, const CommandOptions& options);

/// 0 for pass or unverified-at-scale, 1 for a failure.
int exitCodeFor(Verdict v);

/// Axiom, uniform convexity and nonexpansiveness checks of the configured space and map.
int cmdVerifySpace(const ExperimentConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);

/// One RateReport JSON object per line for each eps of the grid. No simulation.
int cmdRate(const ExperimentConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);

/// Simulates once, audits the trajectory and every eps of the grid, writes
/// trajectory.csv and report.json to the output directory.
int cmdRun(const ExperimentConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);

/// Table of (eps, P, gamma0, Phi, first_hit, tightness, verdict) over the
/// grid, written to sweep.csv, plus residuals_plot.csv with log-spaced n.
int cmdSweep(const ExperimentConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);

/// 0, 1, 2, ... then roughly 20 points per decade up to `last` (always included).
std::vector<std::uint64_t> logSpacedIndices(std::uint64_t last, int perDecade = 20);

}  // namespace ishikawa
