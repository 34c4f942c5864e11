#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "ishikawa/geometry.hpp"
#include "ishikawa/mappings.hpp"
#include "ishikawa/moduli.hpp"

namespace ishikawa {

inline constexpr std::uint64_t kHardStepCap = 10'000'000;

struct StepResult {
  Point next;  // x_{n+1}
  Point inner;  // y_n = (1-s) x_n (+) s T x_n
};

/// One Ishikawa step x_{n+1} = (1-lambda) x_n (+) lambda T y_n.
StepResult ishikawaStep(const SpaceModel& space, const MappingSpec& map, const Point& x, double lambda, double s);

struct RunOptions {
  /// Store x_n and y_n only for n divisible by this stride (x_N always kept).
  std::uint64_t pointStride = 1;
  /// When set, d(x_n, ref) is recorded for every n.
  std::optional<Point> reference;
  std::uint64_t maxSteps = kHardStepCap;
};

/// The orbit x_0..x_N. Residuals are dense; points are sampled with a stride.
struct Trajectory {
  SpaceModel space;
  MappingSpec map;
  Schedule schedule;
  std::uint64_t steps = 0;
  std::uint64_t pointStride = 1;
  std::vector<std::pair<std::uint64_t, Point>> points;  // (n, x_n)
  std::vector<std::pair<std::uint64_t, Point>> inner;   // (n, y_n)
  std::vector<double> residuals;                        // d(x_n, T x_n), n = 0..N
  std::vector<double> innerResiduals;                   // d(x_n, T y_n), n = 0..N-1
  std::optional<Point> reference;
  std::vector<double> distToRef;                        // d(x_n, ref), n = 0..N, when reference is set

  /// First index from which every simulated residual is < eps, if any.
  std::optional<std::uint64_t> firstHitBelow(double eps) const;
};

/// Runs `steps` iterations from x0. Deterministic. Throws std::length_error
/// when steps exceeds options.maxSteps.
Trajectory runTrajectory(const SpaceModel& space, const MappingSpec& map, const Point& x0,
                         const Schedule& schedule, std::uint64_t steps, const RunOptions& options = {});

/// alpha_n = sum_{i<=n} s_i (1 - lambda_i), accumulated exactly.
Rational partialSumsAlpha(const Schedule& schedule, std::uint64_t n);

/// CSV with header n,residual,inner_residual,dist_to_ref (the last column
/// only when a reference is recorded). Rows every `every` steps, plus the last.
void writeTrajectoryCsv(std::ostream& out, const Trajectory& traj, std::uint64_t every = 1);

}  // namespace ishikawa
