#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "ishikawa/config.hpp"
#include "ishikawa/geometry.hpp"
#include "ishikawa/iteration.hpp"
#include "ishikawa/mappings.hpp"
#include "ishikawa/moduli.hpp"
#include "ishikawa/rates.hpp"

namespace ishikawa {

inline constexpr double kCheckSlack = 1e-9;
inline constexpr std::size_t kStoredFailures = 32;

enum class Verdict { Pass, Fail, UnverifiedAtScale };

std::string toString(Verdict v);

struct CheckFailure {
  std::string clause;
  std::string inputs;
  double lhs = 0.0;
  double rhs = 0.0;
  double excess = 0.0;  // lhs - rhs beyond the slack
};

struct CheckReport {
  std::string checkName;
  std::uint64_t samples = 0;
  std::vector<CheckFailure> failures;  // the first kStoredFailures
  std::uint64_t failureCount = 0;
  /// Values that met the target only within the relative slack.
  std::uint64_t boundaryHits = 0;
  Verdict verdict = Verdict::Pass;
  std::string note;

  bool passed() const { return failureCount == 0; }

  /// Records lhs <= rhs with slack 1e-9 * max(1, |rhs|). Returns the outcome.
  bool expectLe(const std::string& clause, double lhs, double rhs, const std::function<std::string()>& inputs);
  void fail(const std::string& clause, double lhs, double rhs, const std::string& inputs);
  void merge(const CheckReport& other);
};

double slackFor(double rhs);

nlohmann::json toJson(const CheckReport& report);

/// Deterministic point generator. Uniform doubles are built from the raw
/// 64-bit stream so results agree across standard libraries.
class PointSampler {
 public:
  explicit PointSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::uint64_t below(std::uint64_t n);

  std::vector<double> unitDirection(std::size_t dim);
  /// The point at distance rho from center in direction `dir` (a unit vector;
  /// only its first two entries are used on the disk).
  Point pointAt(const SpaceModel& space, const Point& center, double rho, const std::vector<double>& dir);
  Point onSphere(const SpaceModel& space, const Point& center, double rho);
  /// Euclidean: uniform in the ball. Disk: distance to center uniform in [0, radius].
  Point inBall(const SpaceModel& space, const Point& center, double radius);
  /// Default sampling region: Euclidean ball of radius 10, disk points within
  /// hyperbolic distance 5 of the origin.
  Point anywhere(const SpaceModel& space);

 private:
  std::mt19937_64 rng_;
};

Point origin(const SpaceModel& space);

/// Distance and convex combination used by checkSpaceAxioms; replaceable so
/// the harness can be shown to detect broken structures.
struct SpaceOps {
  std::function<double(const Point&, const Point&)> dist;
  std::function<Point(const Point&, const Point&, double)> combine;

  static SpaceOps of(const SpaceModel& space);
};

/// Metric axioms and W1-W4 on random samples.
CheckReport checkSpaceAxioms(const SpaceModel& space, std::uint64_t samples, std::uint64_t seed,
                             const std::optional<SpaceOps>& ops = std::nullopt);

/// The uniform convexity inequality for the space's modulus, and its
/// consequence for general lambda with a modulus evaluated at s >= r.
CheckReport checkUcImplication(const SpaceModel& space, std::uint64_t samples, std::uint64_t seed);

/// Which implication an exponent modulus is checked against.
///   Closed: d(x,a) <= r, d(y,a) <= r, midpoint far  =>  d(x,y) <  2^-k r
///   Open:   d(x,a) <  r, d(y,a) <  r, midpoint far  =>  d(x,y) <= 2^-k r
/// "midpoint far" is d(x/2 + y/2, a) > (1 - 2^-index(r,k)) r.
enum class IndexForm { Closed, Open };

CheckReport checkIndexImplication(const SpaceModel& space, const ModulusDescriptor& index, IndexForm form,
                                  std::uint64_t samples, std::uint64_t seed);

/// d(Tx, Ty) <= d(x, y) on sampled pairs of the domain.
CheckReport checkNonexpansive(const SpaceModel& space, const MappingSpec& map, std::uint64_t samples,
                              std::uint64_t seed);

/// d(x, Ty) <= Omega(n) for sampled y with d(x, y) <= n.
CheckReport checkMajorizability(const SpaceModel& space, const MappingSpec& map, const Point& x,
                                const ModulusDescriptor& omega, std::uint64_t nMax, std::uint64_t samples,
                                std::uint64_t seed);

/// The per-step inequalities of the iteration: the residual/inner-residual
/// bound, the one-step growth bound, and the distance bounds to the reference
/// point z at every stored step.
CheckReport checkLemmaInequalities(const Trajectory& traj, const std::optional<Point>& refPoint = std::nullopt);

/// residual <= 2b at every step.
CheckReport checkResidualCap(const Trajectory& traj, double b);

RateInputs rateInputsFor(const ExperimentConfig& config, double eps);

/// Effective simulation cap: the config's, never above the hard cap.
std::uint64_t stepCap(const ExperimentConfig& config);

/// Verifies theta, gamma and the approximate fixed point certificate.
CheckReport checkHypotheses(const ExperimentConfig& config, double eps);

struct SoundnessResult {
  RateReport rate;
  CheckReport check;
};

/// Computes Phi, simulates to min(Phi + 1000, cap) (or reuses `shared` when
/// it is long enough) and checks residual < eps (1 + 1e-9) on [Phi, end].
/// Phi beyond the cap gives the UnverifiedAtScale verdict.
SoundnessResult checkPhiSoundness(const ExperimentConfig& config, double eps, const Trajectory* shared = nullptr);

/// For each k, looks for N in [k, Delta(k)] with residual < eps (1 + 1e-9).
CheckReport checkDeltaWitness(const ExperimentConfig& config, double eps, const std::vector<std::uint64_t>& ks,
                              const Trajectory* shared = nullptr);

/// Steps needed to examine every eps of the grid: max of Phi + 1000 and
/// Delta(k), capped at stepCap.
std::uint64_t stepsForGrid(const ExperimentConfig& config, const std::vector<std::uint64_t>& ks = {0, 10, 100});

/// Runs the config's trajectory with the anchor of its certificate as the
/// reference point, storing points at most every `pointStride` steps.
Trajectory simulate(const ExperimentConfig& config, std::uint64_t steps, std::uint64_t pointStride = 1);

}  // namespace ishikawa
