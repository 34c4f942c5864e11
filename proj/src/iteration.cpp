#include "ishikawa/iteration.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace ishikawa {

namespace {

double fastDist(ModelKind kind, const Point& x, const Point& y) {
  return kind == ModelKind::PoincareDisk ? detail::diskDist(x, y) : detail::euclideanDist(x, y);
}

Point fastCombine(ModelKind kind, const Point& x, const Point& y, double lambda) {
  if (lambda == 0.0) return x;
  if (lambda == 1.0) return y;
  return kind == ModelKind::PoincareDisk ? detail::diskCombine(x, y, lambda) : detail::euclideanCombine(x, y, lambda);
}

struct StepDetail {
  Point tx;
  Point y;
  Point ty;
  Point next;
};

StepDetail stepWithImage(const SpaceModel& space, const MappingSpec& map, const Point& x, Point tx, double lambda,
                         double s) {
  const ModelKind kind = space.kind();
  StepDetail out{std::move(tx), {}, {}, {}};
  out.y = fastCombine(kind, x, out.tx, s);
  out.ty = apply(space, map, out.y);
  out.next = fastCombine(kind, x, out.ty, lambda);
  return out;
}

void checkWeights(double lambda, double s) {
  if (!(lambda >= 0.0 && lambda <= 1.0) || !(s >= 0.0 && s <= 1.0)) {
    throw std::invalid_argument("Ishikawa weights lambda_n and s_n must lie in [0,1]");
  }
}

}  // namespace

StepResult ishikawaStep(const SpaceModel& space, const MappingSpec& map, const Point& x, double lambda, double s) {
  checkWeights(lambda, s);
  space.validate(x);
  auto d = stepWithImage(space, map, x, apply(space, map, x), lambda, s);
  return {std::move(d.next), std::move(d.y)};
}

std::optional<std::uint64_t> Trajectory::firstHitBelow(double eps) const {
  if (residuals.empty() || !(residuals.back() < eps)) return std::nullopt;
  std::uint64_t n = residuals.size() - 1;
  while (n > 0 && residuals[n - 1] < eps) --n;
  return n;
}

Trajectory runTrajectory(const SpaceModel& space, const MappingSpec& map, const Point& x0, const Schedule& schedule,
                         std::uint64_t steps, const RunOptions& options) {
  if (steps > options.maxSteps) {
    throw std::length_error("trajectory of " + std::to_string(steps) + " steps exceeds the step cap of " +
                            std::to_string(options.maxSteps));
  }
  if (options.pointStride == 0) throw std::invalid_argument("point stride must be positive");
  validateMapping(space, map);
  space.validate(x0);
  if (options.reference) space.validate(*options.reference);

  Trajectory traj{space, map, schedule, steps, options.pointStride, {}, {}, {}, {}, options.reference, {}};
  traj.residuals.reserve(steps + 1);
  traj.innerResiduals.reserve(steps);
  if (options.reference) traj.distToRef.reserve(steps + 1);

  const ModelKind kind = space.kind();
  Point x = x0;
  Point tx = apply(space, map, x);
  for (std::uint64_t n = 0;; ++n) {
    traj.residuals.push_back(fastDist(kind, x, tx));
    if (options.reference) traj.distToRef.push_back(fastDist(kind, x, *options.reference));
    const bool keep = n % options.pointStride == 0;
    if (keep || n == steps) traj.points.emplace_back(n, x);
    if (n == steps) break;

    const double lambda = schedule.lambda(n);
    const double s = schedule.s(n);
    checkWeights(lambda, s);
    StepDetail d = stepWithImage(space, map, x, std::move(tx), lambda, s);
    traj.innerResiduals.push_back(fastDist(kind, x, d.ty));
    if (keep) traj.inner.emplace_back(n, d.y);
    x = std::move(d.next);
    tx = apply(space, map, x);
  }
  return traj;
}

Rational partialSumsAlpha(const Schedule& schedule, std::uint64_t n) {
  Rational sum = 0;
  for (std::uint64_t i = 0; i <= n; ++i) {
    sum += schedule.s.exact(i) * (1 - schedule.lambda.exact(i));
  }
  return sum;
}

void writeTrajectoryCsv(std::ostream& out, const Trajectory& traj, std::uint64_t every) {
  if (every == 0) every = 1;
  const bool withRef = !traj.distToRef.empty();
  out << "n,residual,inner_residual" << (withRef ? ",dist_to_ref" : "") << '\n';
  const auto precision = out.precision(17);
  for (std::uint64_t n = 0; n <= traj.steps; ++n) {
    if (n % every != 0 && n != traj.steps) continue;
    out << n << ',' << traj.residuals[n] << ',';
    if (n < traj.innerResiduals.size()) out << traj.innerResiduals[n];
    if (withRef) out << ',' << traj.distToRef[n];
    out << '\n';
  }
  out.precision(precision);
}

}  // namespace ishikawa
