#include "ishikawa/verification.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ishikawa {

namespace {

using Complex = std::complex<double>;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string describe(std::initializer_list<std::pair<const char*, std::string>> fields) {
  std::string out;
  for (const auto& [key, value] : fields) {
    if (!out.empty()) out += ", ";
    out += key;
    out += '=';
    out += value;
  }
  return out;
}

std::string pt(const Point& p) { return toString(p); }

Verdict combineVerdicts(Verdict a, Verdict b) {
  if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
  if (a == Verdict::UnverifiedAtScale || b == Verdict::UnverifiedAtScale) return Verdict::UnverifiedAtScale;
  return Verdict::Pass;
}

void settle(CheckReport& report) {
  if (report.failureCount > 0) report.verdict = Verdict::Fail;
}

void appendNote(CheckReport& report, const std::string& text) {
  if (!report.note.empty()) report.note += "; ";
  report.note += text;
}

}  // namespace

std::string toString(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::UnverifiedAtScale:
      return "UNVERIFIED-AT-SCALE";
  }
  return "?";
}

double slackFor(double rhs) { return kCheckSlack * std::max(1.0, std::abs(rhs)); }

void CheckReport::fail(const std::string& clause, double lhs, double rhs, const std::string& inputs) {
  ++failureCount;
  verdict = Verdict::Fail;
  if (failures.size() < kStoredFailures) failures.push_back({clause, inputs, lhs, rhs, lhs - rhs});
}

bool CheckReport::expectLe(const std::string& clause, double lhs, double rhs,
                           const std::function<std::string()>& inputs) {
  if (lhs <= rhs + slackFor(rhs)) return true;
  fail(clause, lhs, rhs, inputs ? inputs() : std::string());
  return false;
}

void CheckReport::merge(const CheckReport& other) {
  samples += other.samples;
  failureCount += other.failureCount;
  boundaryHits += other.boundaryHits;
  for (const auto& f : other.failures) {
    if (failures.size() >= kStoredFailures) break;
    CheckFailure copy = f;
    copy.clause = other.checkName + ": " + copy.clause;
    failures.push_back(std::move(copy));
  }
  if (!other.note.empty()) appendNote(*this, other.note);
  verdict = combineVerdicts(verdict, other.verdict);
}

nlohmann::json toJson(const CheckReport& report) {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : report.failures) {
    failures.push_back({{"clause", f.clause}, {"inputs", f.inputs}, {"lhs", f.lhs}, {"rhs", f.rhs}, {"excess", f.excess}});
  }
  return {{"check", report.checkName},
          {"samples", report.samples},
          {"passed", report.passed()},
          {"verdict", toString(report.verdict)},
          {"failure_count", report.failureCount},
          {"boundary_hits", report.boundaryHits},
          {"note", report.note},
          {"failures", failures}};
}

// Sampling --------------------------------------------------------------------

double PointSampler::uniform() { return static_cast<double>(rng_() >> 11) * 0x1p-53; }

double PointSampler::normal() {
  const double u1 = 1.0 - uniform();  // (0,1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t PointSampler::below(std::uint64_t n) { return n == 0 ? 0 : rng_() % n; }

std::vector<double> PointSampler::unitDirection(std::size_t dim) {
  std::vector<double> v(dim);
  for (;;) {
    double norm2 = 0.0;
    for (auto& c : v) {
      c = normal();
      norm2 += c * c;
    }
    if (norm2 > 1e-24) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto& c : v) c *= inv;
      return v;
    }
  }
}

Point PointSampler::pointAt(const SpaceModel& space, const Point& center, double rho, const std::vector<double>& dir) {
  if (space.kind() == ModelKind::Euclidean) {
    Point out = center;
    for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += rho * dir[i];
    return out;
  }
  const double norm = std::hypot(dir[0], dir[1]);
  const Complex unit = norm > 0 ? Complex(dir[0] / norm, dir[1] / norm) : Complex(1.0, 0.0);
  const Complex z0 = std::tanh(rho / 2.0) * unit;
  const Complex c{center.coords[0], center.coords[1]};
  const Complex z = (z0 + c) / (1.0 + std::conj(c) * z0);
  return detail::clampToDisk(diskPoint(z.real(), z.imag()));
}

Point PointSampler::onSphere(const SpaceModel& space, const Point& center, double rho) {
  return pointAt(space, center, rho, unitDirection(space.dim()));
}

Point PointSampler::inBall(const SpaceModel& space, const Point& center, double radius) {
  const auto dir = unitDirection(space.dim());
  const double u = uniform();
  const double rho = space.kind() == ModelKind::Euclidean
                         ? radius * std::pow(u, 1.0 / static_cast<double>(space.dim()))
                         : radius * u;
  return pointAt(space, center, rho, dir);
}

Point PointSampler::anywhere(const SpaceModel& space) {
  return inBall(space, origin(space), space.kind() == ModelKind::Euclidean ? 10.0 : 5.0);
}

Point origin(const SpaceModel& space) {
  Point p;
  p.model = space.kind();
  p.coords.assign(space.dim(), 0.0);
  return p;
}

SpaceOps SpaceOps::of(const SpaceModel& space) {
  return {[space](const Point& x, const Point& y) { return ishikawa::dist(space, x, y); },
          [space](const Point& x, const Point& y, double lambda) { return ishikawa::combine(space, x, y, lambda); }};
}

// Space axioms ----------------------------------------------------------------

CheckReport checkSpaceAxioms(const SpaceModel& space, std::uint64_t samples, std::uint64_t seed,
                             const std::optional<SpaceOps>& ops) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  const SpaceOps o = ops ? *ops : SpaceOps::of(space);
  CheckReport report;
  report.checkName = "space-axioms/" + space.name();
  PointSampler rng(seed);

  auto weight = [&rng] {
    const auto pick = rng.below(10);
    if (pick == 0) return 0.0;
    if (pick == 1) return 1.0;
    return rng.uniform();
  };

  for (std::uint64_t i = 0; i < samples; ++i) {
    const Point x = rng.anywhere(space);
    const Point y = rng.below(20) == 0 ? x : rng.anywhere(space);
    const Point z = rng.anywhere(space);
    const Point w = rng.anywhere(space);
    const double l = weight();
    const double lt = weight();
    auto in = [&] {
      return describe({{"x", pt(x)}, {"y", pt(y)}, {"z", pt(z)}, {"w", pt(w)}, {"lambda", fmt(l)}, {"lambda~", fmt(lt)}});
    };
    ++report.samples;

    const double dxy = o.dist(x, y);
    const double dyx = o.dist(y, x);
    const double dxx = o.dist(x, x);
    if (dxx > 1e-12) report.fail("d(x,x) = 0", dxx, 0.0, in());
    if (dxy < 0.0) report.fail("d(x,y) >= 0", -dxy, 0.0, in());
    if (std::abs(dxy - dyx) > slackFor(dxy)) report.fail("d(x,y) = d(y,x)", dxy, dyx, in());
    report.expectLe("triangle d(x,z) <= d(x,y) + d(y,z)", o.dist(x, z), dxy + o.dist(y, z), in);

    const Point m = o.combine(x, y, l);
    report.expectLe("W1 d(z,W(x,y,l)) <= (1-l)d(z,x) + l d(z,y)", o.dist(z, m),
                    (1.0 - l) * o.dist(z, x) + l * o.dist(z, y), in);

    const double w2lhs = o.dist(m, o.combine(x, y, lt));
    const double w2rhs = std::abs(l - lt) * dxy;
    if (std::abs(w2lhs - w2rhs) > slackFor(w2rhs)) {
      report.fail("W2 d(W(x,y,l),W(x,y,l~)) = |l-l~| d(x,y)", w2lhs, w2rhs, in());
    }

    report.expectLe("W3 W(x,y,l) = W(y,x,1-l)", o.dist(m, o.combine(y, x, 1.0 - l)), 0.0, in);

    report.expectLe("W4 d(W(x,z,l),W(y,w,l)) <= (1-l)d(x,y) + l d(z,w)",
                    o.dist(o.combine(x, z, l), o.combine(y, w, l)), (1.0 - l) * dxy + l * o.dist(z, w), in);
  }
  settle(report);
  return report;
}

// Uniform convexity -------------------------------------------------------------

CheckReport checkUcImplication(const SpaceModel& space, std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  CheckReport report;
  report.checkName = "uc-implication/" + space.name() + "/" + space.ucModulus().kindName();
  PointSampler rng(seed);
  const auto& eta = space.ucModulus();

  for (std::uint64_t i = 0; i < samples; ++i) {
    const Point a = rng.anywhere(space);
    const Point x = rng.anywhere(space);
    const double dxa = dist(space, x, a);
    // half of the pairs sit on one sphere about a, where the inequality is tightest
    Point y = rng.below(2) == 0 ? rng.onSphere(space, a, dxa) : rng.anywhere(space);
    double dxy = dist(space, x, y);
    if (dxy == 0.0) {
      y = rng.onSphere(space, a, dxa + 1.0);
      dxy = dist(space, x, y);
    }
    const double dya = dist(space, y, a);
    const double u = std::pow(rng.uniform(), 3.0);
    const double r = std::max(dxa, dya) * (1.0 + u);
    if (!(r > 0.0)) continue;
    const double v = 1.0 - std::pow(rng.uniform(), 3.0);
    const double eps = std::min(2.0, dxy / r) * v;
    if (!(eps > 0.0)) continue;
    ++report.samples;

    const double mid = dist(space, combine(space, x, y, 0.5), a);
    auto in = [&] {
      return describe({{"a", pt(a)}, {"x", pt(x)}, {"y", pt(y)}, {"r", fmt(r)}, {"eps", fmt(eps)}});
    };
    report.expectLe("d(x/2+y/2, a) <= (1 - eta(r,eps)) r", mid, (1.0 - eta.eta(r, eps)) * r, in);

    const double lambda = rng.uniform();
    const double s = r * (1.0 + 4.0 * rng.uniform());
    const double general = dist(space, combine(space, x, y, lambda), a);
    auto in2 = [&] { return in() + ", lambda=" + fmt(lambda) + ", s=" + fmt(s); };
    report.expectLe("d((1-l)x+ly, a) <= (1 - 2l(1-l) eta(s,eps)) r", general,
                    (1.0 - 2.0 * lambda * (1.0 - lambda) * eta.eta(s, eps)) * r, in2);
  }
  settle(report);
  return report;
}

CheckReport checkIndexImplication(const SpaceModel& space, const ModulusDescriptor& index, IndexForm form,
                                  std::uint64_t samples, std::uint64_t seed) {
  if (index.role() != ModulusRole::IndexModulus) throw std::invalid_argument("checkIndexImplication needs an index modulus");
  CheckReport report;
  report.checkName = std::string("index-implication/") + (form == IndexForm::Closed ? "closed/" : "open/") +
                     space.name() + "/" + index.kindName();
  PointSampler rng(seed);
  std::uint64_t premiseMet = 0;

  for (std::uint64_t i = 0; i < samples; ++i) {
    const Point a = rng.anywhere(space);
    const double r = rng.uniform(0.01, 10.0);
    const auto k = static_cast<std::int64_t>(rng.below(7));
    const double target = std::ldexp(r, static_cast<int>(-k));
    Point x;
    Point y;
    if (rng.below(2) == 0) {
      // two points just inside the sphere, about 2^-k r apart
      const double rho = form == IndexForm::Closed && rng.below(2) == 0 ? r : r * (1.0 - 1e-3 * rng.uniform());
      const double chord = target * rng.uniform(0.5, 2.0);
      const double phi = 2.0 * std::asin(std::min(1.0, chord / (2.0 * rho)));
      const auto u = rng.unitDirection(space.dim());
      auto v = rng.unitDirection(space.dim());
      double dot = 0.0;
      for (std::size_t j = 0; j < u.size(); ++j) dot += u[j] * v[j];
      double norm2 = 0.0;
      for (std::size_t j = 0; j < u.size(); ++j) {
        v[j] -= dot * u[j];
        norm2 += v[j] * v[j];
      }
      const double inv = norm2 > 0 ? 1.0 / std::sqrt(norm2) : 0.0;
      std::vector<double> w(u.size());
      for (std::size_t j = 0; j < u.size(); ++j) w[j] = std::cos(phi) * u[j] + std::sin(phi) * v[j] * inv;
      x = rng.pointAt(space, a, rho, u);
      y = rng.pointAt(space, a, rho, w);
    } else {
      x = rng.inBall(space, a, r);
      y = rng.inBall(space, a, r);
    }
    ++report.samples;

    const double dxa = dist(space, x, a);
    const double dya = dist(space, y, a);
    const bool inside = form == IndexForm::Closed ? (dxa <= r && dya <= r) : (dxa < r && dya < r);
    if (!inside) continue;
    const std::int64_t m = index.index(r, k);
    const double mid = dist(space, combine(space, x, y, 0.5), a);
    if (!(mid > (1.0 - std::ldexp(1.0, static_cast<int>(-std::min<std::int64_t>(m, 2000)))) * r)) continue;
    ++premiseMet;
    const double dxy = dist(space, x, y);
    const bool holds = form == IndexForm::Closed ? dxy < target + slackFor(target) : dxy <= target + slackFor(target);
    if (!holds) {
      report.fail(form == IndexForm::Closed ? "d(x,y) < 2^-k r" : "d(x,y) <= 2^-k r", dxy, target,
                  describe({{"a", pt(a)}, {"x", pt(x)}, {"y", pt(y)}, {"r", fmt(r)}, {"k", std::to_string(k)},
                            {"index", std::to_string(m)}}));
    }
  }
  report.note = std::to_string(premiseMet) + " samples met the premises";
  settle(report);
  return report;
}

// Mappings ----------------------------------------------------------------------

namespace {

Point sampleDomain(PointSampler& rng, const SpaceModel& space, const MappingSpec& map) {
  if (const auto* ball = std::get_if<Domain::ClosedBall>(&map.domain.region)) {
    return rng.inBall(space, ball->center, ball->radius);
  }
  return rng.anywhere(space);
}

}  // namespace

CheckReport checkNonexpansive(const SpaceModel& space, const MappingSpec& map, std::uint64_t samples,
                              std::uint64_t seed) {
  validateMapping(space, map);
  CheckReport report;
  report.checkName = "nonexpansive/" + map.kindName();
  PointSampler rng(seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const Point x = sampleDomain(rng, space, map);
    const Point y = sampleDomain(rng, space, map);
    ++report.samples;
    report.expectLe("d(Tx,Ty) <= d(x,y)", dist(space, apply(space, map, x), apply(space, map, y)), dist(space, x, y),
                    [&] { return describe({{"x", pt(x)}, {"y", pt(y)}}); });
  }
  settle(report);
  return report;
}

CheckReport checkMajorizability(const SpaceModel& space, const MappingSpec& map, const Point& x,
                                const ModulusDescriptor& omega, std::uint64_t nMax, std::uint64_t samples,
                                std::uint64_t seed) {
  validateMapping(space, map);
  CheckReport report;
  report.checkName = "majorizability/" + map.kindName();
  PointSampler rng(seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const std::uint64_t n = rng.below(nMax + 1);
    Point y = rng.inBall(space, x, static_cast<double>(n));
    if (!inDomain(space, map, y)) continue;
    ++report.samples;
    report.expectLe("d(x,Ty) <= Omega(n)", dist(space, x, apply(space, map, y)), static_cast<double>(omega.at(n)),
                    [&] { return describe({{"x", pt(x)}, {"y", pt(y)}, {"n", std::to_string(n)}}); });
  }
  settle(report);
  return report;
}

// Trajectory audits ---------------------------------------------------------------

CheckReport checkLemmaInequalities(const Trajectory& traj, const std::optional<Point>& refPoint) {
  CheckReport report;
  report.checkName = "iteration-inequalities/" + traj.map.kindName();
  const auto& sched = traj.schedule;
  const auto& res = traj.residuals;
  const auto& inner = traj.innerResiduals;
  if (res.size() != traj.steps + 1 || inner.size() != traj.steps) {
    throw std::invalid_argument("trajectory residual arrays do not match its length");
  }

  for (std::uint64_t n = 0; n < traj.steps; ++n) {
    const double s = sched.s(n);
    const double l = sched.lambda(n);
    auto in = [n] { return "n=" + std::to_string(n); };
    report.samples += 2;
    report.expectLe("(1-s_n) d(x_n,Tx_n) <= d(x_n,Ty_n)", (1.0 - s) * res[n], inner[n], in);
    report.expectLe("d(x_{n+1},Tx_{n+1}) <= (1+2s_n(1-l_n)) d(x_n,Tx_n)", res[n + 1],
                    (1.0 + 2.0 * s * (1.0 - l)) * res[n], in);
  }

  const std::optional<Point> z = refPoint ? refPoint : traj.reference;
  if (!z) {
    report.note = "no reference point: distance bounds to z skipped";
    settle(report);
    return report;
  }
  const SpaceModel& space = traj.space;
  const double dz = dist(space, *z, apply(space, traj.map, *z));

  // d(x_n, z), dense when the trajectory recorded it for this z
  std::vector<double> dense;
  if (traj.reference && *traj.reference == *z && traj.distToRef.size() == traj.steps + 1) {
    dense = traj.distToRef;
  } else if (traj.pointStride == 1) {
    dense.reserve(traj.points.size());
    for (const auto& [n, x] : traj.points) dense.push_back(dist(space, x, *z));
  }

  std::size_t pi = 0;
  for (const auto& [n, y] : traj.inner) {
    while (pi < traj.points.size() && traj.points[pi].first < n) ++pi;
    if (pi == traj.points.size() || traj.points[pi].first != n) continue;
    const double dxz = dist(space, traj.points[pi].second, *z);
    auto in = [&, n = n] { return "n=" + std::to_string(n) + ", z=" + pt(*z); };
    report.samples += 2;
    report.expectLe("d(y_n,z) <= d(x_n,z) + d(z,Tz)", dist(space, y, *z), dxz + dz, in);
    report.expectLe("d(Ty_n,z) <= d(x_n,z) + 2d(z,Tz)", dist(space, apply(space, traj.map, y), *z), dxz + 2.0 * dz, in);
  }

  if (dense.size() == traj.steps + 1) {
    double lambdaSum = 0.0;
    for (std::uint64_t n = 0; n <= traj.steps; ++n) {
      auto in = [&] { return "n=" + std::to_string(n) + ", z=" + pt(*z); };
      report.samples += 2;
      report.expectLe("d(x_n,z) <= d(x_0,z) + 2 sum_{i<n} l_i d(z,Tz)", dense[n], dense[0] + 2.0 * lambdaSum * dz, in);
      report.expectLe("d(x_n,z) <= d(x_0,z) + 2n d(z,Tz)", dense[n],
                      dense[0] + 2.0 * static_cast<double>(n) * dz, in);
      if (n < traj.steps) {
        const double l = sched.lambda(n);
        ++report.samples;
        report.expectLe("d(x_{n+1},z) <= d(x_n,z) + 2l_n d(z,Tz)", dense[n + 1], dense[n] + 2.0 * l * dz, in);
        lambdaSum += l;
      }
    }
  } else {
    appendNote(report, "sparse points: step-to-step distance bounds to z skipped");
  }
  settle(report);
  return report;
}

CheckReport checkResidualCap(const Trajectory& traj, double b) {
  CheckReport report;
  report.checkName = "residual-cap/" + traj.map.kindName();
  for (std::uint64_t n = 0; n < traj.residuals.size(); ++n) {
    ++report.samples;
    report.expectLe("d(x_n,Tx_n) <= 2b", traj.residuals[n], 2.0 * b,
                    [&] { return "n=" + std::to_string(n) + ", b=" + fmt(b); });
  }
  settle(report);
  return report;
}

// Rate soundness ------------------------------------------------------------------

RateInputs rateInputsFor(const ExperimentConfig& config, double eps) {
  RateInputs in;
  in.eps = eps;
  in.eta = config.space.ucModulus();
  in.b = config.afp.b;
  in.N0 = config.schedule.N0;
  in.L = config.schedule.L;
  in.theta = config.schedule.theta;
  in.gamma = config.schedule.gamma;
  return in;
}

std::uint64_t stepCap(const ExperimentConfig& config) { return std::min(config.caps.maxSteps, kHardStepCap); }

CheckReport checkHypotheses(const ExperimentConfig& config, double eps) {
  CheckReport report;
  report.checkName = "hypotheses";
  for (const auto& v : scheduleViolations(config.schedule)) report.fail("schedule", 1.0, 0.0, v);

  const auto theta = verifyTheta(config.schedule, 10'000);
  report.samples += theta.checked;
  if (!theta.passed) report.fail("theta is a rate of divergence", 1.0, 0.0, theta.detail);

  std::vector<double> deltas{eps / (8.0 * config.afp.b)};
  for (int p = 0; p <= 20; ++p) deltas.push_back(std::ldexp(1.0, -p));
  const auto gamma = verifyGamma(config.schedule, deltas, 10'000);
  report.samples += gamma.checked;
  if (!gamma.passed) report.fail("gamma is a Cauchy modulus", 1.0, 0.0, gamma.detail);

  try {
    ++report.samples;
    derivedBound(config.space, config.afp, config.map);
  } catch (const std::exception& e) {
    report.fail("approximate fixed points within b of x", 1.0, 0.0, e.what());
  }
  if (!(config.afp.x == config.start)) {
    report.fail("certificate point is the start point", 1.0, 0.0, pt(config.afp.x) + " vs " + pt(config.start));
  }
  settle(report);
  return report;
}

Trajectory simulate(const ExperimentConfig& config, std::uint64_t steps, std::uint64_t pointStride) {
  RunOptions options;
  options.pointStride = std::max<std::uint64_t>(1, pointStride);
  options.reference = config.afp.anchor();
  options.maxSteps = stepCap(config);
  return runTrajectory(config.space, config.map, config.start, config.schedule, steps, options);
}

namespace {

std::uint64_t defaultStride(std::uint64_t steps) { return std::max<std::uint64_t>(1, steps / 100'000); }

}  // namespace

namespace {

/// First index up to `end` from which every simulated residual is below eps.
void recordFirstHit(RateReport& rate, const Trajectory& traj, std::uint64_t end, double eps) {
  std::uint64_t n = std::min(traj.steps, end);
  if (traj.residuals[n] >= eps) return;
  while (n > 0 && traj.residuals[n - 1] < eps) --n;
  rate.empiricalFirstHit = n;
  rate.tightnessRatio = static_cast<double>(rate.phi) / static_cast<double>(std::max<std::uint64_t>(1, n));
}

}  // namespace

SoundnessResult checkPhiSoundness(const ExperimentConfig& config, double eps, const Trajectory* shared) {
  SoundnessResult out;
  out.check.checkName = "phi-soundness/eps=" + fmt(eps);
  const RateInputs in = rateInputsFor(config, eps);
  out.rate = computePhi(in);

  const CheckReport hyp = checkHypotheses(config, eps);
  if (!hyp.passed()) {
    out.check.merge(hyp);
    settle(out.check);
    return out;
  }

  const std::uint64_t cap = stepCap(config);
  const std::uint64_t phi = out.rate.phi;
  if (phi > cap) {
    out.check.verdict = Verdict::UnverifiedAtScale;
    out.check.note = "Phi=" + std::to_string(phi) + " exceeds the step cap " + std::to_string(cap);
    if (shared) recordFirstHit(out.rate, *shared, shared->steps, eps);
    return out;
  }
  const std::uint64_t end = std::min(phi + 1000, cap);
  std::optional<Trajectory> local;
  const Trajectory* traj = shared;
  if (!traj || traj->steps < end) {
    local.emplace(simulate(config, end, defaultStride(end)));
    traj = &*local;
  }

  const double limit = eps * (1.0 + kCheckSlack);
  for (std::uint64_t n = phi; n <= end; ++n) {
    const double r = traj->residuals[n];
    ++out.check.samples;
    if (r >= limit) {
      out.check.fail("d(x_n,Tx_n) < eps for n >= Phi", r, eps, "n=" + std::to_string(n));
    } else if (r >= eps) {
      ++out.check.boundaryHits;
    }
  }
  if (end < phi + 1000) appendNote(out.check, "window truncated at the step cap " + std::to_string(cap));

  recordFirstHit(out.rate, *traj, end, eps);
  settle(out.check);
  return out;
}

CheckReport checkDeltaWitness(const ExperimentConfig& config, double eps, const std::vector<std::uint64_t>& ks,
                              const Trajectory* shared) {
  CheckReport report;
  report.checkName = "delta-witness/eps=" + fmt(eps);
  const CheckReport hyp = checkHypotheses(config, eps);
  if (!hyp.passed()) {
    report.merge(hyp);
    settle(report);
    return report;
  }
  const RateInputs in = rateInputsFor(config, eps);
  const std::uint64_t cap = stepCap(config);

  std::vector<std::pair<std::uint64_t, std::uint64_t>> windows;
  std::uint64_t needed = 0;
  for (const auto k : ks) {
    std::uint64_t delta = 0;
    try {
      delta = computeDelta(in, k);
    } catch (const std::logic_error& e) {
      report.fail("Delta(k) >= k", 0.0, static_cast<double>(k), e.what());
      continue;
    }
    if (delta > cap) {
      report.verdict = combineVerdicts(report.verdict, Verdict::UnverifiedAtScale);
      appendNote(report, "Delta(" + std::to_string(k) + ")=" + std::to_string(delta) + " exceeds the step cap");
      continue;
    }
    windows.emplace_back(k, delta);
    needed = std::max(needed, delta);
  }

  std::optional<Trajectory> local;
  const Trajectory* traj = shared;
  if (!windows.empty() && (!traj || traj->steps < needed)) {
    local.emplace(simulate(config, needed, defaultStride(needed)));
    traj = &*local;
  }
  const double limit = eps * (1.0 + kCheckSlack);
  for (const auto& [k, delta] : windows) {
    ++report.samples;
    bool found = false;
    double best = INFINITY;
    for (std::uint64_t n = k; n <= delta; ++n) {
      const double r = traj->residuals[n];
      best = std::min(best, r);
      if (r < limit) {
        found = true;
        if (r >= eps) ++report.boundaryHits;
        break;
      }
    }
    if (!found) {
      report.fail("some N in [k, Delta(k)] has d(x_N,Tx_N) < eps", best, eps,
                  "k=" + std::to_string(k) + ", Delta=" + std::to_string(delta));
    }
  }
  settle(report);
  return report;
}

std::uint64_t stepsForGrid(const ExperimentConfig& config, const std::vector<std::uint64_t>& ks) {
  const std::uint64_t cap = stepCap(config);
  std::uint64_t steps = 0;
  for (const double eps : config.epsGrid) {
    const RateInputs in = rateInputsFor(config, eps);
    const auto rep = computePhi(in);
    steps = std::max(steps, std::min(rep.phi + 1000, cap));
    for (const auto k : ks) {
      try {
        const auto d = computeDelta(in, k);
        steps = std::max(steps, std::min(d, cap));
      } catch (const std::logic_error&) {
      }
    }
  }
  return steps;
}

}  // namespace ishikawa
