#include <cmath>

#include "doctest.h"
#include "ishikawa/commands.hpp"
#include "ishikawa/verification.hpp"
#include "oracles.hpp"

using namespace ishikawa;

namespace {

ExperimentConfig golden(const std::string& name) {
  return loadConfigFile(std::string(ISHIKAWA_CONFIG_DIR) + "/" + name + ".json");
}

}  // namespace

TEST_SUITE("verification") {
  TEST_CASE("expectLe slack") {
    CheckReport r;
    CHECK(r.expectLe("a", 1.0, 1.0, [] { return std::string(); }));
    CHECK(r.expectLe("a", 1.0 + 5e-10, 1.0, [] { return std::string(); }));
    CHECK_FALSE(r.expectLe("a", 1.0 + 5e-9, 1.0, [] { return std::string("x=1"); }));
    CHECK(r.failureCount == 1);
    CHECK(r.failures[0].inputs == "x=1");
    CHECK(slackFor(1e6) == doctest::Approx(1e-3));
    CHECK(slackFor(0.0) == 1e-9);
  }

  TEST_CASE("sampler is deterministic and in range") {
    PointSampler a(9);
    PointSampler b(9);
    for (int i = 0; i < 1000; ++i) {
      const double u = a.uniform();
      CHECK(u == b.uniform());
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
    const auto disk = SpaceModel::poincareDisk();
    PointSampler s(1);
    for (int i = 0; i < 1000; ++i) {
      const Point c = s.anywhere(disk);
      const double rho = s.uniform(0.0, 3.0);
      const Point p = s.onSphere(disk, c, rho);
      CHECK(oracle::diskDist(p, c) == doctest::Approx(rho).epsilon(1e-7));
    }
  }

  TEST_CASE("axioms hold on the catalog spaces") {
    for (const auto& space : {SpaceModel::euclidean(2), SpaceModel::euclidean(5), SpaceModel::poincareDisk()}) {
      const auto r = checkSpaceAxioms(space, 2000, 7);
      CHECK(r.passed());
      CHECK(r.verdict == Verdict::Pass);
      CHECK(r.samples > 0);
    }
  }

  TEST_CASE("a broken combine fails W2") {
    const auto e2 = SpaceModel::euclidean(2);
    SpaceOps ops = SpaceOps::of(e2);
    ops.combine = [](const Point& x, const Point& y, double l) { return detail::euclideanCombine(x, y, l * l); };
    const auto r = checkSpaceAxioms(e2, 2000, 7, ops);
    CHECK_FALSE(r.passed());
    CHECK(r.verdict == Verdict::Fail);
    bool sawW2 = false;
    for (const auto& f : r.failures) sawW2 = sawW2 || f.clause.find("W2") != std::string::npos;
    CHECK(sawW2);
  }

  TEST_CASE("a sqrt-weighted combine is rejected") {
    const auto e2 = SpaceModel::euclidean(2);
    SpaceOps ops = SpaceOps::of(e2);
    ops.combine = [](const Point& x, const Point& y, double l) { return detail::euclideanCombine(x, y, std::sqrt(l)); };
    CHECK_FALSE(checkSpaceAxioms(e2, 2000, 3, ops).passed());
  }

  TEST_CASE("uniform convexity") {
    CHECK(checkUcImplication(SpaceModel::euclidean(2), 5000, 1).passed());
    CHECK(checkUcImplication(SpaceModel::euclidean(4), 5000, 2).passed());
    CHECK(checkUcImplication(SpaceModel::poincareDisk(), 5000, 3).passed());
    CHECK(checkUcImplication(SpaceModel::euclidean(2, ModulusDescriptor::etaHilbert()), 5000, 4).passed());
    const auto tooStrong = ModulusDescriptor::etaQuadratic(Rational(1, 2));
    CHECK_FALSE(checkUcImplication(SpaceModel::euclidean(2, tooStrong), 5000, 1).passed());
    CHECK_FALSE(checkUcImplication(SpaceModel::poincareDisk(tooStrong), 5000, 1).passed());
  }

  TEST_CASE("index implications on Euclidean triples") {
    const auto e2 = SpaceModel::euclidean(2);
    const auto eta3 = ModulusDescriptor::indexAffine(2, 3);
    CHECK(checkIndexImplication(e2, eta3, IndexForm::Open, 5000, 1).passed());
    CHECK(checkIndexImplication(e2, eta2ToEta1(eta3), IndexForm::Closed, 5000, 2).passed());
    CHECK(checkIndexImplication(e2, etaToEta1(ModulusDescriptor::etaQuadratic()), IndexForm::Closed, 5000, 3).passed());
    CHECK_FALSE(checkIndexImplication(e2, ModulusDescriptor::indexAffine(1, 0), IndexForm::Open, 5000, 4).passed());
  }

  TEST_CASE("lemma inequalities on a real trajectory") {
    const auto cfg = golden("rotation-half-pi");
    const auto t = simulate(cfg, 2000);
    CHECK(checkLemmaInequalities(t).passed());
    CHECK(checkResidualCap(t, cfg.afp.b).passed());
  }

  TEST_CASE("a corrupted residual fails the lemma check") {
    const auto cfg = golden("rotation-half-pi");
    auto t = simulate(cfg, 2000);
    t.residuals[1000] = t.residuals[999] * 3 + 1;
    const auto r = checkLemmaInequalities(t);
    CHECK_FALSE(r.passed());
    CHECK(r.verdict == Verdict::Fail);
    auto u = simulate(cfg, 100);
    u.residuals[50] = 10.0;
    CHECK_FALSE(checkResidualCap(u, cfg.afp.b).passed());
  }

  TEST_CASE("Phi soundness on the rotation by pi") {
    const auto cfg = golden("rotation-pi");
    const auto s = checkPhiSoundness(cfg, 0.5);
    CHECK(s.rate.P == 512);
    CHECK(s.rate.phi == 2052);
    CHECK(s.check.verdict == Verdict::Pass);
    REQUIRE(s.rate.empiricalFirstHit);
    CHECK(*s.rate.empiricalFirstHit == 1);
    CHECK(checkDeltaWitness(cfg, 0.5, {0, 10, 100}).passed());
  }

  TEST_CASE("Phi soundness at eps = 0.1 on the quarter rotation") {
    const auto cfg = golden("rotation-half-pi");
    const auto s = checkPhiSoundness(cfg, 0.1);
    CHECK(s.rate.phi == 256004);
    CHECK(s.check.verdict == Verdict::Pass);
  }

  TEST_CASE("Phi beyond the cap is unverified, not failed") {
    auto cfg = golden("rotation-pi");
    cfg.caps.maxSteps = 1000;
    const auto s = checkPhiSoundness(cfg, 0.5);
    CHECK(s.check.verdict == Verdict::UnverifiedAtScale);
    CHECK(exitCodeFor(s.check.verdict) == kExitOk);
  }

  TEST_CASE("a theta divided by 8 is caught by the hypotheses") {
    auto cfg = golden("rotation-pi");
    cfg.schedule.theta = ModulusDescriptor::thetaLinear(Rational(1, 2));
    CHECK(checkHypotheses(cfg, 0.5).verdict == Verdict::Fail);
    CHECK(checkHypotheses(golden("rotation-pi"), 0.5).verdict == Verdict::Pass);
    CHECK(checkHypotheses(golden("ishikawa-geometric"), 0.0625).verdict == Verdict::Pass);
  }

  TEST_CASE("reports are reproducible for a fixed seed") {
    const auto a = checkSpaceAxioms(SpaceModel::poincareDisk(), 1000, 42);
    const auto b = checkSpaceAxioms(SpaceModel::poincareDisk(), 1000, 42);
    CHECK(toJson(a).dump() == toJson(b).dump());
    const auto cfg = golden("poincare-rotation");
    CHECK(toJson(checkPhiSoundness(cfg, 0.5).check).dump() == toJson(checkPhiSoundness(cfg, 0.5).check).dump());
  }

  TEST_CASE("rate inputs ignore the space and the map") {
    const auto a = rateInputsFor(golden("rotation-pi"), 0.25);
    const auto b = rateInputsFor(golden("poincare-rotation"), 0.25);
    CHECK(computePhi(a) == computePhi(b));
  }

  TEST_CASE("steps for the grid") {
    const auto cfg = golden("rotation-pi");
    // largest Phi on the grid is at eps = 1/16: P = 64/eps^3 = 262144
    CHECK(stepsForGrid(cfg) == 4 * (262144 + 1) + 1000);
    auto capped = cfg;
    capped.caps.maxSteps = 500;
    CHECK(stepsForGrid(capped) == 500);
  }
}
