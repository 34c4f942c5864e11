#include <cmath>

#include "doctest.h"
#include "ishikawa/moduli.hpp"
#include "oracles.hpp"

using namespace ishikawa;

namespace {

Schedule km(const Rational& lambda, ModulusDescriptor theta) {
  return {SequenceDescriptor::constant(lambda), SequenceDescriptor::constant(0), std::move(theta), 1, 0,
          ModulusDescriptor::gammaZero()};
}

Schedule geometricS(const Rational& c, const Rational& q, const Rational& lambda, ModulusDescriptor gamma) {
  return {SequenceDescriptor::constant(lambda), SequenceDescriptor::geometric(c, q),
          thetaForConstantLambda(lambda), 2, 0, std::move(gamma)};
}

}  // namespace

TEST_SUITE("moduli") {
  TEST_CASE("etaToEta1 on eps^2/8") {
    const auto eta1 = etaToEta1(ModulusDescriptor::etaQuadratic());
    CHECK(eta1.role() == ModulusRole::IndexModulus);
    CHECK(eta1.index(1.0, 0) == 3);
    CHECK(eta1.index(7.5, 0) == 3);
    CHECK(eta1.index(1.0, 2) == 7);
    // ceil(-log2((2^-k)^2/8)) = 2k + 3
    for (std::int64_t k = 0; k < 40; ++k) CHECK(eta1.index(2.0, k) == 2 * k + 3);
  }

  TEST_CASE("etaToEta1 on a constant modulus") {
    const auto eta1 = etaToEta1(ModulusDescriptor(modulus::EtaConstant{Rational(1, 2)}));
    for (std::int64_t k = 0; k < 10; ++k) CHECK(eta1.index(3.0, k) == 1);
  }

  TEST_CASE("etaToEta1 on the Hilbert modulus uses the floating path") {
    const auto eta1 = etaToEta1(ModulusDescriptor::etaHilbert());
    CHECK(eta1.index(1.0, 0) == 3);  // 1 - sqrt(3/4) = 0.1339...
    // 1 - sqrt(1 - 4^-k/4) ~ 2^-2k-3 from above, so the exponent is 2k+3 or less
    for (std::int64_t k = 0; k < 20; ++k) CHECK(eta1.index(1.0, k) <= 2 * k + 3);
  }

  TEST_CASE("eta1ToEta examples") {
    const auto eta = eta1ToEta(ModulusDescriptor::indexAffine(2, 3));
    CHECK(eta.role() == ModulusRole::Convexity);
    CHECK(eta.eta(1.0, 1.0) == 0.125);
    CHECK(eta.eta(1.0, 0.25) == std::ldexp(1.0, -7));
    CHECK(eta.eta(1.0, 2.0) == 0.125);  // level clamped at 0
    CHECK(*eta.etaExact(1.0, 0.25) == pow2(-7));
  }

  TEST_CASE("property: eta1ToEta(etaToEta1(eta)) <= eta pointwise") {
    oracle::Gen g(21);
    for (const auto& base : {ModulusDescriptor::etaQuadratic(), ModulusDescriptor::etaHilbert()}) {
      const auto round = eta1ToEta(etaToEta1(base));
      for (int i = 0; i < 3000; ++i) {
        const double r = g.range(0.01, 20.0);
        const double eps = g.range(1e-4, 2.0);
        const double v = round.eta(r, eps);
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
        CHECK(v <= base.eta(r, eps));
      }
    }
  }

  TEST_CASE("eta2ToEta1 shifts the index") {
    const auto a = eta2ToEta1(ModulusDescriptor::indexAffine(1, 0));
    for (std::int64_t k = 0; k < 10; ++k) CHECK(a.index(1.0, k) == k + 1);
    CHECK(eta2ToEta1(ModulusDescriptor::indexAffine(2, 3)).index(1.0, 0) == 5);

    const auto t = eta2ToEta1(ModulusDescriptor::tabulated({{0, 1}, {2, 4}, {5, 9}}));
    // eta2 = 1,1,4,4,4,9,...; eta1(k) = eta2(k+1) = 1,4,4,4,9,...
    const std::int64_t want[] = {1, 4, 4, 4, 9, 9, 9};
    for (std::int64_t k = 0; k < 7; ++k) CHECK(t.index(1.0, k) == want[k]);
    CHECK(std::holds_alternative<modulus::Tabulated>(t.kind()));

    const auto generic = eta2ToEta1(etaToEta1(ModulusDescriptor::etaQuadratic()));
    for (std::int64_t k = 0; k < 10; ++k) CHECK(generic.index(1.0, k) == 2 * (k + 1) + 3);
  }

  TEST_CASE("eta3ToEta2 evaluates at the exact rational") {
    const auto eta3 = ModulusDescriptor::indexAffine(1, 0, 1);  // k + ceil(q)
    const auto eta2 = eta3ToEta2(eta3);
    for (std::int64_t k = 0; k < 6; ++k) {
      CHECK(eta2.index(1.5, k) == k + 2);
      CHECK(eta2.index(3.0, k) == eta3.index(3.0, k));
    }
    oracle::Gen g(5);
    for (int i = 0; i < 2000; ++i) {
      const double r = g.range(0.001, 50.0);
      const auto k = g.integer(0, 30);
      CHECK(eta2.index(r, k) <= eta3.index(std::ceil(r), k));
    }
    CHECK_THROWS_AS(eta2.index(0.0, 1), std::domain_error);
    CHECK_THROWS_AS(eta2.index(-1.0, 1), std::domain_error);
  }

  TEST_CASE("thetaForConstantLambda") {
    const auto t = thetaForConstantLambda(Rational(1, 2));
    CHECK(t.at(0) == 0);
    for (std::uint64_t n = 0; n <= 1000; ++n) CHECK(t.at(n) == 4 * n);

    const Rational quarter(1, 4);
    const auto t4 = thetaForConstantLambda(quarter);
    for (std::uint64_t n = 0; n <= 100; ++n) {
      const std::uint64_t theta = t4.at(n);
      CHECK(theta == toUint64(ceilOf(Rational(BigInt(16 * n), 3))));
      CHECK(oracle::constantLambdaSum(quarter, theta) >= n);
      CHECK(oracle::smallestDivergenceIndex([&](std::uint64_t) { return quarter; }, n) <= theta);
    }
    CHECK_THROWS_AS(thetaForConstantLambda(Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(thetaForConstantLambda(Rational(1)), std::invalid_argument);
  }

  TEST_CASE("property: theta constructor satisfies the divergence bound exactly") {
    oracle::Gen g(17);
    for (int i = 0; i < 200; ++i) {
      const Rational lambda(BigInt(g.integer(1, 99)), BigInt(100));
      const auto t = thetaForConstantLambda(lambda);
      for (std::uint64_t n = 0; n <= 50; ++n) CHECK(oracle::constantLambdaSum(lambda, t.at(n)) >= n);
    }
  }

  TEST_CASE("gammaForGeometricS") {
    const Rational half(1, 2);
    const auto gamma = gammaForGeometricS(half, half, SequenceDescriptor::constant(half));
    CHECK(gamma.cauchyIndex(1.0 / 16) == 2);
    // the infinite tail from N+1 is c(1-l)q^(N+1)/(1-q) = 2^-(N+2)
    for (int p = 0; p <= 20; ++p) {
      const double delta = std::ldexp(1.0, -p);
      const std::uint64_t N = gamma.cauchyIndex(delta);
      CHECK(pow2(-static_cast<std::int64_t>(N) - 2) <= toRational(delta));
      if (N > 0) CHECK(pow2(-static_cast<std::int64_t>(N) - 1) > toRational(delta));
      CHECK(oracle::geometricIncrement(half, half, half, N, 60) <= toRational(delta));
    }
    CHECK(gamma.cauchyIndex(10.0) == 0);
    const auto zero = gammaForGeometricS(Rational(0), half, SequenceDescriptor::constant(half));
    CHECK(std::holds_alternative<modulus::GammaZero>(zero.kind()));
    CHECK(zero.cauchyIndex(1e-9) == 0);
    CHECK_THROWS_AS(gammaForGeometricS(half, Rational(1), SequenceDescriptor::constant(half)), std::invalid_argument);
    CHECK_THROWS_AS(gamma.cauchyIndex(0.0), std::domain_error);
  }

  TEST_CASE("gammaFromDyadic") {
    const auto g = gammaFromDyadic(ModulusDescriptor::thetaLinear(1));  // p -> p
    CHECK(g.cauchyIndex(1.0 / 16) == 4);
    CHECK(g.cauchyIndex(1.0) == 0);
    CHECK(g.cauchyIndex(4.0) == 0);
    CHECK(g.cauchyIndex(0.1) == 4);
    CHECK_THROWS_AS(g.cauchyIndex(-1.0), std::domain_error);
  }

  TEST_CASE("Omega constructors") {
    CHECK(omegaForNonexpansive(2).at(3) == 5);
    for (std::uint64_t n = 0; n < 10; ++n) CHECK(omegaForNonexpansive(0).at(n) == n);
    CHECK(omegaForLipschitz(3, 2).at(1) == 7);
    CHECK(omegaForLipschitz(1, 4) == omegaForNonexpansive(4));
    const auto alphaZero = ModulusDescriptor::tabulated({{0, 0}});
    CHECK(omegaForUniformlyContinuous(alphaZero, 0).at(2) == 3);
    CHECK(omegaForUniformlyContinuous(ModulusDescriptor::tabulated({{0, 1}}), 1).at(1) == 4);
    CHECK(omegaForUniformlyContinuous(alphaZero, 5).at(0) == 6);
    CHECK(omegaForBoundedSpace(3).at(0) == 3);
    CHECK(omegaForBoundedSpace(3).at(1000) == 3);
  }

  TEST_CASE("verifyTheta") {
    CHECK(verifyTheta(km(Rational(1, 2), ModulusDescriptor::thetaLinear(4)), 100).passed);
    const auto bad = verifyTheta(km(Rational(1, 2), ModulusDescriptor::thetaLinear(1)), 100);
    CHECK_FALSE(bad.passed);
    // (theta(n)+1)/4 = (n+1)/4 >= n fails first at n = 1
    REQUIRE(bad.firstFailure);
    CHECK(*bad.firstFailure == 1);
    CHECK(verifyTheta(km(Rational(1, 4), thetaForConstantLambda(Rational(1, 4))), 10'000).passed);
  }

  TEST_CASE("verifyTheta catches theta/8") {
    const auto shrunk = ModulusDescriptor::thetaLinear(Rational(1, 2));
    CHECK_FALSE(verifyTheta(km(Rational(1, 2), shrunk), 10'000).passed);
  }

  TEST_CASE("verifyGamma") {
    const Rational half(1, 2);
    std::vector<double> deltas;
    for (int p = 0; p <= 20; ++p) deltas.push_back(std::ldexp(1.0, -p));
    CHECK(verifyGamma(km(half, ModulusDescriptor::thetaLinear(4)), deltas, 10'000).passed);

    const auto gamma = gammaForGeometricS(half, half, SequenceDescriptor::constant(half));
    CHECK(verifyGamma(geometricS(half, half, half, gamma), deltas, 10'000).passed);

    const auto decremented = ModulusDescriptor(modulus::GammaOffset{share(gamma), -1});
    const auto bad = verifyGamma(geometricS(half, half, half, decremented), deltas, 10'000);
    CHECK_FALSE(bad.passed);
  }

  TEST_CASE("schedule invariants") {
    Schedule s = km(Rational(1, 2), ModulusDescriptor::thetaLinear(4));
    CHECK(scheduleViolations(s).empty());
    s.L = 0;
    const auto v = scheduleViolations(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "L must be ≥1");

    Schedule t = km(Rational(1, 2), ModulusDescriptor::thetaLinear(4));
    t.s = SequenceDescriptor::constant(Rational(9, 10));
    t.L = 5;
    const auto w = scheduleViolations(t);
    REQUIRE(w.size() == 1);
    CHECK(w[0].find("1 - 1/L") != std::string::npos);
    t.L = 10;
    CHECK(scheduleViolations(t).empty());

    Schedule u = km(Rational(3, 2), ModulusDescriptor::thetaLinear(4));
    CHECK_FALSE(scheduleViolations(u).empty());
    CHECK_THROWS_AS(ModulusDescriptor::thetaLinear(-1, 100), std::invalid_argument);
  }

  TEST_CASE("sequences") {
    const auto g = SequenceDescriptor::geometric(Rational(1, 2), Rational(1, 2));
    CHECK(g.exact(0) == Rational(1, 2));
    CHECK(g.exact(3) == Rational(1, 16));
    CHECK(g(3) == 1.0 / 16);
    CHECK(g.infimum() == 0);
    CHECK(g.supremumFrom(2) == Rational(1, 8));
    CHECK_FALSE(g.isZero());
    CHECK(SequenceDescriptor::constant(0).isZero());
    const SequenceDescriptor t(SequenceDescriptor::Tabulated{{Rational(1, 3), Rational(2, 3), Rational(1, 4)}});
    CHECK(t(1) == doctest::Approx(2.0 / 3));
    CHECK(t.exact(10) == Rational(1, 4));
    CHECK(t.infimum() == Rational(1, 4));
    CHECK(t.supremumFrom(2) == Rational(1, 4));
    CHECK(t.supremumFrom(0) == Rational(2, 3));
  }

  TEST_CASE("declared monotonicity holds on samples") {
    oracle::Gen g(31);
    const ModulusDescriptor thetas[] = {ModulusDescriptor::thetaLinear(4), thetaForConstantLambda(Rational(1, 3)),
                                        omegaForLipschitz(2, 3), ModulusDescriptor::tabulated({{0, 1}, {4, 7}})};
    for (const auto& t : thetas) {
      CHECK(t.monotonicity().first == Direction::Nondecreasing);
      for (int i = 0; i < 500; ++i) {
        const auto n = static_cast<std::uint64_t>(g.integer(0, 100000));
        CHECK(t.at(n) <= t.at(n + static_cast<std::uint64_t>(g.integer(0, 100))));
      }
    }
    const ModulusDescriptor gammas[] = {
        gammaForGeometricS(Rational(1, 2), Rational(2, 3), SequenceDescriptor::constant(Rational(1, 2))),
        gammaFromDyadic(ModulusDescriptor::thetaLinear(2)), ModulusDescriptor(modulus::GammaDyadicShift{3})};
    for (const auto& gm : gammas) {
      CHECK(gm.monotonicity().first == Direction::Nonincreasing);
      for (int i = 0; i < 500; ++i) {
        const double d = g.range(1e-8, 2.0);
        CHECK(gm.cauchyIndex(d) >= gm.cauchyIndex(d * g.range(1.0, 3.0)));
      }
    }
    const auto eta1 = etaToEta1(ModulusDescriptor::etaQuadratic());
    for (int i = 0; i < 500; ++i) {
      const double r = g.range(0.01, 10.0);
      const auto k = g.integer(0, 30);
      CHECK(eta1.index(r, k) <= eta1.index(r * g.range(1.0, 4.0), k));
    }
  }

  TEST_CASE("descriptor equality is structural") {
    CHECK(ModulusDescriptor::thetaLinear(4) == ModulusDescriptor::thetaLinear(4, 0));
    CHECK_FALSE(ModulusDescriptor::thetaLinear(4) == ModulusDescriptor::thetaLinear(4, 1));
    CHECK(etaToEta1(ModulusDescriptor::etaQuadratic()) == etaToEta1(ModulusDescriptor::etaQuadratic()));
    CHECK_FALSE(etaToEta1(ModulusDescriptor::etaQuadratic()) == etaToEta1(ModulusDescriptor::etaHilbert()));
    CHECK_FALSE(ModulusDescriptor::gammaZero() == ModulusDescriptor::etaHilbert());
  }

  TEST_CASE("roles reject wrong use") {
    CHECK_THROWS_AS(ModulusDescriptor::thetaLinear(4).eta(1.0, 1.0), std::logic_error);
    CHECK_THROWS_AS(ModulusDescriptor::etaQuadratic().at(3), std::logic_error);
    CHECK_THROWS_AS(ModulusDescriptor::gammaZero().index(1.0, 1), std::logic_error);
    CHECK_THROWS_AS(etaToEta1(ModulusDescriptor::thetaLinear(4)), std::invalid_argument);
  }
}
