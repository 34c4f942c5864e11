#include <cmath>

#include "doctest.h"
#include "ishikawa/mappings.hpp"
#include "ishikawa/verification.hpp"
#include "oracles.hpp"

using namespace ishikawa;

namespace {

MappingSpec whole(MappingSpec::Kind k) { return MappingSpec{std::move(k), Domain{}}; }

}  // namespace

TEST_SUITE("mappings") {
  TEST_CASE("Euclidean rotation") {
    const auto e2 = SpaceModel::euclidean(2);
    const auto rot = whole(maps::EuclideanRotation{euclideanPoint({0, 0}), M_PI});
    const Point y = apply(e2, rot, euclideanPoint({1, 0}));
    CHECK(y[0] == doctest::Approx(-1.0));
    CHECK(y[1] == doctest::Approx(0.0).epsilon(1e-15));
    const auto quarter = whole(maps::EuclideanRotation{euclideanPoint({1, 1}), M_PI / 2});
    const Point z = apply(e2, quarter, euclideanPoint({2, 1}));
    CHECK(z[0] == doctest::Approx(1.0));
    CHECK(z[1] == doctest::Approx(2.0));
    REQUIRE(knownFixedPoint(quarter));
    CHECK(*knownFixedPoint(quarter) == euclideanPoint({1, 1}));
    // rotation in higher dimensions leaves the trailing coordinates alone
    const auto e3 = SpaceModel::euclidean(3);
    const Point w = apply(e3, whole(maps::EuclideanRotation{euclideanPoint({0, 0, 0}), M_PI / 2}),
                          euclideanPoint({1, 0, 7}));
    CHECK(w[2] == 7.0);
  }

  TEST_CASE("reflection average is a projection onto a line") {
    const auto e3 = SpaceModel::euclidean(3);
    const auto m = whole(maps::EuclideanReflectionAverage{euclideanPoint({0, 0, 0})});
    const Point y = apply(e3, m, euclideanPoint({1, 2, 2}));
    CHECK(y == euclideanPoint({1, 0, 0}));
    CHECK(apply(e3, m, y) == y);
  }

  TEST_CASE("Poincare rotation about the origin is a Euclidean rotation") {
    const auto disk = SpaceModel::poincareDisk();
    const auto m = whole(maps::PoincareRotation{diskPoint(0, 0), M_PI / 2});
    const Point y = apply(disk, m, diskPoint(0.5, 0));
    CHECK(y[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(y[1] == doctest::Approx(0.5));
  }

  TEST_CASE("property: Poincare rotation fixes its center and preserves distance to it") {
    const auto disk = SpaceModel::poincareDisk();
    oracle::Gen g(8);
    for (int i = 0; i < 2000; ++i) {
      const Point c = g.disk(0.8);
      const auto m = whole(maps::PoincareRotation{c, g.range(-M_PI, M_PI)});
      const Point x = g.disk(0.9);
      const Point tc = apply(disk, m, c);
      CHECK(oracle::diskDist(tc, c) < 1e-9);
      CHECK(oracle::diskDist(apply(disk, m, x), c) == doctest::Approx(oracle::diskDist(x, c)).epsilon(1e-8));
    }
  }

  TEST_CASE("metric projection") {
    const auto e2 = SpaceModel::euclidean(2);
    const auto p = whole(maps::MetricProjection{euclideanPoint({0, 0}), 1.0});
    const Point y = apply(e2, p, euclideanPoint({3, 4}));
    CHECK(y[0] == doctest::Approx(0.6));
    CHECK(y[1] == doctest::Approx(0.8));
    CHECK(apply(e2, p, euclideanPoint({0.5, 0})) == euclideanPoint({0.5, 0}));

    const auto disk = SpaceModel::poincareDisk();
    const auto dp = whole(maps::MetricProjection{diskPoint(0, 0), 1.0});
    const Point q = apply(disk, dp, diskPoint(0.8, 0));
    CHECK(oracle::diskDist(q, diskPoint(0, 0)) == doctest::Approx(1.0));
    CHECK(q[0] == doctest::Approx(std::tanh(0.5)));
  }

  TEST_CASE("validation") {
    const auto e2 = SpaceModel::euclidean(2);
    const auto disk = SpaceModel::poincareDisk();
    CHECK_THROWS_AS(validateMapping(disk, whole(maps::EuclideanRotation{diskPoint(0, 0), 1.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(validateMapping(e2, whole(maps::PoincareRotation{euclideanPoint({0, 0}), 1.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(validateMapping(SpaceModel::euclidean(1), whole(maps::EuclideanRotation{euclideanPoint({0}), 1.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(validateMapping(e2, whole(maps::EuclideanRotation{euclideanPoint({0, 0}), NAN})),
                    std::invalid_argument);
    CHECK_THROWS_AS(validateMapping(e2, whole(maps::MetricProjection{euclideanPoint({0, 0}), -1.0})),
                    std::invalid_argument);

    MappingSpec inside{maps::MetricProjection{euclideanPoint({0, 0}), 1.0},
                       Domain{Domain::ClosedBall{euclideanPoint({0, 0}), 3.0}}};
    CHECK_NOTHROW(validateMapping(e2, inside));
    CHECK(inDomain(e2, inside, euclideanPoint({2, 2})));
    CHECK_FALSE(inDomain(e2, inside, euclideanPoint({3, 3})));
    CHECK_THROWS_AS(apply(e2, inside, euclideanPoint({3, 3})), std::invalid_argument);

    MappingSpec outside{maps::MetricProjection{euclideanPoint({5, 0}), 1.0},
                        Domain{Domain::ClosedBall{euclideanPoint({0, 0}), 3.0}}};
    CHECK_THROWS_AS(validateMapping(e2, outside), std::invalid_argument);
  }

  TEST_CASE("derivedBound examples") {
    const auto e2 = SpaceModel::euclidean(2);
    const auto rot = whole(maps::EuclideanRotation{euclideanPoint({0, 0}), M_PI});
    ApproxFixedPointSpec afp{euclideanPoint({1, 0}), 1.0, ApproxFixedPointSpec::FixedPoint{euclideanPoint({0, 0})}};
    CHECK(derivedBound(e2, afp, rot) == 2.0);

    const auto half = whole(maps::EuclideanRotation{euclideanPoint({0, 0}), M_PI / 2});
    CHECK(derivedBound(e2, afp, half) == 2.0);  // d(x,Tx) = sqrt 2 <= 2b

    ApproxFixedPointSpec tooSmall{euclideanPoint({1, 0}), 0.5,
                                  ApproxFixedPointSpec::FixedPoint{euclideanPoint({0, 0})}};
    CHECK_THROWS_AS(derivedBound(e2, tooSmall, rot), std::runtime_error);

    ApproxFixedPointSpec notFixed{euclideanPoint({1, 0}), 5.0,
                                  ApproxFixedPointSpec::FixedPoint{euclideanPoint({1, 0})}};
    CHECK_THROWS_AS(derivedBound(e2, notFixed, rot), std::runtime_error);
  }

  TEST_CASE("geodesic approach witness") {
    const auto disk = SpaceModel::poincareDisk();
    MappingSpec proj{maps::MetricProjection{diskPoint(0, 0), 1.0},
                     Domain{Domain::ClosedBall{diskPoint(0, 0), 3.0}}};
    const Point z = diskPoint(std::tanh(0.5), 0);
    ApproxFixedPointSpec afp{diskPoint(0.8, 0), 1.2, ApproxFixedPointSpec::GeodesicApproach{z, diskPoint(0.8, 0)}};
    CHECK(afp.anchor() == z);
    for (int k = 0; k <= 9; ++k) {
      const double delta = std::pow(10.0, -k);
      const Point y = witnessPoint(disk, afp, delta);
      CHECK(oracle::diskDist(y, apply(disk, proj, y)) < delta);
      CHECK(oracle::diskDist(y, afp.x) <= afp.b + 1e-12);
    }
    CHECK(derivedBound(disk, afp, proj) == doctest::Approx(2.4));
  }

  TEST_CASE("catalog maps are nonexpansive") {
    const auto e2 = SpaceModel::euclidean(2);
    const auto e3 = SpaceModel::euclidean(3);
    const auto disk = SpaceModel::poincareDisk();
    CHECK(checkNonexpansive(e2, whole(maps::Identity{}), 1000, 1).passed());
    CHECK(checkNonexpansive(e2, whole(maps::EuclideanRotation{euclideanPoint({0.5, -1}), 1.234}), 1000, 2).passed());
    CHECK(checkNonexpansive(e3, whole(maps::EuclideanReflectionAverage{euclideanPoint({1, 1, 1})}), 1000, 3).passed());
    CHECK(checkNonexpansive(disk, whole(maps::PoincareRotation{diskPoint(0.3, 0.2), M_PI / 2}), 1000, 4).passed());
    CHECK(checkNonexpansive(e2, whole(maps::MetricProjection{euclideanPoint({0, 0}), 1.0}), 1000, 5).passed());
    CHECK(checkNonexpansive(disk, whole(maps::MetricProjection{diskPoint(0.1, 0), 1.0}), 1000, 6).passed());
  }

  TEST_CASE("property: projection is nonexpansive against the oracle distance") {
    const auto disk = SpaceModel::poincareDisk();
    const auto m = whole(maps::MetricProjection{diskPoint(-0.2, 0.1), 0.7});
    oracle::Gen g(44);
    for (int i = 0; i < 3000; ++i) {
      const Point x = g.disk(0.97);
      const Point y = g.disk(0.97);
      CHECK(oracle::diskDist(apply(disk, m, x), apply(disk, m, y)) <= oracle::diskDist(x, y) * (1 + 1e-9) + 1e-12);
    }
  }

  TEST_CASE("majorizability of nonexpansive maps") {
    const auto e2 = SpaceModel::euclidean(2);
    const auto rot = whole(maps::EuclideanRotation{euclideanPoint({0, 0}), M_PI});
    const Point x = euclideanPoint({1, 0});
    CHECK(checkMajorizability(e2, rot, x, omegaForNonexpansive(2), 20, 2000, 1).passed());
    // d(x, Ty) reaches n + 2 along the axis, so Omega(n) = n fails
    CHECK_FALSE(checkMajorizability(e2, rot, x, omegaForNonexpansive(0), 20, 2000, 1).passed());
  }
}
