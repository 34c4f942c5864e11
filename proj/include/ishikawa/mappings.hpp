#pragma once

#include <optional>
#include <string>
#include <variant>

#include "ishikawa/geometry.hpp"

namespace ishikawa {

/// Convex domain of a self-map: the whole space or a closed ball.
struct Domain {
  struct WholeSpace {
    bool operator==(const WholeSpace&) const = default;
  };
  struct ClosedBall {
    Point center;
    double radius = 0.0;
    bool operator==(const ClosedBall&) const = default;
  };
  std::variant<WholeSpace, ClosedBall> region = WholeSpace{};

  bool operator==(const Domain&) const = default;
};

namespace maps {

struct Identity {
  bool operator==(const Identity&) const = default;
};
/// Rotation of the first two Euclidean coordinates about `center`.
struct EuclideanRotation {
  Point center;
  double angle = 0.0;
  bool operator==(const EuclideanRotation&) const = default;
};
/// x -> (x + S x)/2 where S reflects every coordinate but the first through
/// `center`; the orthogonal projection onto the first-axis line through center.
struct EuclideanReflectionAverage {
  Point center;
  bool operator==(const EuclideanReflectionAverage&) const = default;
};
/// Hyperbolic rotation of the disk about `center`.
struct PoincareRotation {
  Point center;
  double angle = 0.0;
  bool operator==(const PoincareRotation&) const = default;
};
/// Nearest-point projection onto a closed ball (either model).
struct MetricProjection {
  Point center;
  double radius = 0.0;
  bool operator==(const MetricProjection&) const = default;
};

}  // namespace maps

struct MappingSpec {
  using Kind = std::variant<maps::Identity, maps::EuclideanRotation, maps::EuclideanReflectionAverage,
                            maps::PoincareRotation, maps::MetricProjection>;
  Kind kind = maps::Identity{};
  Domain domain;

  std::string kindName() const;
  bool operator==(const MappingSpec&) const = default;
};

/// Throws std::invalid_argument when the map is not a nonexpansive self-map
/// of its domain in `space` (wrong model, non-invariant ball, ...).
void validateMapping(const SpaceModel& space, const MappingSpec& map);

bool inDomain(const SpaceModel& space, const MappingSpec& map, const Point& x);

/// T x. Throws std::invalid_argument when x lies outside the domain.
Point apply(const SpaceModel& space, const MappingSpec& map, const Point& x);

/// A fixed point known in closed form, if the map has a distinguished one.
std::optional<Point> knownFixedPoint(const MappingSpec& map);

/// Certificate that T has approximate fixed points within distance b of x.
struct ApproxFixedPointSpec {
  struct FixedPoint {
    Point z;
    bool operator==(const FixedPoint&) const = default;
  };
  /// y_delta on the geodesic from the fixed point z towards `from`, close
  /// enough to z that d(y, Ty) <= 2 d(y, z) < delta.
  struct GeodesicApproach {
    Point z;
    Point from;
    bool operator==(const GeodesicApproach&) const = default;
  };

  Point x;
  double b = 0.0;
  std::variant<FixedPoint, GeodesicApproach> witness;

  /// The exact fixed point the witness is built around.
  const Point& anchor() const;
  bool operator==(const ApproxFixedPointSpec&) const = default;
};

/// y_delta of the witness.
Point witnessPoint(const SpaceModel& space, const ApproxFixedPointSpec& afp, double delta);

/// Checks the witness at delta = 10^-k, k <= 9, and returns b~ = 2b, after
/// asserting d(x, Tx) <= 2b + 1e-9. Throws std::runtime_error otherwise.
double derivedBound(const SpaceModel& space, const ApproxFixedPointSpec& afp, const MappingSpec& map);

}  // namespace ishikawa
