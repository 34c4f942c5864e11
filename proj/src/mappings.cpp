#include "ishikawa/mappings.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace ishikawa {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using Complex = std::complex<double>;

constexpr double kSlack = 1e-9;

double rawDist(const SpaceModel& space, const Point& x, const Point& y) {
  return space.kind() == ModelKind::PoincareDisk ? detail::diskDist(x, y) : detail::euclideanDist(x, y);
}

Point rawCombine(const SpaceModel& space, const Point& x, const Point& y, double lambda) {
  if (lambda == 0.0) return x;
  if (lambda == 1.0) return y;
  return space.kind() == ModelKind::PoincareDisk ? detail::diskCombine(x, y, lambda)
                                                 : detail::euclideanCombine(x, y, lambda);
}

const Point* invariantCenter(const MappingSpec::Kind& kind) {
  return std::visit(Overloaded{
                        [](const maps::EuclideanRotation& m) -> const Point* { return &m.center; },
                        [](const maps::EuclideanReflectionAverage& m) -> const Point* { return &m.center; },
                        [](const maps::PoincareRotation& m) -> const Point* { return &m.center; },
                        [](const auto&) -> const Point* { return nullptr; },
                    },
                    kind);
}

}  // namespace

std::string MappingSpec::kindName() const {
  static constexpr const char* kNames[] = {"Identity", "EuclideanRotation", "EuclideanReflectionAverage",
                                           "PoincareRotation", "MetricProjection"};
  return kNames[kind.index()];
}

void validateMapping(const SpaceModel& space, const MappingSpec& map) {
  std::visit(Overloaded{
                 [](const maps::Identity&) {},
                 [&](const maps::EuclideanRotation& m) {
                   if (space.kind() != ModelKind::Euclidean || space.dim() < 2) {
                     throw std::invalid_argument("EuclideanRotation needs a Euclidean space of dimension >= 2");
                   }
                   space.validate(m.center);
                   if (!std::isfinite(m.angle)) throw std::invalid_argument("rotation angle must be finite");
                 },
                 [&](const maps::EuclideanReflectionAverage& m) {
                   if (space.kind() != ModelKind::Euclidean) {
                     throw std::invalid_argument("EuclideanReflectionAverage needs a Euclidean space");
                   }
                   space.validate(m.center);
                 },
                 [&](const maps::PoincareRotation& m) {
                   if (space.kind() != ModelKind::PoincareDisk) {
                     throw std::invalid_argument("PoincareRotation needs the Poincare disk");
                   }
                   space.validate(m.center);
                   if (!std::isfinite(m.angle)) throw std::invalid_argument("rotation angle must be finite");
                 },
                 [&](const maps::MetricProjection& m) {
                   space.validate(m.center);
                   if (!(m.radius >= 0.0) || !std::isfinite(m.radius)) {
                     throw std::invalid_argument("projection ball radius must be a nonnegative number");
                   }
                 },
             },
             map.kind);

  if (const auto* ball = std::get_if<Domain::ClosedBall>(&map.domain.region)) {
    space.validate(ball->center);
    if (!(ball->radius > 0.0) || !std::isfinite(ball->radius)) {
      throw std::invalid_argument("domain ball radius must be positive");
    }
    if (const Point* c = invariantCenter(map.kind); c && !(*c == ball->center)) {
      throw std::invalid_argument(map.kindName() + " maps a ball into itself only when the ball is centred at its fixed centre");
    }
    if (const auto* proj = std::get_if<maps::MetricProjection>(&map.kind)) {
      if (rawDist(space, ball->center, proj->center) + proj->radius > ball->radius + kSlack) {
        throw std::invalid_argument("MetricProjection target ball must lie inside the domain ball");
      }
    }
  }
}

bool inDomain(const SpaceModel& space, const MappingSpec& map, const Point& x) {
  if (!space.contains(x)) return false;
  if (const auto* ball = std::get_if<Domain::ClosedBall>(&map.domain.region)) {
    return rawDist(space, x, ball->center) <= ball->radius + kSlack * std::max(1.0, ball->radius);
  }
  return true;
}

Point apply(const SpaceModel& space, const MappingSpec& map, const Point& x) {
  if (!inDomain(space, map, x)) {
    throw std::invalid_argument("point " + toString(x) + " lies outside the domain of " + map.kindName());
  }
  return std::visit(
      Overloaded{
          [&](const maps::Identity&) { return x; },
          [&](const maps::EuclideanRotation& m) {
            Point out = x;
            const double c = std::cos(m.angle);
            const double s = std::sin(m.angle);
            const double dx = x.coords[0] - m.center.coords[0];
            const double dy = x.coords[1] - m.center.coords[1];
            out.coords[0] = m.center.coords[0] + c * dx - s * dy;
            out.coords[1] = m.center.coords[1] + s * dx + c * dy;
            return out;
          },
          [&](const maps::EuclideanReflectionAverage& m) {
            Point out = x;
            for (std::size_t i = 1; i < out.coords.size(); ++i) out.coords[i] = m.center.coords[i];
            return out;
          },
          [&](const maps::PoincareRotation& m) {
            const Complex c{m.center.coords[0], m.center.coords[1]};
            const Complex z{x.coords[0], x.coords[1]};
            const Complex w = (z - c) / (1.0 - std::conj(c) * z);
            const Complex turned = w * std::polar(1.0, m.angle);
            const Complex back = (turned + c) / (1.0 + std::conj(c) * turned);
            return detail::clampToDisk(Point(ModelKind::PoincareDisk, {back.real(), back.imag()}));
          },
          [&](const maps::MetricProjection& m) {
            const double d = rawDist(space, m.center, x);
            if (d <= m.radius) return x;
            return rawCombine(space, m.center, x, m.radius / d);
          },
      },
      map.kind);
}

std::optional<Point> knownFixedPoint(const MappingSpec& map) {
  return std::visit(Overloaded{
                        [](const maps::Identity&) -> std::optional<Point> { return std::nullopt; },
                        [](const maps::MetricProjection& m) -> std::optional<Point> { return m.center; },
                        [](const auto& m) -> std::optional<Point> { return m.center; },
                    },
                    map.kind);
}

// ---------------------------------------------------------------------------

const Point& ApproxFixedPointSpec::anchor() const {
  return std::visit([](const auto& w) -> const Point& { return w.z; }, witness);
}

Point witnessPoint(const SpaceModel& space, const ApproxFixedPointSpec& afp, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("witness precision must be positive");
  return std::visit(Overloaded{
                        [](const ApproxFixedPointSpec::FixedPoint& w) { return w.z; },
                        [&](const ApproxFixedPointSpec::GeodesicApproach& w) {
                          const double span = dist(space, w.z, w.from);
                          if (span == 0.0) return w.z;
                          return combine(space, w.z, w.from, std::min(1.0, delta / (4.0 * span)));
                        },
                    },
                    afp.witness);
}

double derivedBound(const SpaceModel& space, const ApproxFixedPointSpec& afp, const MappingSpec& map) {
  if (!(afp.b > 0.0) || !std::isfinite(afp.b)) throw std::invalid_argument("approximate fixed point bound b must be positive");
  space.validate(afp.x);
  double delta = 1.0;
  for (int k = 0; k <= 9; ++k, delta /= 10.0) {
    const Point y = witnessPoint(space, afp, delta);
    const double dxy = dist(space, afp.x, y);
    const double residual = dist(space, y, apply(space, map, y));
    if (dxy > afp.b + kSlack || !(residual < delta)) {
      std::ostringstream os;
      os.precision(17);
      os << "approximate fixed point witness fails at delta=" << delta << ": d(x,y)=" << dxy << " (b=" << afp.b
         << "), d(y,Ty)=" << residual;
      throw std::runtime_error(os.str());
    }
  }
  const double bTilde = 2.0 * afp.b;
  const double dxTx = dist(space, afp.x, apply(space, map, afp.x));
  if (dxTx > bTilde + kSlack) {
    std::ostringstream os;
    os.precision(17);
    os << "d(x,Tx)=" << dxTx << " exceeds 2b=" << bTilde;
    throw std::runtime_error(os.str());
  }
  return bTilde;
}

}  // namespace ishikawa
