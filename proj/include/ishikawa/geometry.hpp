#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>

#include <boost/container/small_vector.hpp>

#include "ishikawa/moduli.hpp"

namespace ishikawa {

enum class ModelKind { Euclidean, PoincareDisk };

/// Points of the Poincaré disk stay inside |z|^2 < 1 - kDiskMargin.
inline constexpr double kDiskMargin = 1e-12;

struct Point {
  using Coords = boost::container::small_vector<double, 4>;

  ModelKind model = ModelKind::Euclidean;
  Coords coords;

  Point() = default;
  Point(ModelKind m, Coords c) : model(m), coords(std::move(c)) {}
  Point(ModelKind m, std::initializer_list<double> c) : model(m), coords(c) {}

  std::size_t dim() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }

  bool operator==(const Point&) const = default;
};

Point euclideanPoint(std::initializer_list<double> coords);
Point diskPoint(double u, double v);

std::string toString(const Point& p);

/// A concrete uniformly convex W-hyperbolic space. Euclidean(dim) carries the
/// affine convex combination; the Poincaré disk carries hyperbolic geodesics
/// (curvature -1, a CAT(0) space). `ucModulus` defaults to eps^2/8.
class SpaceModel {
 public:
  static SpaceModel euclidean(std::size_t dim, ModulusDescriptor modulus = ModulusDescriptor::etaQuadratic());
  static SpaceModel poincareDisk(ModulusDescriptor modulus = ModulusDescriptor::etaQuadratic());

  ModelKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  const ModulusDescriptor& ucModulus() const { return modulus_; }
  SpaceModel withModulus(ModulusDescriptor modulus) const;
  std::string name() const;

  /// Throws std::invalid_argument unless p belongs to this model.
  void validate(const Point& p) const;
  bool contains(const Point& p) const;

  bool operator==(const SpaceModel&) const = default;

 private:
  SpaceModel(ModelKind kind, std::size_t dim, ModulusDescriptor modulus);

  ModelKind kind_;
  std::size_t dim_;
  ModulusDescriptor modulus_;
};

double dist(const SpaceModel& space, const Point& x, const Point& y);

/// W(x, y, lambda): the point on the geodesic from x to y at distance
/// lambda * d(x, y) from x. Throws for lambda outside [0,1].
Point combine(const SpaceModel& space, const Point& x, const Point& y, double lambda);

double ucModulusEval(const SpaceModel& space, double r, double eps);

/// Unchecked kernels used on the hot path of the iteration.
namespace detail {
double euclideanDist(const Point& x, const Point& y);
double diskDist(const Point& x, const Point& y);
Point euclideanCombine(const Point& x, const Point& y, double lambda);
Point diskCombine(const Point& x, const Point& y, double lambda);
/// Moves a disk point drifted by rounding back inside the interior margin.
Point clampToDisk(Point p);
}  // namespace detail

}  // namespace ishikawa
