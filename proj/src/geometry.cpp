#include "ishikawa/geometry.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace ishikawa {

namespace {

using Complex = std::complex<double>;

Complex asComplex(const Point& p) { return {p.coords[0], p.coords[1]}; }

Point fromComplex(Complex z) { return Point(ModelKind::PoincareDisk, {z.real(), z.imag()}); }

}  // namespace

Point euclideanPoint(std::initializer_list<double> coords) { return Point(ModelKind::Euclidean, coords); }

Point diskPoint(double u, double v) { return Point(ModelKind::PoincareDisk, {u, v}); }

std::string toString(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << (p.model == ModelKind::PoincareDisk ? "disk(" : "(");
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    if (i) os << ", ";
    os << p.coords[i];
  }
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------

SpaceModel::SpaceModel(ModelKind kind, std::size_t dim, ModulusDescriptor modulus)
    : kind_(kind), dim_(dim), modulus_(std::move(modulus)) {
  if (modulus_.role() != ModulusRole::Convexity) {
    throw std::invalid_argument("space modulus must be a convexity modulus, got " + modulus_.kindName());
  }
}

SpaceModel SpaceModel::euclidean(std::size_t dim, ModulusDescriptor modulus) {
  if (dim == 0) throw std::invalid_argument("Euclidean dimension must be positive");
  return SpaceModel(ModelKind::Euclidean, dim, std::move(modulus));
}

SpaceModel SpaceModel::poincareDisk(ModulusDescriptor modulus) {
  return SpaceModel(ModelKind::PoincareDisk, 2, std::move(modulus));
}

SpaceModel SpaceModel::withModulus(ModulusDescriptor modulus) const {
  return SpaceModel(kind_, dim_, std::move(modulus));
}

std::string SpaceModel::name() const {
  if (kind_ == ModelKind::PoincareDisk) return "PoincareDisk";
  return "Euclidean(" + std::to_string(dim_) + ")";
}

bool SpaceModel::contains(const Point& p) const {
  if (p.model != kind_ || p.dim() != dim_) return false;
  for (double c : p.coords) {
    if (!std::isfinite(c)) return false;
  }
  if (kind_ == ModelKind::PoincareDisk) {
    return p.coords[0] * p.coords[0] + p.coords[1] * p.coords[1] < 1.0 - kDiskMargin;
  }
  return true;
}

void SpaceModel::validate(const Point& p) const {
  if (p.model != kind_) {
    throw std::invalid_argument("point " + toString(p) + " does not belong to model " + name());
  }
  if (p.dim() != dim_) {
    throw std::invalid_argument("dimension mismatch: point " + toString(p) + " in " + name());
  }
  if (!contains(p)) {
    throw std::invalid_argument("point " + toString(p) + " lies outside the open disk");
  }
}

// ---------------------------------------------------------------------------

namespace detail {

double euclideanDist(const Point& x, const Point& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    const double d = x.coords[i] - y.coords[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double diskDist(const Point& x, const Point& y) {
  const Complex z = asComplex(x);
  const Complex w = asComplex(y);
  const double num = std::abs(z - w);
  if (num == 0.0) return 0.0;
  const double den = std::abs(1.0 - std::conj(z) * w);
  return 2.0 * std::atanh(std::min(num / den, 1.0 - 1e-16));
}

Point euclideanCombine(const Point& x, const Point& y, double lambda) {
  Point out = x;
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    out.coords[i] = (1.0 - lambda) * x.coords[i] + lambda * y.coords[i];
  }
  return out;
}

Point clampToDisk(Point p) {
  const double r2 = p.coords[0] * p.coords[0] + p.coords[1] * p.coords[1];
  const double limit = 1.0 - 2.0 * kDiskMargin;
  if (r2 >= limit) {
    const double scale = std::sqrt(limit / r2);
    p.coords[0] *= scale;
    p.coords[1] *= scale;
  }
  return p;
}

Point diskCombine(const Point& x, const Point& y, double lambda) {
  // translate x to the origin, move radially, translate back
  const Complex a = asComplex(x);
  const Complex b = asComplex(y);
  const Complex w = (b - a) / (1.0 - std::conj(a) * b);
  const double rho = std::abs(w);
  if (rho == 0.0) return x;
  const double t = std::tanh(lambda * std::atanh(std::min(rho, 1.0 - 1e-16)));
  const Complex m = w * (t / rho);
  return clampToDisk(fromComplex((m + a) / (1.0 + std::conj(a) * m)));
}

}  // namespace detail

double dist(const SpaceModel& space, const Point& x, const Point& y) {
  space.validate(x);
  space.validate(y);
  return space.kind() == ModelKind::PoincareDisk ? detail::diskDist(x, y) : detail::euclideanDist(x, y);
}

Point combine(const SpaceModel& space, const Point& x, const Point& y, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("convex combination weight must lie in [0,1]");
  }
  space.validate(x);
  space.validate(y);
  if (lambda == 0.0) return x;
  if (lambda == 1.0) return y;
  return space.kind() == ModelKind::PoincareDisk ? detail::diskCombine(x, y, lambda)
                                                 : detail::euclideanCombine(x, y, lambda);
}

double ucModulusEval(const SpaceModel& space, double r, double eps) { return space.ucModulus().eta(r, eps); }

}  // namespace ishikawa
