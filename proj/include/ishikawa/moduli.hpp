#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ishikawa/rational.hpp"

namespace ishikawa {

class ModulusDescriptor;
using ModulusPtr = std::shared_ptr<const ModulusDescriptor>;

/// What a descriptor computes.
///   Convexity:     eta(r, eps) in (0,1], r > 0, eps in (0,2]
///   IndexModulus:  (r, k) -> N, the exponent forms eta_1/eta_2/eta_3
///   NaturalMap:    N -> N (rates of divergence, dyadic Cauchy moduli, Omega)
///   CauchyModulus: delta > 0 -> N
enum class ModulusRole { Convexity, IndexModulus, NaturalMap, CauchyModulus };

enum class Direction { Constant, Nondecreasing, Nonincreasing, Unknown };

/// Declared monotonicity in each argument. NaturalMap and CauchyModulus only
/// use `first`.
struct Monotonicity {
  Direction first = Direction::Unknown;
  Direction second = Direction::Unknown;
  bool operator==(const Monotonicity&) const = default;
};

namespace modulus {

struct EtaQuadratic {
  Rational coef{1, 8};  // eta(r, eps) = coef * eps^2
};
struct EtaHilbert {};  // eta(r, eps) = 1 - sqrt(1 - eps^2/4)
struct EtaConstant {
  Rational value;
};
struct EtaFromIndex {  // eta(r, eps) = 2^-eta1(r, max(0, ceil(-log2 eps)))
  ModulusPtr index;
};
struct IndexFromEta {  // eta1(r, k) = ceil(-log2 eta(r, 2^-k))
  ModulusPtr eta;
};
struct IndexShift {  // eta1(r, k) = eta2(r, k + shift)
  ModulusPtr index;
  std::int64_t shift = 1;
};
struct IndexAtRational {  // eta2(r, k) = eta3(q, k), q the exact rational value of r
  ModulusPtr index;
};
struct IndexAffine {  // perK*k + offset + perCeilR*ceil(r)
  std::int64_t perK = 0;
  std::int64_t offset = 0;
  std::int64_t perCeilR = 0;
};
struct ThetaLinear {  // n -> ceil(a*n + b)
  Rational a;
  Rational b;
};
struct OmegaAffine {  // n -> slope*n + shift
  std::uint64_t slope = 1;
  std::uint64_t shift = 0;
};
struct GammaZero {};
struct GammaDyadicShift {  // delta -> max(0, ceil(-log2 delta) + c)
  std::int64_t c = 0;
};
struct GammaGeometricTail {  // delta -> min N with coef * ratio^(N+1) <= delta
  Rational coef;
  Rational ratio;
};
struct GammaFromDyadic {  // delta -> dyadic(max(0, ceil(-log2 delta)))
  ModulusPtr dyadic;
};
struct GammaOffset {  // delta -> max(0, inner(delta) + offset)
  ModulusPtr inner;
  std::int64_t offset = 0;
};
/// Step function over naturals: the value of the entry with the largest
/// argument <= n. Used as a NaturalMap or as an IndexModulus ignoring r.
struct Tabulated {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;
};

}  // namespace modulus

/// Serializable closed-form modulus. Immutable; nested descriptors are shared.
class ModulusDescriptor {
 public:
  using Kind = std::variant<modulus::EtaQuadratic, modulus::EtaHilbert, modulus::EtaConstant,
                            modulus::EtaFromIndex, modulus::IndexFromEta, modulus::IndexShift,
                            modulus::IndexAtRational, modulus::IndexAffine, modulus::ThetaLinear,
                            modulus::OmegaAffine, modulus::GammaZero, modulus::GammaDyadicShift,
                            modulus::GammaGeometricTail, modulus::GammaFromDyadic, modulus::GammaOffset,
                            modulus::Tabulated>;

  explicit ModulusDescriptor(Kind kind);

  static ModulusDescriptor etaQuadratic(Rational coef = Rational(1, 8));
  static ModulusDescriptor etaHilbert();
  static ModulusDescriptor thetaLinear(Rational a, Rational b = 0);
  static ModulusDescriptor gammaZero();
  static ModulusDescriptor omegaAffine(std::uint64_t slope, std::uint64_t shift);
  static ModulusDescriptor indexAffine(std::int64_t perK, std::int64_t offset, std::int64_t perCeilR = 0);
  static ModulusDescriptor tabulated(std::vector<std::pair<std::uint64_t, std::uint64_t>> entries);

  const Kind& kind() const { return kind_; }
  ModulusRole role() const;
  std::string kindName() const;
  Monotonicity monotonicity() const;

  /// Convexity role. Throws std::domain_error outside r > 0, eps in (0,2].
  double eta(double r, double eps) const;
  /// Exact value when the closed form is rational at rational arguments.
  std::optional<Rational> etaExact(double r, double eps) const;
  std::optional<Rational> etaExact(const Rational& r, const Rational& eps) const;

  /// IndexModulus role. Throws on r <= 0 or k < 0.
  std::int64_t index(double r, std::int64_t k) const;

  /// NaturalMap role.
  std::uint64_t at(std::uint64_t n) const;

  /// CauchyModulus role. Throws std::domain_error for delta <= 0.
  std::uint64_t cauchyIndex(double delta) const;

  friend bool operator==(const ModulusDescriptor& a, const ModulusDescriptor& b);

 private:
  Kind kind_;
};

ModulusPtr share(ModulusDescriptor d);

/// Scalar sequence in [0,1].
class SequenceDescriptor {
 public:
  struct Constant {
    Rational value;
  };
  struct Geometric {  // c * q^n
    Rational c;
    Rational q;
  };
  /// values[n] for n < size, the last value afterwards.
  struct Tabulated {
    std::vector<Rational> values;
  };
  using Kind = std::variant<Constant, Geometric, Tabulated>;

  explicit SequenceDescriptor(Kind kind);
  static SequenceDescriptor constant(Rational c);
  static SequenceDescriptor geometric(Rational c, Rational q);

  const Kind& kind() const { return kind_; }
  double operator()(std::uint64_t n) const;
  Rational exact(std::uint64_t n) const;
  /// Exact infimum over all n.
  Rational infimum() const;
  /// Exact supremum over n >= from.
  Rational supremumFrom(std::uint64_t from) const;
  bool isZero() const;

  friend bool operator==(const SequenceDescriptor& a, const SequenceDescriptor& b);

 private:
  Kind kind_;
  double cachedC_ = 0.0;
  double cachedQ_ = 0.0;
  std::vector<double> cachedValues_;
};

/// The scalar sequences of the iteration together with their witnesses:
/// theta a rate of divergence for sum lambda_n(1-lambda_n), s_n <= 1 - 1/L
/// for n >= N0, gamma a Cauchy modulus for alpha_n = sum_{i<=n} s_i(1-lambda_i).
struct Schedule {
  SequenceDescriptor lambda;
  SequenceDescriptor s;
  ModulusDescriptor theta;
  std::uint64_t L = 1;
  std::uint64_t N0 = 0;
  ModulusDescriptor gamma;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Names each violated schedule invariant; empty when the schedule is valid.
std::vector<std::string> scheduleViolations(const Schedule& schedule);

// Constructors for witnesses ------------------------------------------------

/// theta(n) = ceil(n / (lambda(1-lambda))). Throws unless 0 < lambda < 1.
ModulusDescriptor thetaForConstantLambda(const Rational& lambda);

/// Cauchy modulus for s_n = c q^n: smallest N with
/// c (1 - inf lambda) q^(N+1) / (1-q) <= delta. Throws for q >= 1.
ModulusDescriptor gammaForGeometricS(const Rational& c, const Rational& q, const SequenceDescriptor& lambda);

/// Real-argument adapter for a dyadic modulus p -> gamma(p).
ModulusDescriptor gammaFromDyadic(const ModulusDescriptor& dyadic);

ModulusDescriptor omegaForNonexpansive(std::uint64_t b);
ModulusDescriptor omegaForLipschitz(std::uint64_t lipschitzBound, std::uint64_t b);
/// Omega(n) = n 2^alphaT(0) + 1 + b for a uniformly continuous map.
ModulusDescriptor omegaForUniformlyContinuous(const ModulusDescriptor& alphaT, std::uint64_t b);
ModulusDescriptor omegaForBoundedSpace(std::uint64_t diameterBound);

// Conversions between the four forms of the convexity modulus ---------------

ModulusDescriptor etaToEta1(const ModulusDescriptor& eta);
ModulusDescriptor eta1ToEta(const ModulusDescriptor& eta1);
ModulusDescriptor eta2ToEta1(const ModulusDescriptor& eta2);
ModulusDescriptor eta3ToEta2(const ModulusDescriptor& eta3);

// Witness validation ---------------------------------------------------------

struct WitnessReport {
  std::string name;
  bool passed = true;
  std::uint64_t checked = 0;
  std::optional<std::uint64_t> firstFailure;  // n for theta, index into deltas for gamma
  std::string detail;
};

/// Checks sum_{k<=theta(n)} lambda_k(1-lambda_k) >= n - 1e-9 for n <= nMax.
WitnessReport verifyTheta(const Schedule& schedule, std::uint64_t nMax);

/// Checks alpha_{gamma(d)+n} - alpha_{gamma(d)} <= d + 1e-9 for each d and n <= nMax.
WitnessReport verifyGamma(const Schedule& schedule, const std::vector<double>& deltas, std::uint64_t nMax);

}  // namespace ishikawa
