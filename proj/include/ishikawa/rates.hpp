#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ishikawa/moduli.hpp"

namespace ishikawa {

/// Arguments of the rate of asymptotic regularity. Nothing here refers to
/// the space, the map or the starting point: the bound is uniform in them.
struct RateInputs {
  double eps = 0.0;
  ModulusDescriptor eta = ModulusDescriptor::etaQuadratic();
  double b = 0.0;
  std::uint64_t N0 = 0;
  std::uint64_t L = 1;
  ModulusDescriptor theta = ModulusDescriptor::thetaLinear(4);
  ModulusDescriptor gamma = ModulusDescriptor::gammaZero();
};

struct RateReport {
  std::uint64_t P = 0;
  std::uint64_t gamma0 = 0;
  std::uint64_t phi = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> delta;  // (k, Delta(k))
  std::optional<std::uint64_t> empiricalFirstHit;
  std::optional<double> tightnessRatio;
  /// True when the eps > 2b shortcut produced phi without the closed form.
  bool shortcut = false;

  bool operator==(const RateReport&) const = default;
};

/// Throws std::invalid_argument unless eps > 0, b > 0, L >= 1 and the
/// descriptors have the right roles.
void validateRateInputs(const RateInputs& in);

/// ceil(L(b+1) / (eps * eta(b+1, eps/(L(b+1))))). Exact whenever eta has a
/// rational closed form; otherwise the floating quotient is nudged upwards
/// before the ceiling. Throws std::domain_error when eps/(L(b+1)) > 2.
std::uint64_t computeP(const RateInputs& in);

/// gamma(eps / (8b)).
std::uint64_t computeGamma0(const RateInputs& in);

/// Phi = theta(P + gamma0 + 1 + N0), or 0 when eps > 2b.
RateReport computePhi(const RateInputs& in);

/// Delta = theta(P + k + N0); k itself when eps > 2b. Throws std::logic_error
/// if the result is smaller than k (theta is then not a rate of divergence).
std::uint64_t computeDelta(const RateInputs& in, std::uint64_t k);

/// Phi = 0 when eps > 2b, since every residual is at most 2b.
std::optional<std::uint64_t> epsilonShortcut(const RateInputs& in);

nlohmann::json toJson(const RateReport& report);

}  // namespace ishikawa
