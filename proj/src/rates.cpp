#include "ishikawa/rates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ishikawa {

namespace {

constexpr double kCeilingNudge = 1e-12;

// ceil(L(b+1) / (eps * eta(b+1, arg))) where arg is the eta argument
std::uint64_t boundP(const RateInputs& in, const Rational& etaArg) {
  const Rational E = toRational(in.eps);
  const Rational R = toRational(in.b) + 1;
  const Rational numerator = Rational(BigInt(in.L)) * R;
  if (auto eta = in.eta.etaExact(R, etaArg)) {
    return toUint64(ceilOf(numerator / (E * *eta)));
  }
  const long double eta = in.eta.eta(toDouble(R), toDouble(etaArg));
  const long double q = static_cast<long double>(toDouble(numerator)) / (static_cast<long double>(in.eps) * eta);
  const long double nudged = q + std::max<long double>(kCeilingNudge, kCeilingNudge * q);
  if (!std::isfinite(static_cast<double>(nudged)) || nudged > 1.8e19L) {
    throw std::overflow_error("rate bound P does not fit in 64 bits");
  }
  return static_cast<std::uint64_t>(std::ceil(nudged));
}

Rational etaArgument(const RateInputs& in) {
  return toRational(in.eps) / (Rational(BigInt(in.L)) * (toRational(in.b) + 1));
}

}  // namespace

void validateRateInputs(const RateInputs& in) {
  if (!(in.eps > 0) || !std::isfinite(in.eps)) throw std::invalid_argument("eps must be positive");
  if (!(in.b > 0) || !std::isfinite(in.b)) throw std::invalid_argument("b must be positive");
  if (in.L < 1) throw std::invalid_argument("L must be ≥1");
  if (in.eta.role() != ModulusRole::Convexity) throw std::invalid_argument("eta must be a convexity modulus");
  if (in.theta.role() != ModulusRole::NaturalMap) throw std::invalid_argument("theta must be a map on naturals");
  if (in.gamma.role() != ModulusRole::CauchyModulus) throw std::invalid_argument("gamma must be a Cauchy modulus");
}

std::uint64_t computeP(const RateInputs& in) {
  validateRateInputs(in);
  const Rational arg = etaArgument(in);
  if (arg > 2) {
    throw std::domain_error("eps/(L(b+1)) exceeds 2, outside the domain of eta; use epsilonShortcut");
  }
  return boundP(in, arg);
}

std::uint64_t computeGamma0(const RateInputs& in) {
  validateRateInputs(in);
  // round eps/(8b) downwards so the index is never too small
  const Rational exact = toRational(in.eps) / (8 * toRational(in.b));
  double delta = toDouble(exact);
  if (toRational(delta) > exact) delta = std::nextafter(delta, 0.0);
  return in.gamma.cauchyIndex(delta);
}

std::optional<std::uint64_t> epsilonShortcut(const RateInputs& in) {
  validateRateInputs(in);
  if (in.eps > 2.0 * in.b) return 0;
  return std::nullopt;
}

RateReport computePhi(const RateInputs& in) {
  RateReport report;
  if (auto shortcut = epsilonShortcut(in)) {
    report.phi = *shortcut;
    report.shortcut = true;
    return report;
  }
  const Rational arg = etaArgument(in);
  // eta(r, 2) <= eta(r, eps') for eps' >= 2, so clamping the argument keeps the bound sound
  report.P = boundP(in, arg > 2 ? Rational(2) : arg);
  report.gamma0 = computeGamma0(in);
  report.phi = in.theta.at(report.P + report.gamma0 + 1 + in.N0);
  return report;
}

std::uint64_t computeDelta(const RateInputs& in, std::uint64_t k) {
  if (epsilonShortcut(in)) return k;
  const Rational arg = etaArgument(in);
  const std::uint64_t P = boundP(in, arg > 2 ? Rational(2) : arg);
  const std::uint64_t delta = in.theta.at(P + k + in.N0);
  if (delta < k) {
    throw std::logic_error("theta(P+k+N0) = " + std::to_string(delta) + " < k = " + std::to_string(k) +
                           ": theta is not a rate of divergence");
  }
  return delta;
}

nlohmann::json toJson(const RateReport& report) {
  nlohmann::json j;
  j["P"] = report.P;
  j["gamma0"] = report.gamma0;
  j["phi"] = report.phi;
  if (report.delta.empty()) {
    j["delta"] = nullptr;
  } else {
    j["delta"] = nlohmann::json::array();
    for (const auto& [k, d] : report.delta) j["delta"].push_back({{"k", k}, {"delta", d}});
  }
  j["empirical_first_hit"] = report.empiricalFirstHit ? nlohmann::json(*report.empiricalFirstHit) : nlohmann::json();
  j["tightness_ratio"] = report.tightnessRatio ? nlohmann::json(*report.tightnessRatio) : nlohmann::json();
  return j;
}

}  // namespace ishikawa
