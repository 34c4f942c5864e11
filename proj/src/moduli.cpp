#include "ishikawa/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
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

void requireRole(const ModulusPtr& p, ModulusRole role, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + ": missing nested modulus");
  const bool tabulatedIndex = role == ModulusRole::IndexModulus &&
                              std::holds_alternative<modulus::Tabulated>(p->kind());
  if (p->role() != role && !tabulatedIndex) {
    throw std::invalid_argument(std::string(what) + ": nested modulus '" + p->kindName() +
                                "' has the wrong role");
  }
}

// ceil(-log2 x) for x > 0, exact for doubles
std::int64_t ceilNegLog2(double x) {
  if (!(x > 0) || !std::isfinite(x)) throw std::domain_error("-log2 of a nonpositive value");
  int e = 0;
  std::frexp(x, &e);  // log2 x in [e-1, e)
  return 1 - static_cast<std::int64_t>(e);
}

std::int64_t ceilNegLog2(const Rational& x) { return ceilLog2(Rational(1 / x)); }

void checkEtaDomain(double r, double eps) {
  if (!(r > 0) || !std::isfinite(r)) throw std::domain_error("modulus argument r must be positive");
  if (!(eps > 0) || eps > 2) throw std::domain_error("modulus argument eps must lie in (0,2]");
}

std::uint64_t tableLookup(const modulus::Tabulated& t, std::uint64_t n) {
  auto it = std::upper_bound(t.entries.begin(), t.entries.end(), n,
                             [](std::uint64_t v, const auto& e) { return v < e.first; });
  if (it == t.entries.begin()) {
    throw std::domain_error("tabulated modulus undefined below argument " + std::to_string(t.entries.front().first));
  }
  return std::prev(it)->second;
}

Direction tableDirection(const modulus::Tabulated& t) {
  bool up = true;
  bool down = true;
  for (std::size_t i = 1; i < t.entries.size(); ++i) {
    up = up && t.entries[i].second >= t.entries[i - 1].second;
    down = down && t.entries[i].second <= t.entries[i - 1].second;
  }
  if (up && down) return Direction::Constant;
  if (up) return Direction::Nondecreasing;
  if (down) return Direction::Nonincreasing;
  return Direction::Unknown;
}

Direction signDirection(std::int64_t coefficient) {
  if (coefficient == 0) return Direction::Constant;
  return coefficient > 0 ? Direction::Nondecreasing : Direction::Nonincreasing;
}

Direction flip(Direction d) {
  if (d == Direction::Nondecreasing) return Direction::Nonincreasing;
  if (d == Direction::Nonincreasing) return Direction::Nondecreasing;
  return d;
}

bool samePtr(const ModulusPtr& a, const ModulusPtr& b) {
  if (!a || !b) return a == b;
  return *a == *b;
}

}  // namespace

// ---------------------------------------------------------------------------

ModulusDescriptor::ModulusDescriptor(Kind kind) : kind_(std::move(kind)) {
  std::visit(Overloaded{
                 [](const modulus::EtaQuadratic& k) {
                   if (k.coef <= 0) throw std::invalid_argument("EtaQuadratic: coef must be positive");
                 },
                 [](const modulus::EtaHilbert&) {},
                 [](const modulus::EtaConstant& k) {
                   if (k.value <= 0 || k.value > 1) throw std::invalid_argument("EtaConstant: value must lie in (0,1]");
                 },
                 [](const modulus::EtaFromIndex& k) { requireRole(k.index, ModulusRole::IndexModulus, "EtaFromIndex"); },
                 [](const modulus::IndexFromEta& k) { requireRole(k.eta, ModulusRole::Convexity, "IndexFromEta"); },
                 [](const modulus::IndexShift& k) {
                   requireRole(k.index, ModulusRole::IndexModulus, "IndexShift");
                   if (k.shift < 0) throw std::invalid_argument("IndexShift: shift must be nonnegative");
                 },
                 [](const modulus::IndexAtRational& k) { requireRole(k.index, ModulusRole::IndexModulus, "IndexAtRational"); },
                 [](const modulus::IndexAffine&) {},
                 [](const modulus::ThetaLinear& k) {
                   if (k.a < 0) throw std::invalid_argument("ThetaLinear: slope a must be nonnegative");
                 },
                 [](const modulus::OmegaAffine&) {},
                 [](const modulus::GammaZero&) {},
                 [](const modulus::GammaDyadicShift&) {},
                 [](const modulus::GammaGeometricTail& k) {
                   if (k.coef < 0) throw std::invalid_argument("GammaGeometricTail: coef must be nonnegative");
                   if (k.ratio < 0 || k.ratio >= 1) throw std::invalid_argument("GammaGeometricTail: ratio must lie in [0,1)");
                 },
                 [](const modulus::GammaFromDyadic& k) { requireRole(k.dyadic, ModulusRole::NaturalMap, "GammaFromDyadic"); },
                 [](const modulus::GammaOffset& k) { requireRole(k.inner, ModulusRole::CauchyModulus, "GammaOffset"); },
                 [](const modulus::Tabulated& k) {
                   if (k.entries.empty()) throw std::invalid_argument("Tabulated: at least one entry required");
                   for (std::size_t i = 1; i < k.entries.size(); ++i) {
                     if (k.entries[i].first <= k.entries[i - 1].first) {
                       throw std::invalid_argument("Tabulated: arguments must be strictly increasing");
                     }
                   }
                 },
             },
             kind_);
}

ModulusDescriptor ModulusDescriptor::etaQuadratic(Rational coef) {
  return ModulusDescriptor(modulus::EtaQuadratic{std::move(coef)});
}
ModulusDescriptor ModulusDescriptor::etaHilbert() { return ModulusDescriptor(modulus::EtaHilbert{}); }
ModulusDescriptor ModulusDescriptor::thetaLinear(Rational a, Rational b) {
  return ModulusDescriptor(modulus::ThetaLinear{std::move(a), std::move(b)});
}
ModulusDescriptor ModulusDescriptor::gammaZero() { return ModulusDescriptor(modulus::GammaZero{}); }
ModulusDescriptor ModulusDescriptor::omegaAffine(std::uint64_t slope, std::uint64_t shift) {
  return ModulusDescriptor(modulus::OmegaAffine{slope, shift});
}
ModulusDescriptor ModulusDescriptor::indexAffine(std::int64_t perK, std::int64_t offset, std::int64_t perCeilR) {
  return ModulusDescriptor(modulus::IndexAffine{perK, offset, perCeilR});
}
ModulusDescriptor ModulusDescriptor::tabulated(std::vector<std::pair<std::uint64_t, std::uint64_t>> entries) {
  return ModulusDescriptor(modulus::Tabulated{std::move(entries)});
}

ModulusPtr share(ModulusDescriptor d) { return std::make_shared<const ModulusDescriptor>(std::move(d)); }

ModulusRole ModulusDescriptor::role() const {
  return std::visit(Overloaded{
                        [](const modulus::EtaQuadratic&) { return ModulusRole::Convexity; },
                        [](const modulus::EtaHilbert&) { return ModulusRole::Convexity; },
                        [](const modulus::EtaConstant&) { return ModulusRole::Convexity; },
                        [](const modulus::EtaFromIndex&) { return ModulusRole::Convexity; },
                        [](const modulus::IndexFromEta&) { return ModulusRole::IndexModulus; },
                        [](const modulus::IndexShift&) { return ModulusRole::IndexModulus; },
                        [](const modulus::IndexAtRational&) { return ModulusRole::IndexModulus; },
                        [](const modulus::IndexAffine&) { return ModulusRole::IndexModulus; },
                        [](const modulus::ThetaLinear&) { return ModulusRole::NaturalMap; },
                        [](const modulus::OmegaAffine&) { return ModulusRole::NaturalMap; },
                        [](const modulus::Tabulated&) { return ModulusRole::NaturalMap; },
                        [](const auto&) { return ModulusRole::CauchyModulus; },
                    },
                    kind_);
}

std::string ModulusDescriptor::kindName() const {
  static constexpr const char* kNames[] = {
      "EtaQuadratic", "EtaHilbert",  "EtaConstant", "EtaFromIndex",     "IndexFromEta",       "IndexShift",
      "IndexAtRational", "IndexAffine", "ThetaLinear", "OmegaAffine", "GammaZero", "GammaDyadicShift",
      "GammaGeometricTail", "GammaFromDyadic", "GammaOffset", "Tabulated"};
  static_assert(std::size(kNames) == std::variant_size_v<Kind>);
  return kNames[kind_.index()];
}

Monotonicity ModulusDescriptor::monotonicity() const {
  using D = Direction;
  return std::visit(
      Overloaded{
          [](const modulus::EtaQuadratic&) { return Monotonicity{D::Constant, D::Nondecreasing}; },
          [](const modulus::EtaHilbert&) { return Monotonicity{D::Constant, D::Nondecreasing}; },
          [](const modulus::EtaConstant&) { return Monotonicity{D::Constant, D::Constant}; },
          [](const modulus::EtaFromIndex& k) {
            const auto inner = k.index->monotonicity();
            // eps -> ceil(-log2 eps) is nonincreasing, and 2^-m is decreasing in m
            return Monotonicity{flip(inner.first), inner.second == D::Constant ? D::Constant : D::Nondecreasing};
          },
          [](const modulus::IndexFromEta& k) {
            const auto inner = k.eta->monotonicity();
            return Monotonicity{flip(inner.first), inner.second == D::Constant ? D::Constant : D::Nondecreasing};
          },
          [](const modulus::IndexShift& k) { return k.index->monotonicity(); },
          [](const modulus::IndexAtRational& k) { return k.index->monotonicity(); },
          [](const modulus::IndexAffine& k) { return Monotonicity{signDirection(k.perCeilR), signDirection(k.perK)}; },
          [](const modulus::ThetaLinear& k) {
            return Monotonicity{k.a == 0 ? D::Constant : D::Nondecreasing, D::Constant};
          },
          [](const modulus::OmegaAffine& k) {
            return Monotonicity{k.slope == 0 ? D::Constant : D::Nondecreasing, D::Constant};
          },
          [](const modulus::GammaZero&) { return Monotonicity{D::Constant, D::Constant}; },
          [](const modulus::Tabulated& k) { return Monotonicity{tableDirection(k), D::Constant}; },
          // Cauchy moduli are antitone in the precision delta
          [](const auto&) { return Monotonicity{D::Nonincreasing, D::Constant}; },
      },
      kind_);
}

std::optional<Rational> ModulusDescriptor::etaExact(double r, double eps) const {
  checkEtaDomain(r, eps);
  return etaExact(toRational(r), toRational(eps));
}

std::optional<Rational> ModulusDescriptor::etaExact(const Rational& r, const Rational& eps) const {
  if (r <= 0) throw std::domain_error("modulus argument r must be positive");
  if (eps <= 0 || eps > 2) throw std::domain_error("modulus argument eps must lie in (0,2]");
  return std::visit(Overloaded{
                        [&](const modulus::EtaQuadratic& k) -> std::optional<Rational> { return k.coef * eps * eps; },
                        [&](const modulus::EtaConstant& k) -> std::optional<Rational> { return k.value; },
                        [&](const modulus::EtaFromIndex& k) -> std::optional<Rational> {
                          const std::int64_t level = std::max<std::int64_t>(0, ceilNegLog2(eps));
                          return pow2(-k.index->index(toDouble(r), level));
                        },
                        [&](const auto&) -> std::optional<Rational> {
                          if (role() != ModulusRole::Convexity) {
                            throw std::logic_error(kindName() + " is not a convexity modulus");
                          }
                          return std::nullopt;
                        },
                    },
                    kind_);
}

double ModulusDescriptor::eta(double r, double eps) const {
  checkEtaDomain(r, eps);
  return std::visit(Overloaded{
                        [&](const modulus::EtaQuadratic& k) { return toDouble(k.coef) * eps * eps; },
                        [&](const modulus::EtaHilbert&) {
                          // 1 - sqrt(1 - t) written without cancellation
                          const double t = eps * eps / 4.0;
                          return t / (1.0 + std::sqrt(1.0 - t));
                        },
                        [&](const modulus::EtaConstant& k) { return toDouble(k.value); },
                        [&](const modulus::EtaFromIndex& k) {
                          const std::int64_t level = std::max<std::int64_t>(0, ceilNegLog2(eps));
                          return std::ldexp(1.0, static_cast<int>(-std::min<std::int64_t>(k.index->index(r, level), 2000)));
                        },
                        [&](const auto&) -> double { throw std::logic_error(kindName() + " is not a convexity modulus"); },
                    },
                    kind_);
}

std::int64_t ModulusDescriptor::index(double r, std::int64_t k) const {
  if (!(r > 0) || !std::isfinite(r)) throw std::domain_error("modulus argument r must be positive");
  if (k < 0) throw std::domain_error("modulus index k must be a natural number");
  return std::visit(Overloaded{
                        [&](const modulus::IndexFromEta& m) -> std::int64_t {
                          const std::int64_t level = std::min<std::int64_t>(k, 1000);
                          if (auto exact = m.eta->etaExact(r, std::ldexp(1.0, static_cast<int>(-level)))) {
                            return ceilNegLog2(*exact);
                          }
                          return ceilNegLog2(m.eta->eta(r, std::ldexp(1.0, static_cast<int>(-level))));
                        },
                        [&](const modulus::IndexShift& m) { return m.index->index(r, k + m.shift); },
                        [&](const modulus::IndexAtRational& m) {
                          // a finite double already is the exact rational value of r
                          return m.index->index(r, k);
                        },
                        [&](const modulus::IndexAffine& m) {
                          return m.perK * k + m.offset + m.perCeilR * static_cast<std::int64_t>(std::ceil(r));
                        },
                        [&](const modulus::Tabulated& m) {
                          return static_cast<std::int64_t>(tableLookup(m, static_cast<std::uint64_t>(k)));
                        },
                        [&](const auto&) -> std::int64_t { throw std::logic_error(kindName() + " is not an index modulus"); },
                    },
                    kind_);
}

std::uint64_t ModulusDescriptor::at(std::uint64_t n) const {
  return std::visit(Overloaded{
                        [&](const modulus::ThetaLinear& m) -> std::uint64_t {
                          const BigInt v = ceilOf(m.a * Rational(BigInt(n)) + m.b);
                          return v < 0 ? 0 : toUint64(v);
                        },
                        [&](const modulus::OmegaAffine& m) -> std::uint64_t { return m.slope * n + m.shift; },
                        [&](const modulus::Tabulated& m) { return tableLookup(m, n); },
                        [&](const auto&) -> std::uint64_t { throw std::logic_error(kindName() + " is not a map on naturals"); },
                    },
                    kind_);
}

std::uint64_t ModulusDescriptor::cauchyIndex(double delta) const {
  if (!(delta > 0) || !std::isfinite(delta)) throw std::domain_error("Cauchy modulus precision must be positive");
  return std::visit(Overloaded{
                        [](const modulus::GammaZero&) -> std::uint64_t { return 0; },
                        [&](const modulus::GammaDyadicShift& m) -> std::uint64_t {
                          return static_cast<std::uint64_t>(std::max<std::int64_t>(0, ceilNegLog2(delta) + m.c));
                        },
                        [&](const modulus::GammaGeometricTail& m) -> std::uint64_t {
                          const Rational target = toRational(delta);
                          Rational tail = m.coef * m.ratio;
                          std::uint64_t n = 0;
                          while (tail > target) {
                            tail *= m.ratio;
                            ++n;
                          }
                          return n;
                        },
                        [&](const modulus::GammaFromDyadic& m) {
                          return m.dyadic->at(static_cast<std::uint64_t>(std::max<std::int64_t>(0, ceilNegLog2(delta))));
                        },
                        [&](const modulus::GammaOffset& m) -> std::uint64_t {
                          const auto base = static_cast<std::int64_t>(m.inner->cauchyIndex(delta));
                          return static_cast<std::uint64_t>(std::max<std::int64_t>(0, base + m.offset));
                        },
                        [&](const auto&) -> std::uint64_t { throw std::logic_error(kindName() + " is not a Cauchy modulus"); },
                    },
                    kind_);
}

bool operator==(const ModulusDescriptor& a, const ModulusDescriptor& b) {
  if (a.kind_.index() != b.kind_.index()) return false;
  return std::visit(
      [&](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b.kind_);
        if constexpr (std::is_same_v<T, modulus::EtaQuadratic>) return lhs.coef == rhs.coef;
        else if constexpr (std::is_same_v<T, modulus::EtaConstant>) return lhs.value == rhs.value;
        else if constexpr (std::is_same_v<T, modulus::EtaFromIndex>) return samePtr(lhs.index, rhs.index);
        else if constexpr (std::is_same_v<T, modulus::IndexFromEta>) return samePtr(lhs.eta, rhs.eta);
        else if constexpr (std::is_same_v<T, modulus::IndexShift>) return lhs.shift == rhs.shift && samePtr(lhs.index, rhs.index);
        else if constexpr (std::is_same_v<T, modulus::IndexAtRational>) return samePtr(lhs.index, rhs.index);
        else if constexpr (std::is_same_v<T, modulus::IndexAffine>)
          return lhs.perK == rhs.perK && lhs.offset == rhs.offset && lhs.perCeilR == rhs.perCeilR;
        else if constexpr (std::is_same_v<T, modulus::ThetaLinear>) return lhs.a == rhs.a && lhs.b == rhs.b;
        else if constexpr (std::is_same_v<T, modulus::OmegaAffine>) return lhs.slope == rhs.slope && lhs.shift == rhs.shift;
        else if constexpr (std::is_same_v<T, modulus::GammaDyadicShift>) return lhs.c == rhs.c;
        else if constexpr (std::is_same_v<T, modulus::GammaGeometricTail>) return lhs.coef == rhs.coef && lhs.ratio == rhs.ratio;
        else if constexpr (std::is_same_v<T, modulus::GammaFromDyadic>) return samePtr(lhs.dyadic, rhs.dyadic);
        else if constexpr (std::is_same_v<T, modulus::GammaOffset>) return lhs.offset == rhs.offset && samePtr(lhs.inner, rhs.inner);
        else if constexpr (std::is_same_v<T, modulus::Tabulated>) return lhs.entries == rhs.entries;
        else return true;
      },
      a.kind_);
}

// ---------------------------------------------------------------------------

SequenceDescriptor::SequenceDescriptor(Kind kind) : kind_(std::move(kind)) {
  std::visit(Overloaded{
                 [this](const Constant& k) { cachedC_ = toDouble(k.value); },
                 [this](const Geometric& k) {
                   if (k.q < 0) throw std::invalid_argument("geometric sequence ratio must be nonnegative");
                   cachedC_ = toDouble(k.c);
                   cachedQ_ = toDouble(k.q);
                 },
                 [this](const Tabulated& k) {
                   if (k.values.empty()) throw std::invalid_argument("tabulated sequence needs at least one value");
                   cachedValues_.reserve(k.values.size());
                   for (const auto& v : k.values) cachedValues_.push_back(toDouble(v));
                 },
             },
             kind_);
}

SequenceDescriptor SequenceDescriptor::constant(Rational c) { return SequenceDescriptor(Constant{std::move(c)}); }
SequenceDescriptor SequenceDescriptor::geometric(Rational c, Rational q) {
  return SequenceDescriptor(Geometric{std::move(c), std::move(q)});
}

double SequenceDescriptor::operator()(std::uint64_t n) const {
  switch (kind_.index()) {
    case 0:
      return cachedC_;
    case 1:
      return cachedC_ * std::pow(cachedQ_, static_cast<double>(n));
    default:
      return n < cachedValues_.size() ? cachedValues_[n] : cachedValues_.back();
  }
}

Rational SequenceDescriptor::exact(std::uint64_t n) const {
  return std::visit(Overloaded{
                        [](const Constant& k) { return k.value; },
                        [n](const Geometric& k) {
                          Rational v = k.c;
                          const auto num = boost::multiprecision::pow(boost::multiprecision::numerator(k.q), static_cast<unsigned>(n));
                          const auto den = boost::multiprecision::pow(boost::multiprecision::denominator(k.q), static_cast<unsigned>(n));
                          return Rational(v * Rational(num, den));
                        },
                        [n](const Tabulated& k) { return n < k.values.size() ? k.values[n] : k.values.back(); },
                    },
                    kind_);
}

Rational SequenceDescriptor::infimum() const {
  return std::visit(Overloaded{
                        [](const Constant& k) { return k.value; },
                        [](const Geometric& k) -> Rational {
                          if (k.q == 1) return k.c;
                          return k.c >= 0 ? Rational(0) : k.c;
                        },
                        [](const Tabulated& k) { return *std::min_element(k.values.begin(), k.values.end()); },
                    },
                    kind_);
}

Rational SequenceDescriptor::supremumFrom(std::uint64_t from) const {
  return std::visit(Overloaded{
                        [](const Constant& k) { return k.value; },
                        [&](const Geometric& k) -> Rational {
                          if (k.c <= 0) return k.q == 1 ? k.c : Rational(0);
                          return exact(from);
                        },
                        [&](const Tabulated& k) {
                          if (from >= k.values.size()) return k.values.back();
                          return *std::max_element(k.values.begin() + static_cast<std::ptrdiff_t>(from), k.values.end());
                        },
                    },
                    kind_);
}

bool SequenceDescriptor::isZero() const {
  return std::visit(Overloaded{
                        [](const Constant& k) { return k.value == 0; },
                        [](const Geometric& k) { return k.c == 0; },
                        [](const Tabulated& k) {
                          return std::all_of(k.values.begin(), k.values.end(), [](const Rational& v) { return v == 0; });
                        },
                    },
                    kind_);
}

bool operator==(const SequenceDescriptor& a, const SequenceDescriptor& b) {
  if (a.kind_.index() != b.kind_.index()) return false;
  return std::visit(Overloaded{
                        [&](const SequenceDescriptor::Constant& k) {
                          return k.value == std::get<SequenceDescriptor::Constant>(b.kind_).value;
                        },
                        [&](const SequenceDescriptor::Geometric& k) {
                          const auto& o = std::get<SequenceDescriptor::Geometric>(b.kind_);
                          return k.c == o.c && k.q == o.q;
                        },
                        [&](const SequenceDescriptor::Tabulated& k) {
                          return k.values == std::get<SequenceDescriptor::Tabulated>(b.kind_).values;
                        },
                    },
                    a.kind_);
}

namespace {

void checkUnitInterval(const SequenceDescriptor& seq, const std::string& name, std::vector<std::string>& out) {
  std::visit(Overloaded{
                 [&](const SequenceDescriptor::Constant& k) {
                   if (k.value < 0 || k.value > 1) out.push_back(name + "_n must lie in [0,1]");
                 },
                 [&](const SequenceDescriptor::Geometric& k) {
                   if (k.c < 0 || k.c > 1 || k.q > 1) out.push_back(name + "_n must lie in [0,1]");
                 },
                 [&](const SequenceDescriptor::Tabulated& k) {
                   for (const auto& v : k.values) {
                     if (v < 0 || v > 1) {
                       out.push_back(name + "_n must lie in [0,1]");
                       return;
                     }
                   }
                 },
             },
             seq.kind());
}

}  // namespace

std::vector<std::string> scheduleViolations(const Schedule& schedule) {
  std::vector<std::string> out;
  checkUnitInterval(schedule.lambda, "lambda", out);
  checkUnitInterval(schedule.s, "s", out);
  if (schedule.L < 1) {
    out.emplace_back("L must be ≥1");
  } else {
    const Rational cap = 1 - Rational(1, static_cast<long long>(schedule.L));
    const Rational sup = schedule.s.supremumFrom(schedule.N0);
    if (sup > cap) {
      out.push_back("s_n <= 1 - 1/L must hold for all n >= N0 (sup s_n = " + formatRational(sup) +
                    " exceeds " + formatRational(cap) + ")");
    }
  }
  if (schedule.theta.role() != ModulusRole::NaturalMap) {
    out.emplace_back("theta must be a map on naturals");
  } else if (const auto m = schedule.theta.monotonicity().first;
             m != Direction::Nondecreasing && m != Direction::Constant) {
    out.emplace_back("theta must be nondecreasing");
  }
  if (schedule.gamma.role() != ModulusRole::CauchyModulus) {
    out.emplace_back("gamma must be a Cauchy modulus");
  }
  return out;
}

// ---------------------------------------------------------------------------

ModulusDescriptor thetaForConstantLambda(const Rational& lambda) {
  if (lambda <= 0 || lambda >= 1) {
    throw std::invalid_argument("rate of divergence needs 0 < lambda < 1 (the series diverges only then)");
  }
  return ModulusDescriptor::thetaLinear(1 / (lambda * (1 - lambda)), 0);
}

ModulusDescriptor gammaForGeometricS(const Rational& c, const Rational& q, const SequenceDescriptor& lambda) {
  if (q >= 1) throw std::invalid_argument("geometric s_n needs ratio q < 1 for the series to converge");
  if (q < 0) throw std::invalid_argument("geometric s_n needs ratio q >= 0");
  if (c == 0) return ModulusDescriptor::gammaZero();
  const Rational lambdaMin = std::max(Rational(0), lambda.infimum());
  return ModulusDescriptor(modulus::GammaGeometricTail{c * (1 - lambdaMin) / (1 - q), q});
}

ModulusDescriptor gammaFromDyadic(const ModulusDescriptor& dyadic) {
  return ModulusDescriptor(modulus::GammaFromDyadic{share(dyadic)});
}

ModulusDescriptor omegaForNonexpansive(std::uint64_t b) { return ModulusDescriptor::omegaAffine(1, b); }

ModulusDescriptor omegaForLipschitz(std::uint64_t lipschitzBound, std::uint64_t b) {
  return ModulusDescriptor::omegaAffine(1, lipschitzBound * b);
}

ModulusDescriptor omegaForUniformlyContinuous(const ModulusDescriptor& alphaT, std::uint64_t b) {
  const std::uint64_t a0 = alphaT.at(0);
  if (a0 >= 63) throw std::overflow_error("alpha_T(0) too large for a 64-bit modulus");
  return ModulusDescriptor::omegaAffine(std::uint64_t{1} << a0, 1 + b);
}

ModulusDescriptor omegaForBoundedSpace(std::uint64_t diameterBound) {
  return ModulusDescriptor::omegaAffine(0, diameterBound);
}

ModulusDescriptor etaToEta1(const ModulusDescriptor& eta) {
  if (eta.role() != ModulusRole::Convexity) throw std::invalid_argument("etaToEta1 needs a convexity modulus");
  return ModulusDescriptor(modulus::IndexFromEta{share(eta)});
}

ModulusDescriptor eta1ToEta(const ModulusDescriptor& eta1) {
  return ModulusDescriptor(modulus::EtaFromIndex{share(eta1)});
}

ModulusDescriptor eta2ToEta1(const ModulusDescriptor& eta2) {
  if (const auto* t = std::get_if<modulus::Tabulated>(&eta2.kind())) {
    // eta1(k) = eta2(k+1): every argument moves down by one; an entry at 0
    // only matters when nothing sits at 1
    std::vector<std::pair<std::uint64_t, std::uint64_t>> shifted;
    for (const auto& [arg, value] : t->entries) {
      const std::uint64_t a = arg == 0 ? 0 : arg - 1;
      if (!shifted.empty() && shifted.back().first == a) {
        shifted.back().second = value;
      } else {
        shifted.emplace_back(a, value);
      }
    }
    return ModulusDescriptor::tabulated(std::move(shifted));
  }
  if (const auto* a = std::get_if<modulus::IndexAffine>(&eta2.kind())) {
    return ModulusDescriptor::indexAffine(a->perK, a->offset + a->perK, a->perCeilR);
  }
  return ModulusDescriptor(modulus::IndexShift{share(eta2), 1});
}

ModulusDescriptor eta3ToEta2(const ModulusDescriptor& eta3) {
  return ModulusDescriptor(modulus::IndexAtRational{share(eta3)});
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kWitnessSlack = 1e-9;
constexpr std::uint64_t kMaxPrefix = 50'000'000;

/// Lazily extended prefix sums with Neumaier compensation.
class PrefixSums {
 public:
  template <class Term>
  explicit PrefixSums(Term term) : term_(std::move(term)) {}

  // sum_{k=0}^{n} term(k)
  double upTo(std::uint64_t n) {
    if (n >= kMaxPrefix) throw std::length_error("witness index " + std::to_string(n) + " beyond verification budget");
    while (sums_.size() <= n) {
      const double t = term_(sums_.size());
      const double s = sum_ + t;
      comp_ += std::abs(sum_) >= std::abs(t) ? (sum_ - s) + t : (t - s) + sum_;
      sum_ = s;
      sums_.push_back(sum_ + comp_);
    }
    return sums_[n];
  }

 private:
  std::function<double(std::uint64_t)> term_;
  std::vector<double> sums_;
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

WitnessReport verifyTheta(const Schedule& schedule, std::uint64_t nMax) {
  WitnessReport report{"theta", true, 0, std::nullopt, {}};
  const auto& lambda = schedule.lambda;
  PrefixSums sums([&lambda](std::uint64_t k) {
    const double l = lambda(k);
    return l * (1.0 - l);
  });
  for (std::uint64_t n = 0; n <= nMax; ++n) {
    ++report.checked;
    const std::uint64_t t = schedule.theta.at(n);
    double partial = 0.0;
    try {
      partial = sums.upTo(t);
    } catch (const std::length_error& e) {
      report.passed = false;
      report.firstFailure = n;
      report.detail = e.what();
      return report;
    }
    if (partial < static_cast<double>(n) - kWitnessSlack) {
      report.passed = false;
      report.firstFailure = n;
      std::ostringstream os;
      os.precision(17);
      os << "sum_{k<=theta(" << n << ")=" << t << "} lambda_k(1-lambda_k) = " << partial << " < " << n;
      report.detail = os.str();
      return report;
    }
  }
  return report;
}

WitnessReport verifyGamma(const Schedule& schedule, const std::vector<double>& deltas, std::uint64_t nMax) {
  WitnessReport report{"gamma", true, 0, std::nullopt, {}};
  const auto& lambda = schedule.lambda;
  const auto& s = schedule.s;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const double delta = deltas[i];
    const std::uint64_t g = schedule.gamma.cauchyIndex(delta);
    double sum = 0.0;
    double comp = 0.0;
    for (std::uint64_t n = 1; n <= nMax; ++n) {
      ++report.checked;
      const std::uint64_t k = g + n;
      const double t = s(k) * (1.0 - lambda(k));
      const double next = sum + t;
      comp += std::abs(sum) >= std::abs(t) ? (sum - next) + t : (t - next) + sum;
      sum = next;
      if (sum + comp > delta + kWitnessSlack) {
        report.passed = false;
        report.firstFailure = i;
        std::ostringstream os;
        os.precision(17);
        os << "alpha_{gamma(" << delta << ")+" << n << "} - alpha_{gamma(" << delta << ")=" << g
           << "} = " << (sum + comp) << " > " << delta;
        report.detail = os.str();
        return report;
      }
    }
  }
  return report;
}

}  // namespace ishikawa
