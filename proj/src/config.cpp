#include "ishikawa/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace ishikawa {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

/// Structural problem that abandons the enclosing section.
struct Bad {
  std::string path;
  std::string message;
};

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

class Reader {
 public:
  explicit Reader(std::vector<Diagnostic>& diags) : diags_(diags) {}

  void note(std::string path, std::string message) { diags_.push_back({std::move(path), std::move(message)}); }

  const json& object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw Bad{path, "expected an object"};
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool known = false;
      for (const char* k : allowed) known = known || it.key() == k;
      if (!known) note(child(path, it.key()), "unknown key \"" + it.key() + "\"");
    }
    return j;
  }

  const json& required(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw Bad{child(path, key), std::string("missing required key \"") + key + "\""};
    return *it;
  }

  const json* optional(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) throw Bad{path, "expected a string"};
    return j.get<std::string>();
  }

  double real(const json& j, const std::string& path) {
    if (!j.is_number()) throw Bad{path, "expected a number"};
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw Bad{path, "expected a finite number"};
    return v;
  }

  std::uint64_t natural(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) {
      if (j.get<std::int64_t>() < 0) throw Bad{path, "expected a natural number, got a negative value"};
      return j.get<std::uint64_t>();
    }
    throw Bad{path, "expected a natural number"};
  }

  std::int64_t integer(const json& j, const std::string& path) {
    if (j.is_number_integer()) {
      if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
        throw Bad{path, "integer out of range"};
      }
      return j.get<std::int64_t>();
    }
    throw Bad{path, "expected an integer"};
  }

  /// Integers, "p/q" or decimal strings are exact; a JSON float is read as
  /// the decimal it was written as.
  Rational rational(const json& j, const std::string& path) {
    try {
      if (j.is_number_integer()) {
        return j.is_number_unsigned() ? Rational(BigInt(j.get<std::uint64_t>())) : Rational(BigInt(j.get<std::int64_t>()));
      }
      if (j.is_number_float()) {
        const double v = real(j, path);
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return parseRational(std::string(buf, res.ptr));
      }
      if (j.is_string()) return parseRational(j.get<std::string>());
    } catch (const Bad&) {
      throw;
    } catch (const std::exception& e) {
      throw Bad{path, std::string("invalid rational: ") + e.what()};
    }
    throw Bad{path, "expected a rational (number or \"p/q\" string)"};
  }

  Point point(const json& j, const std::string& path, const SpaceModel& space) {
    if (!j.is_array()) throw Bad{path, "expected an array of coordinates"};
    Point p;
    p.model = space.kind();
    for (std::size_t i = 0; i < j.size(); ++i) p.coords.push_back(real(j[i], child(path, i)));
    try {
      space.validate(p);
    } catch (const std::exception& e) {
      throw Bad{path, e.what()};
    }
    return p;
  }

  ModulusDescriptor modulus(const json& j, const std::string& path) {
    if (!j.is_object()) throw Bad{path, "expected a modulus descriptor object"};
    const std::string kind = string(required(j, path, "kind"), child(path, "kind"));
    auto sub = [&](const char* key) { return share(modulus(required(j, path, key), child(path, key))); };
    auto rat = [&](const char* key, Rational fallback) {
      const json* v = optional(j, key);
      return v ? rational(*v, child(path, key)) : fallback;
    };
    auto intOr = [&](const char* key, std::int64_t fallback) {
      const json* v = optional(j, key);
      return v ? integer(*v, child(path, key)) : fallback;
    };
    auto natOr = [&](const char* key, std::uint64_t fallback) {
      const json* v = optional(j, key);
      return v ? natural(*v, child(path, key)) : fallback;
    };
    using namespace modulus;
    if (kind == "EtaQuadratic") {
      object(j, path, {"kind", "coef"});
      return ModulusDescriptor(EtaQuadratic{rat("coef", Rational(1, 8))});
    }
    if (kind == "EtaHilbert") {
      object(j, path, {"kind"});
      return ModulusDescriptor(EtaHilbert{});
    }
    if (kind == "EtaConstant") {
      object(j, path, {"kind", "value"});
      return ModulusDescriptor(EtaConstant{rational(required(j, path, "value"), child(path, "value"))});
    }
    if (kind == "EtaFromIndex") {
      object(j, path, {"kind", "index"});
      return ModulusDescriptor(EtaFromIndex{sub("index")});
    }
    if (kind == "IndexFromEta") {
      object(j, path, {"kind", "eta"});
      return ModulusDescriptor(IndexFromEta{sub("eta")});
    }
    if (kind == "IndexShift") {
      object(j, path, {"kind", "index", "shift"});
      return ModulusDescriptor(IndexShift{sub("index"), intOr("shift", 1)});
    }
    if (kind == "IndexAtRational") {
      object(j, path, {"kind", "index"});
      return ModulusDescriptor(IndexAtRational{sub("index")});
    }
    if (kind == "IndexAffine") {
      object(j, path, {"kind", "per_k", "offset", "per_ceil_r"});
      return ModulusDescriptor(IndexAffine{intOr("per_k", 0), intOr("offset", 0), intOr("per_ceil_r", 0)});
    }
    if (kind == "ThetaLinear") {
      object(j, path, {"kind", "a", "b"});
      return ModulusDescriptor(ThetaLinear{rational(required(j, path, "a"), child(path, "a")), rat("b", 0)});
    }
    if (kind == "OmegaAffine") {
      object(j, path, {"kind", "slope", "shift"});
      return ModulusDescriptor(OmegaAffine{natOr("slope", 1), natOr("shift", 0)});
    }
    if (kind == "GammaZero") {
      object(j, path, {"kind"});
      return ModulusDescriptor(GammaZero{});
    }
    if (kind == "GammaDyadicShift") {
      object(j, path, {"kind", "c"});
      return ModulusDescriptor(GammaDyadicShift{intOr("c", 0)});
    }
    if (kind == "GammaGeometricTail") {
      object(j, path, {"kind", "coef", "ratio"});
      const Rational ratio = rational(required(j, path, "ratio"), child(path, "ratio"));
      if (ratio < 0 || ratio >= 1) throw Bad{child(path, "ratio"), "ratio must lie in [0,1)"};
      return ModulusDescriptor(GammaGeometricTail{rational(required(j, path, "coef"), child(path, "coef")), ratio});
    }
    if (kind == "GammaFromDyadic") {
      object(j, path, {"kind", "dyadic"});
      return ModulusDescriptor(GammaFromDyadic{sub("dyadic")});
    }
    if (kind == "GammaOffset") {
      object(j, path, {"kind", "inner", "offset"});
      return ModulusDescriptor(GammaOffset{sub("inner"), intOr("offset", 0)});
    }
    if (kind == "Tabulated") {
      object(j, path, {"kind", "entries"});
      const json& e = required(j, path, "entries");
      const std::string ep = child(path, "entries");
      if (!e.is_array()) throw Bad{ep, "expected an array of [argument, value] pairs"};
      std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e[i].is_array() || e[i].size() != 2) throw Bad{child(ep, i), "expected an [argument, value] pair"};
        entries.emplace_back(natural(e[i][0], child(child(ep, i), 0)), natural(e[i][1], child(child(ep, i), 1)));
      }
      try {
        return ModulusDescriptor::tabulated(std::move(entries));
      } catch (const std::exception& ex) {
        throw Bad{ep, ex.what()};
      }
    }
    throw Bad{child(path, "kind"), "unknown modulus kind \"" + kind + "\""};
  }

  SequenceDescriptor sequence(const json& j, const std::string& path) {
    if (!j.is_object()) throw Bad{path, "expected a sequence descriptor object"};
    const std::string kind = string(required(j, path, "kind"), child(path, "kind"));
    if (kind == "Constant") {
      object(j, path, {"kind", "value"});
      return SequenceDescriptor::constant(rational(required(j, path, "value"), child(path, "value")));
    }
    if (kind == "Geometric") {
      object(j, path, {"kind", "c", "q"});
      return SequenceDescriptor::geometric(rational(required(j, path, "c"), child(path, "c")),
                                           rational(required(j, path, "q"), child(path, "q")));
    }
    if (kind == "Tabulated") {
      object(j, path, {"kind", "values"});
      const json& v = required(j, path, "values");
      if (!v.is_array() || v.empty()) throw Bad{child(path, "values"), "expected a nonempty array"};
      std::vector<Rational> values;
      for (std::size_t i = 0; i < v.size(); ++i) values.push_back(rational(v[i], child(child(path, "values"), i)));
      return SequenceDescriptor(SequenceDescriptor::Tabulated{std::move(values)});
    }
    throw Bad{child(path, "kind"), "unknown sequence kind \"" + kind + "\""};
  }

 private:
  std::vector<Diagnostic>& diags_;
};

SpaceModel parseSpace(Reader& rd, const json& j) {
  const std::string path = "/space";
  rd.object(j, path, {"kind", "dim", "modulus"});
  const std::string kind = rd.string(rd.required(j, path, "kind"), path + "/kind");
  ModulusDescriptor modulus = ModulusDescriptor::etaQuadratic();
  if (const json* m = rd.optional(j, "modulus")) {
    modulus = rd.modulus(*m, path + "/modulus");
    if (modulus.role() != ModulusRole::Convexity) {
      throw Bad{path + "/modulus", "the space modulus must be a convexity modulus, got " + modulus.kindName()};
    }
  }
  if (kind == "Euclidean") {
    const std::uint64_t dim = rd.natural(rd.required(j, path, "dim"), path + "/dim");
    if (dim < 1) throw Bad{path + "/dim", "dimension must be >= 1"};
    return SpaceModel::euclidean(dim, modulus);
  }
  if (kind == "PoincareDisk") {
    if (const json* d = rd.optional(j, "dim"); d && rd.natural(*d, path + "/dim") != 2) {
      throw Bad{path + "/dim", "the Poincare disk has dimension 2"};
    }
    return SpaceModel::poincareDisk(modulus);
  }
  throw Bad{path + "/kind", "unknown space kind \"" + kind + "\" (expected Euclidean or PoincareDisk)"};
}

MappingSpec parseMap(Reader& rd, const json& j, const SpaceModel& space) {
  const std::string path = "/map";
  if (!j.is_object()) throw Bad{path, "expected an object"};
  const std::string kind = rd.string(rd.required(j, path, "kind"), path + "/kind");
  auto center = [&] { return rd.point(rd.required(j, path, "center"), path + "/center", space); };
  auto number = [&](const char* key) { return rd.real(rd.required(j, path, key), path + "/" + key); };
  MappingSpec spec;
  if (kind == "Identity") {
    rd.object(j, path, {"kind", "domain"});
    spec.kind = maps::Identity{};
  } else if (kind == "EuclideanRotation") {
    rd.object(j, path, {"kind", "center", "angle", "domain"});
    spec.kind = maps::EuclideanRotation{center(), number("angle")};
  } else if (kind == "EuclideanReflectionAverage") {
    rd.object(j, path, {"kind", "center", "domain"});
    spec.kind = maps::EuclideanReflectionAverage{center()};
  } else if (kind == "PoincareRotation") {
    rd.object(j, path, {"kind", "center", "angle", "domain"});
    spec.kind = maps::PoincareRotation{center(), number("angle")};
  } else if (kind == "MetricProjection") {
    rd.object(j, path, {"kind", "center", "radius", "domain"});
    spec.kind = maps::MetricProjection{center(), number("radius")};
  } else {
    throw Bad{path + "/kind", "unknown map kind \"" + kind + "\""};
  }
  if (const json* d = rd.optional(j, "domain")) {
    const std::string dp = path + "/domain";
    if (!d->is_object()) throw Bad{dp, "expected an object"};
    const std::string dk = rd.string(rd.required(*d, dp, "kind"), dp + "/kind");
    if (dk == "WholeSpace") {
      rd.object(*d, dp, {"kind"});
      spec.domain.region = Domain::WholeSpace{};
    } else if (dk == "ClosedBall") {
      rd.object(*d, dp, {"kind", "center", "radius"});
      spec.domain.region = Domain::ClosedBall{rd.point(rd.required(*d, dp, "center"), dp + "/center", space),
                                              rd.real(rd.required(*d, dp, "radius"), dp + "/radius")};
    } else {
      throw Bad{dp + "/kind", "unknown domain kind \"" + dk + "\" (expected WholeSpace or ClosedBall)"};
    }
  }
  try {
    validateMapping(space, spec);
  } catch (const std::exception& e) {
    throw Bad{path, e.what()};
  }
  return spec;
}

Schedule parseSchedule(Reader& rd, const json& j) {
  const std::string path = "/schedule";
  rd.object(j, path, {"lambda", "s", "theta", "L", "N0", "gamma"});
  Schedule sched{rd.sequence(rd.required(j, path, "lambda"), path + "/lambda"), SequenceDescriptor::constant(0),
                 ModulusDescriptor::thetaLinear(4), 1, 0, ModulusDescriptor::gammaZero()};
  if (const json* s = rd.optional(j, "s")) sched.s = rd.sequence(*s, path + "/s");
  if (const json* v = rd.optional(j, "L")) sched.L = rd.natural(*v, path + "/L");
  if (const json* v = rd.optional(j, "N0")) sched.N0 = rd.natural(*v, path + "/N0");

  if (const json* t = rd.optional(j, "theta")) {
    sched.theta = rd.modulus(*t, path + "/theta");
  } else if (const auto* c = std::get_if<SequenceDescriptor::Constant>(&sched.lambda.kind());
             c && c->value > 0 && c->value < 1) {
    sched.theta = thetaForConstantLambda(c->value);
  } else {
    throw Bad{path + "/theta", "theta must be given unless lambda is a constant in (0,1)"};
  }

  if (const json* g = rd.optional(j, "gamma")) {
    sched.gamma = rd.modulus(*g, path + "/gamma");
  } else if (sched.s.isZero()) {
    sched.gamma = ModulusDescriptor::gammaZero();
  } else if (const auto* geo = std::get_if<SequenceDescriptor::Geometric>(&sched.s.kind());
             geo && geo->q >= 0 && geo->q < 1) {
    sched.gamma = gammaForGeometricS(geo->c, geo->q, sched.lambda);
  } else {
    throw Bad{path + "/gamma", "gamma must be given unless s is zero or geometric with ratio < 1"};
  }

  for (const auto& v : scheduleViolations(sched)) rd.note(path, v);
  return sched;
}

ApproxFixedPointSpec parseAfp(Reader& rd, const json& j, const SpaceModel& space, const MappingSpec& map,
                              const Point& start) {
  const std::string path = "/afp";
  rd.object(j, path, {"b", "witness"});
  ApproxFixedPointSpec afp;
  afp.x = start;
  afp.b = rd.real(rd.required(j, path, "b"), path + "/b");
  if (!(afp.b > 0)) throw Bad{path + "/b", "b must be positive"};
  if (const json* w = rd.optional(j, "witness")) {
    const std::string wp = path + "/witness";
    if (!w->is_object()) throw Bad{wp, "expected an object"};
    const std::string kind = rd.string(rd.required(*w, wp, "kind"), wp + "/kind");
    if (kind == "FixedPoint") {
      rd.object(*w, wp, {"kind", "z"});
      afp.witness = ApproxFixedPointSpec::FixedPoint{rd.point(rd.required(*w, wp, "z"), wp + "/z", space)};
    } else if (kind == "GeodesicApproach") {
      rd.object(*w, wp, {"kind", "z", "from"});
      afp.witness = ApproxFixedPointSpec::GeodesicApproach{rd.point(rd.required(*w, wp, "z"), wp + "/z", space),
                                                           rd.point(rd.required(*w, wp, "from"), wp + "/from", space)};
    } else {
      throw Bad{wp + "/kind", "unknown witness kind \"" + kind + "\" (expected FixedPoint or GeodesicApproach)"};
    }
  } else if (auto z = knownFixedPoint(map)) {
    afp.witness = ApproxFixedPointSpec::FixedPoint{*z};
  } else {
    afp.witness = ApproxFixedPointSpec::FixedPoint{start};
  }
  try {
    derivedBound(space, afp, map);
  } catch (const std::exception& e) {
    throw Bad{path, e.what()};
  }
  return afp;
}

template <class F>
void section(Reader& rd, F&& f) {
  try {
    f();
  } catch (const Bad& b) {
    rd.note(b.path, b.message);
  } catch (const json::exception& e) {
    rd.note("", e.what());
  }
}

json rationalJson(const Rational& r) {
  if (denominator(r) == 1 && abs(numerator(r)) < BigInt(INT64_MAX)) return toInt64(numerator(r));
  return formatRational(r);
}

}  // namespace

std::string toString(const Diagnostic& d) { return (d.path.empty() ? std::string("/") : d.path) + ": " + d.message; }

namespace {

std::string joinDiagnostics(const std::vector<Diagnostic>& diags) {
  std::string out = "invalid config";
  for (const auto& d : diags) out += "\n  " + toString(d);
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(joinDiagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

ParseResult parseConfig(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    return {std::nullopt, {{"", std::string("malformed document: ") + e.what()}}};
  }
  return parseConfig(doc);
}

ParseResult parseConfig(const json& doc) {
  ParseResult result;
  Reader rd(result.diagnostics);
  if (!doc.is_object()) {
    rd.note("", "expected a JSON object at the top level");
    return result;
  }
  rd.object(doc, "", {"name", "space", "map", "start", "schedule", "afp", "eps_grid", "seed", "caps"});

  ExperimentConfig cfg;
  bool haveSpace = false;
  bool haveMap = false;
  bool haveStart = false;

  section(rd, [&] {
    if (const json* n = rd.optional(doc, "name")) cfg.name = rd.string(*n, "/name");
  });
  section(rd, [&] {
    cfg.space = parseSpace(rd, rd.required(doc, "", "space"));
    haveSpace = true;
  });
  if (haveSpace) {
    section(rd, [&] {
      cfg.map = parseMap(rd, rd.required(doc, "", "map"), cfg.space);
      haveMap = true;
    });
    section(rd, [&] {
      cfg.start = rd.point(rd.required(doc, "", "start"), "/start", cfg.space);
      haveStart = true;
    });
  }
  if (haveMap && haveStart && !inDomain(cfg.space, cfg.map, cfg.start)) {
    rd.note("/start", "start point lies outside the domain of the map");
    haveStart = false;
  }
  section(rd, [&] { cfg.schedule = parseSchedule(rd, rd.required(doc, "", "schedule")); });
  if (haveMap && haveStart) {
    section(rd, [&] { cfg.afp = parseAfp(rd, rd.required(doc, "", "afp"), cfg.space, cfg.map, cfg.start); });
  }
  section(rd, [&] {
    const json& g = rd.required(doc, "", "eps_grid");
    if (!g.is_array() || g.empty()) throw Bad{"/eps_grid", "expected a nonempty array of precisions"};
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double e = rd.real(g[i], child("/eps_grid", i));
      if (!(e > 0)) throw Bad{child("/eps_grid", i), "precision eps must be positive"};
      cfg.epsGrid.push_back(e);
    }
  });
  section(rd, [&] {
    if (const json* s = rd.optional(doc, "seed")) cfg.seed = rd.natural(*s, "/seed");
  });
  section(rd, [&] {
    const json* c = rd.optional(doc, "caps");
    if (!c) return;
    rd.object(*c, "/caps", {"max_steps", "report_every"});
    if (const json* m = rd.optional(*c, "max_steps")) {
      cfg.caps.maxSteps = rd.natural(*m, "/caps/max_steps");
      if (cfg.caps.maxSteps < 1 || cfg.caps.maxSteps > kHardStepCap) {
        throw Bad{"/caps/max_steps", "max_steps must lie in [1, " + std::to_string(kHardStepCap) + "]"};
      }
    }
    if (const json* r = rd.optional(*c, "report_every")) {
      cfg.caps.reportEvery = rd.natural(*r, "/caps/report_every");
      if (cfg.caps.reportEvery < 1) throw Bad{"/caps/report_every", "report_every must be >= 1"};
    }
  });

  if (result.diagnostics.empty()) result.config = std::move(cfg);
  return result;
}

ExperimentConfig loadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{"", "cannot read config file " + path.string()}});
  std::stringstream buf;
  buf << in.rdbuf();
  auto result = parseConfig(buf.str());
  if (!result.ok()) throw ConfigError(std::move(result.diagnostics));
  return std::move(*result.config);
}

// Serialization -------------------------------------------------------------------

json toJson(const Point& p) {
  json a = json::array();
  for (double c : p.coords) a.push_back(c);
  return a;
}

json toJson(const ModulusDescriptor& m) {
  using namespace modulus;
  return std::visit(
      Overloaded{
          [](const EtaQuadratic& k) -> json { return {{"kind", "EtaQuadratic"}, {"coef", rationalJson(k.coef)}}; },
          [](const EtaHilbert&) -> json { return {{"kind", "EtaHilbert"}}; },
          [](const EtaConstant& k) -> json { return {{"kind", "EtaConstant"}, {"value", rationalJson(k.value)}}; },
          [](const EtaFromIndex& k) -> json { return {{"kind", "EtaFromIndex"}, {"index", toJson(*k.index)}}; },
          [](const IndexFromEta& k) -> json { return {{"kind", "IndexFromEta"}, {"eta", toJson(*k.eta)}}; },
          [](const IndexShift& k) -> json {
            return {{"kind", "IndexShift"}, {"index", toJson(*k.index)}, {"shift", k.shift}};
          },
          [](const IndexAtRational& k) -> json { return {{"kind", "IndexAtRational"}, {"index", toJson(*k.index)}}; },
          [](const IndexAffine& k) -> json {
            return {{"kind", "IndexAffine"}, {"per_k", k.perK}, {"offset", k.offset}, {"per_ceil_r", k.perCeilR}};
          },
          [](const ThetaLinear& k) -> json {
            return {{"kind", "ThetaLinear"}, {"a", rationalJson(k.a)}, {"b", rationalJson(k.b)}};
          },
          [](const OmegaAffine& k) -> json { return {{"kind", "OmegaAffine"}, {"slope", k.slope}, {"shift", k.shift}}; },
          [](const GammaZero&) -> json { return {{"kind", "GammaZero"}}; },
          [](const GammaDyadicShift& k) -> json { return {{"kind", "GammaDyadicShift"}, {"c", k.c}}; },
          [](const GammaGeometricTail& k) -> json {
            return {{"kind", "GammaGeometricTail"}, {"coef", rationalJson(k.coef)}, {"ratio", rationalJson(k.ratio)}};
          },
          [](const GammaFromDyadic& k) -> json { return {{"kind", "GammaFromDyadic"}, {"dyadic", toJson(*k.dyadic)}}; },
          [](const GammaOffset& k) -> json {
            return {{"kind", "GammaOffset"}, {"inner", toJson(*k.inner)}, {"offset", k.offset}};
          },
          [](const Tabulated& k) -> json {
            json e = json::array();
            for (const auto& [a, v] : k.entries) e.push_back({a, v});
            return {{"kind", "Tabulated"}, {"entries", e}};
          },
      },
      m.kind());
}

json toJson(const SequenceDescriptor& s) {
  return std::visit(Overloaded{
                        [](const SequenceDescriptor::Constant& k) -> json {
                          return {{"kind", "Constant"}, {"value", rationalJson(k.value)}};
                        },
                        [](const SequenceDescriptor::Geometric& k) -> json {
                          return {{"kind", "Geometric"}, {"c", rationalJson(k.c)}, {"q", rationalJson(k.q)}};
                        },
                        [](const SequenceDescriptor::Tabulated& k) -> json {
                          json v = json::array();
                          for (const auto& x : k.values) v.push_back(rationalJson(x));
                          return {{"kind", "Tabulated"}, {"values", v}};
                        },
                    },
                    s.kind());
}

json toJson(const ExperimentConfig& cfg) {
  json space = {{"kind", cfg.space.kind() == ModelKind::Euclidean ? "Euclidean" : "PoincareDisk"},
                {"modulus", toJson(cfg.space.ucModulus())}};
  if (cfg.space.kind() == ModelKind::Euclidean) space["dim"] = cfg.space.dim();

  json map = std::visit(Overloaded{
                            [](const maps::Identity&) -> json { return {{"kind", "Identity"}}; },
                            [](const maps::EuclideanRotation& m) -> json {
                              return {{"kind", "EuclideanRotation"}, {"center", toJson(m.center)}, {"angle", m.angle}};
                            },
                            [](const maps::EuclideanReflectionAverage& m) -> json {
                              return {{"kind", "EuclideanReflectionAverage"}, {"center", toJson(m.center)}};
                            },
                            [](const maps::PoincareRotation& m) -> json {
                              return {{"kind", "PoincareRotation"}, {"center", toJson(m.center)}, {"angle", m.angle}};
                            },
                            [](const maps::MetricProjection& m) -> json {
                              return {{"kind", "MetricProjection"}, {"center", toJson(m.center)}, {"radius", m.radius}};
                            },
                        },
                        cfg.map.kind);
  map["domain"] = std::visit(Overloaded{
                                 [](const Domain::WholeSpace&) -> json { return {{"kind", "WholeSpace"}}; },
                                 [](const Domain::ClosedBall& b) -> json {
                                   return {{"kind", "ClosedBall"}, {"center", toJson(b.center)}, {"radius", b.radius}};
                                 },
                             },
                             cfg.map.domain.region);

  json witness = std::visit(Overloaded{
                                [](const ApproxFixedPointSpec::FixedPoint& w) -> json {
                                  return {{"kind", "FixedPoint"}, {"z", toJson(w.z)}};
                                },
                                [](const ApproxFixedPointSpec::GeodesicApproach& w) -> json {
                                  return {{"kind", "GeodesicApproach"}, {"z", toJson(w.z)}, {"from", toJson(w.from)}};
                                },
                            },
                            cfg.afp.witness);

  const auto& s = cfg.schedule;
  json out;
  out["name"] = cfg.name;
  out["space"] = space;
  out["map"] = map;
  out["start"] = toJson(cfg.start);
  out["schedule"] = {{"lambda", toJson(s.lambda)}, {"s", toJson(s.s)},    {"theta", toJson(s.theta)},
                     {"L", s.L},                   {"N0", s.N0},          {"gamma", toJson(s.gamma)}};
  out["afp"] = {{"b", cfg.afp.b}, {"witness", witness}};
  out["eps_grid"] = cfg.epsGrid;
  out["seed"] = cfg.seed;
  out["caps"] = {{"max_steps", cfg.caps.maxSteps}, {"report_every", cfg.caps.reportEvery}};
  return out;
}

std::string serializeConfig(const ExperimentConfig& config) { return toJson(config).dump(2) + "\n"; }

}  // namespace ishikawa
