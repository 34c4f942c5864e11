#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ishikawa/config.hpp"

using namespace ishikawa;
using nlohmann::json;

namespace {

const char* const kGolden[] = {"identity",           "ishikawa-geometric",  "poincare-rotation", "projection-euclidean",
                               "projection-poincare", "reflection-average", "rotation-half-pi",  "rotation-pi"};

std::filesystem::path goldenPath(const std::string& name) {
  return std::filesystem::path(ISHIKAWA_CONFIG_DIR) / (name + ".json");
}

json goldenJson(const std::string& name) {
  std::ifstream f(goldenPath(name));
  return json::parse(f);
}

bool hasDiagnostic(const ParseResult& r, const std::string& path, const std::string& fragment) {
  for (const auto& d : r.diagnostics) {
    if (d.path == path && d.message.find(fragment) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("every golden config loads and round-trips") {
    for (const char* name : kGolden) {
      CAPTURE(name);
      const auto cfg = loadConfigFile(goldenPath(name));
      CHECK(cfg.name == name);
      CHECK_FALSE(cfg.epsGrid.empty());
      const auto again = parseConfig(serializeConfig(cfg));
      REQUIRE(again.ok());
      CHECK(*again.config == cfg);
      CHECK(serializeConfig(*again.config) == serializeConfig(cfg));
    }
  }

  TEST_CASE("golden rotation-pi contents") {
    const auto cfg = loadConfigFile(goldenPath("rotation-pi"));
    CHECK(cfg.space == SpaceModel::euclidean(2));
    CHECK(cfg.start == euclideanPoint({1, 0}));
    CHECK(cfg.schedule.lambda == SequenceDescriptor::constant(Rational(1, 2)));
    CHECK(cfg.schedule.theta == ModulusDescriptor::thetaLinear(4));
    CHECK(cfg.afp.b == 1.0);
    CHECK(cfg.epsGrid == std::vector<double>{0.5, 0.25, 0.125, 0.0625});
  }

  TEST_CASE("L = 0 is rejected with its message") {
    auto j = goldenJson("rotation-pi");
    j["schedule"]["L"] = 0;
    const auto r = parseConfig(j);
    CHECK_FALSE(r.ok());
    CHECK(hasDiagnostic(r, "/schedule", "L must be ≥1"));
  }

  TEST_CASE("s above 1 - 1/L is rejected") {
    auto j = goldenJson("rotation-pi");
    j["schedule"]["s"] = {{"kind", "Constant"}, {"value", 0.9}};
    j["schedule"]["L"] = 5;
    const auto r = parseConfig(j);
    CHECK_FALSE(r.ok());
    CHECK(hasDiagnostic(r, "/schedule", "1 - 1/L"));
  }

  TEST_CASE("unknown keys and wrong types carry JSON pointers") {
    auto j = goldenJson("rotation-pi");
    j["schedule"]["lamda"] = 1;
    j["caps"]["max_steps"] = "many";
    const auto r = parseConfig(j);
    CHECK_FALSE(r.ok());
    CHECK(hasDiagnostic(r, "/schedule/lamda", "unknown key"));
    CHECK(hasDiagnostic(r, "/caps/max_steps", "natural"));
  }

  TEST_CASE("missing keys") {
    auto j = goldenJson("rotation-pi");
    j.erase("eps_grid");
    CHECK(hasDiagnostic(parseConfig(j), "/eps_grid", "missing"));
    auto k = goldenJson("rotation-pi");
    k.erase("space");
    CHECK(hasDiagnostic(parseConfig(k), "/space", "missing"));
  }

  TEST_CASE("malformed documents") {
    const auto r = parseConfig(std::string("{ \"name\": "));
    CHECK_FALSE(r.ok());
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].message.find("malformed") != std::string::npos);
    CHECK_FALSE(parseConfig(std::string("[1, 2]")).ok());
  }

  TEST_CASE("bad values") {
    auto j = goldenJson("rotation-pi");
    j["eps_grid"] = {0.5, -1};
    CHECK(hasDiagnostic(parseConfig(j), "/eps_grid/1", "positive"));

    auto k = goldenJson("rotation-pi");
    k["caps"]["max_steps"] = 20'000'000;
    CHECK_FALSE(parseConfig(k).ok());

    auto l = goldenJson("rotation-pi");
    l["start"] = {1, 0, 0};
    CHECK_FALSE(parseConfig(l).ok());

    auto m = goldenJson("poincare-rotation");
    m["start"] = {1.5, 0};
    CHECK_FALSE(parseConfig(m).ok());

    auto n = goldenJson("rotation-pi");
    n["afp"]["b"] = 0.5;  // d(x, Tx) = 2 > 2b
    CHECK_FALSE(parseConfig(n).ok());

    auto o = goldenJson("rotation-pi");
    o["schedule"]["lambda"]["value"] = "1/0";
    CHECK(hasDiagnostic(parseConfig(o), "/schedule/lambda/value", "rational"));
  }

  TEST_CASE("theta and gamma are derived when omitted") {
    auto j = goldenJson("ishikawa-geometric");
    const auto full = parseConfig(j);
    REQUIRE(full.ok());
    j["schedule"].erase("theta");
    j["schedule"].erase("gamma");
    const auto derived = parseConfig(j);
    REQUIRE(derived.ok());
    CHECK(derived.config->schedule.theta == thetaForConstantLambda(Rational(1, 2)));
    CHECK(derived.config->schedule.gamma.cauchyIndex(1.0 / 16) == full.config->schedule.gamma.cauchyIndex(1.0 / 16));
  }

  TEST_CASE("rationals in several spellings") {
    for (const json& v : {json("1/2"), json(0.5), json("0.5"), json("2/4")}) {
      auto j = goldenJson("rotation-pi");
      j["schedule"]["lambda"]["value"] = v;
      const auto r = parseConfig(j);
      REQUIRE(r.ok());
      CHECK(r.config->schedule.lambda.exact(0) == Rational(1, 2));
    }
    auto j = goldenJson("rotation-pi");
    j["schedule"]["lambda"]["value"] = 0.1;
    j["schedule"].erase("theta");
    const auto r = parseConfig(j);
    REQUIRE(r.ok());
    CHECK(r.config->schedule.lambda.exact(0) == Rational(1, 10));
  }

  TEST_CASE("loadConfigFile throws ConfigError") {
    CHECK_THROWS_AS(loadConfigFile("/nonexistent/config.json"), ConfigError);
    const auto tmp = std::filesystem::temp_directory_path() / "ishikawa_bad_config.json";
    {
      std::ofstream f(tmp);
      f << R"({"name": "x"})";
    }
    try {
      loadConfigFile(tmp);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.diagnostics().size() >= 3);
      CHECK(std::string(e.what()).find("/space") != std::string::npos);
    }
    std::filesystem::remove(tmp);
  }

  TEST_CASE("descriptor json") {
    CHECK(toJson(ModulusDescriptor::thetaLinear(4)) == json{{"kind", "ThetaLinear"}, {"a", 4}, {"b", 0}});
    CHECK(toJson(SequenceDescriptor::constant(Rational(1, 3))) == json{{"kind", "Constant"}, {"value", "1/3"}});
  }
}
