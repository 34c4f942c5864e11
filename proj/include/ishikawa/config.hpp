#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "ishikawa/geometry.hpp"
#include "ishikawa/iteration.hpp"
#include "ishikawa/mappings.hpp"
#include "ishikawa/moduli.hpp"

namespace ishikawa {

struct Caps {
  std::uint64_t maxSteps = kHardStepCap;
  std::uint64_t reportEvery = 1;
  bool operator==(const Caps&) const = default;
};

/// One experiment: a space, a map on it, a start point with its certificate,
/// the iteration schedule and the precisions to examine.
struct ExperimentConfig {
  std::string name;
  SpaceModel space = SpaceModel::euclidean(2);
  MappingSpec map;
  Point start;
  Schedule schedule{SequenceDescriptor::constant(Rational(1, 2)), SequenceDescriptor::constant(0),
                    ModulusDescriptor::thetaLinear(4), 1, 0, ModulusDescriptor::gammaZero()};
  ApproxFixedPointSpec afp;
  std::vector<double> epsGrid;
  std::uint64_t seed = 1;
  Caps caps;

  bool operator==(const ExperimentConfig&) const = default;
};

/// A problem found while reading a config; `path` is a JSON pointer.
struct Diagnostic {
  std::string path;
  std::string message;
};

std::string toString(const Diagnostic& d);

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

struct ParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return config.has_value(); }
};

/// Parses and validates a config document. Never throws: malformed input,
/// unknown keys and violated invariants all become diagnostics.
ParseResult parseConfig(const std::string& text);
ParseResult parseConfig(const nlohmann::json& doc);

/// Throws ConfigError with the diagnostics on failure.
ExperimentConfig loadConfigFile(const std::filesystem::path& path);

nlohmann::json toJson(const ExperimentConfig& config);
std::string serializeConfig(const ExperimentConfig& config);

nlohmann::json toJson(const ModulusDescriptor& m);
nlohmann::json toJson(const SequenceDescriptor& s);
nlohmann::json toJson(const Point& p);

}  // namespace ishikawa
