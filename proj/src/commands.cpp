#include "ishikawa/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace ishikawa {

namespace {

const std::vector<std::uint64_t> kDeltaKs{0, 10, 100};

std::string fmt(double v, int precision = 17) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

std::string fixed2(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

std::ofstream openOut(const std::filesystem::path& dir, const std::string& file) {
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / file);
  if (!f) throw std::runtime_error("cannot write " + (dir / file).string());
  return f;
}

void printReports(std::ostream& out, const std::vector<CheckReport>& reports) {
  out << std::left << std::setw(52) << "check" << std::setw(12) << "samples" << std::setw(10) << "failures"
      << "verdict\n";
  for (const auto& r : reports) {
    out << std::left << std::setw(52) << r.checkName << std::setw(12) << r.samples << std::setw(10) << r.failureCount
        << toString(r.verdict);
    if (!r.note.empty()) out << "  (" << r.note << ")";
    out << '\n';
    for (const auto& f : r.failures) {
      out << "    " << f.clause << ": lhs=" << fmt(f.lhs) << " rhs=" << fmt(f.rhs) << " [" << f.inputs << "]\n";
      if (&f - r.failures.data() >= 4) {
        out << "    ...\n";
        break;
      }
    }
  }
}

Verdict overall(const std::vector<CheckReport>& reports) {
  Verdict v = Verdict::Pass;
  for (const auto& r : reports) {
    if (r.verdict == Verdict::Fail) return Verdict::Fail;
    if (r.verdict == Verdict::UnverifiedAtScale) v = Verdict::UnverifiedAtScale;
  }
  return v;
}

void warnUnverified(std::ostream& err, const std::vector<CheckReport>& reports) {
  for (const auto& r : reports) {
    if (r.verdict == Verdict::UnverifiedAtScale) err << "warning: " << r.checkName << ": " << r.note << '\n';
  }
}

nlohmann::json reportsJson(const std::vector<CheckReport>& reports) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& r : reports) a.push_back(toJson(r));
  return a;
}

struct GridRow {
  double eps = 0.0;
  SoundnessResult soundness;
  CheckReport delta;
  Verdict verdict = Verdict::Pass;
};

std::vector<GridRow> evaluateGrid(const ExperimentConfig& config, const Trajectory& traj) {
  std::vector<double> grid = config.epsGrid;
  std::sort(grid.begin(), grid.end(), std::greater<>());
  std::vector<GridRow> rows;
  for (const double eps : grid) {
    GridRow row;
    row.eps = eps;
    row.soundness = checkPhiSoundness(config, eps, &traj);
    row.delta = checkDeltaWitness(config, eps, kDeltaKs, &traj);
    row.verdict = overall({row.soundness.check, row.delta});
    const RateInputs in = rateInputsFor(config, eps);
    for (const auto k : kDeltaKs) {
      try {
        row.soundness.rate.delta.emplace_back(k, computeDelta(in, k));
      } catch (const std::logic_error&) {
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Trajectory simulateForGrid(const ExperimentConfig& config) {
  const std::uint64_t steps = std::max<std::uint64_t>(stepsForGrid(config, kDeltaKs), std::min<std::uint64_t>(stepCap(config), 1));
  return simulate(config, steps, std::max<std::uint64_t>(1, steps / 100'000));
}

}  // namespace

ExperimentConfig applyOverrides(ExperimentConfig config, const CommandOptions& options) {
  if (options.seed) config.seed = *options.seed;
  if (options.maxSteps) {
    if (*options.maxSteps < 1 || *options.maxSteps > kHardStepCap) {
      throw ConfigError({{"--max-steps", "must lie in [1, " + std::to_string(kHardStepCap) + "]"}});
    }
    config.caps.maxSteps = *options.maxSteps;
  }
  return config;
}

int exitCodeFor(Verdict v) { return v == Verdict::Fail ? kExitCheckFailed : kExitOk; }

int cmdVerifySpace(const ExperimentConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = applyOverrides(config, options);
  std::vector<CheckReport> reports;
  reports.push_back(checkSpaceAxioms(cfg.space, 10'000, cfg.seed));
  reports.push_back(checkUcImplication(cfg.space, 10'000, cfg.seed + 1));
  reports.push_back(checkNonexpansive(cfg.space, cfg.map, 1'000, cfg.seed + 2));
  const Verdict v = overall(reports);
  if (options.json) {
    out << nlohmann::json{{"command", "verify-space"}, {"config", cfg.name}, {"verdict", toString(v)},
                          {"reports", reportsJson(reports)}}
               .dump()
        << '\n';
  } else {
    out << "space " << cfg.space.name() << ", modulus " << cfg.space.ucModulus().kindName() << ", map "
        << cfg.map.kindName() << '\n';
    printReports(out, reports);
    out << "verdict: " << toString(v) << '\n';
  }
  warnUnverified(err, reports);
  return exitCodeFor(v);
}

int cmdRate(const ExperimentConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = applyOverrides(config, options);
  int code = kExitOk;
  for (const double eps : cfg.epsGrid) {
    const RateInputs in = rateInputsFor(cfg, eps);
    RateReport rep = computePhi(in);
    try {
      for (const auto k : kDeltaKs) rep.delta.emplace_back(k, computeDelta(in, k));
    } catch (const std::logic_error& e) {
      err << "error: eps=" << fmt(eps) << ": " << e.what() << '\n';
      code = kExitCheckFailed;
    }
    nlohmann::json j = toJson(rep);
    j["eps"] = eps;
    j["shortcut"] = rep.shortcut;
    out << j.dump() << '\n';
  }
  return code;
}

int cmdRun(const ExperimentConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = applyOverrides(config, options);
  const Trajectory traj = simulateForGrid(cfg);

  std::vector<CheckReport> reports;
  reports.push_back(checkHypotheses(cfg, cfg.epsGrid.front()));
  reports.push_back(checkLemmaInequalities(traj));
  reports.push_back(checkResidualCap(traj, cfg.afp.b));
  const auto rows = evaluateGrid(cfg, traj);
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& row : rows) {
    reports.push_back(row.soundness.check);
    reports.push_back(row.delta);
    nlohmann::json rate = toJson(row.soundness.rate);
    rate["eps"] = row.eps;
    grid.push_back(rate);
  }
  const Verdict v = overall(reports);

  {
    auto csv = openOut(options.outDir, "trajectory.csv");
    writeTrajectoryCsv(csv, traj, cfg.caps.reportEvery);
  }
  const nlohmann::json summary{{"command", "run"},       {"config", cfg.name},         {"steps", traj.steps},
                               {"verdict", toString(v)}, {"rates", grid},              {"reports", reportsJson(reports)}};
  {
    auto js = openOut(options.outDir, "report.json");
    js << summary.dump(2) << '\n';
  }

  if (options.json) {
    out << summary.dump() << '\n';
  } else {
    out << "config " << cfg.name << ": simulated " << traj.steps << " steps\n";
    printReports(out, reports);
    out << "wrote " << (options.outDir / "trajectory.csv").string() << " and "
        << (options.outDir / "report.json").string() << '\n';
    out << "verdict: " << toString(v) << '\n';
  }
  warnUnverified(err, reports);
  return exitCodeFor(v);
}

std::vector<std::uint64_t> logSpacedIndices(std::uint64_t last, int perDecade) {
  std::vector<std::uint64_t> out;
  for (int i = 0;; ++i) {
    const double x = std::pow(10.0, static_cast<double>(i) / perDecade);
    const auto n = static_cast<std::uint64_t>(std::llround(x)) - 1;
    if (n > last) break;
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  if (out.empty() || out.back() != last) out.push_back(last);
  return out;
}

int cmdSweep(const ExperimentConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = applyOverrides(config, options);
  const Trajectory traj = simulateForGrid(cfg);
  const auto rows = evaluateGrid(cfg, traj);

  std::vector<CheckReport> reports;
  for (const auto& row : rows) {
    reports.push_back(row.soundness.check);
    reports.push_back(row.delta);
  }
  const Verdict v = overall(reports);

  auto optNum = [](const auto& o) { return o ? fmt(static_cast<double>(*o), 10) : std::string(); };
  {
    auto csv = openOut(options.outDir, "sweep.csv");
    csv << "eps,P,gamma0,phi,first_hit,tightness,verdict\n";
    for (const auto& row : rows) {
      const auto& r = row.soundness.rate;
      csv << fmt(row.eps) << ',' << r.P << ',' << r.gamma0 << ',' << r.phi << ',' << optNum(r.empiricalFirstHit)
          << ',' << optNum(r.tightnessRatio) << ',' << toString(row.verdict) << '\n';
    }
  }
  {
    auto plot = openOut(options.outDir, "residuals_plot.csv");
    plot << "n,residual\n";
    plot.precision(17);
    for (const auto n : logSpacedIndices(traj.steps)) plot << n << ',' << traj.residuals[n] << '\n';
  }

  if (options.json) {
    nlohmann::json table = nlohmann::json::array();
    for (const auto& row : rows) {
      nlohmann::json j = toJson(row.soundness.rate);
      j["eps"] = row.eps;
      j["verdict"] = toString(row.verdict);
      table.push_back(j);
    }
    out << nlohmann::json{{"command", "sweep"}, {"config", cfg.name}, {"steps", traj.steps},
                          {"verdict", toString(v)}, {"rows", table}, {"reports", reportsJson(reports)}}
               .dump()
        << '\n';
  } else {
    out << std::left << std::setw(14) << "eps" << std::setw(10) << "P" << std::setw(8) << "gamma0" << std::setw(12)
        << "phi" << std::setw(11) << "first_hit" << std::setw(13) << "tightness" << "verdict\n";
    for (const auto& row : rows) {
      const auto& r = row.soundness.rate;
      out << std::left << std::setw(14) << fmt(row.eps, 6) << std::setw(10) << r.P << std::setw(8) << r.gamma0
          << std::setw(12) << r.phi << std::setw(11) << optNum(r.empiricalFirstHit) << std::setw(13)
          << (r.tightnessRatio ? fixed2(*r.tightnessRatio) : std::string()) << toString(row.verdict) << '\n';
    }
    out << "wrote " << (options.outDir / "sweep.csv").string() << " and "
        << (options.outDir / "residuals_plot.csv").string() << '\n';
    out << "verdict: " << toString(v) << '\n';
  }
  warnUnverified(err, reports);
  return exitCodeFor(v);
}

}  // namespace ishikawa
