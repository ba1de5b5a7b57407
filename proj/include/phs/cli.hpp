#pragma once

// Scenario configuration, verification suite and batch runs behind the `phs` executable.

#include "phs/physics.hpp"
#include "phs/timestepping.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace phs::cli {

struct InputSpec {
  std::string kind = "zero";  // zero | sine | ramp | samples
  double frequency = 1.0;     // Hz
  double amplitude = 1.0;
  double rate = 1.0;
  std::vector<int> ports;     // empty means every port
  std::string file;           // resolved samples path
};

struct InitialSpec {
  std::string kind = "zero";  // zero | mode | file
  int index = 0;
  std::string file;
};

struct OutputSpec {
  std::string directory = "phs-out";
  std::string csv = "trajectory.csv";
  std::string manifest = "manifest.json";
  int snapshot_every = 0;
  std::string snapshot_file = "states.bin";
};

struct Tolerances {
  double green = 1e-12;    // relative to ||L|| + ||K||
  double skew = 1e-12;     // relative to ||Gram * full||
  double split = 1e-13;    // relative to ||J||
  double dirac = 1e-10;
  double balance = 1e-10;  // relative to 1 + |H|
};

struct ScenarioConfig {
  std::string physics;
  GridSpec grid;
  std::map<std::string, std::vector<double>> materials;
  InputSpec input;
  InitialSpec initial;
  double dt = 0.0;
  int steps = 0;
  OutputSpec outputs;
  Tolerances tolerances;
};

struct ConfigResult {
  std::optional<ScenarioConfig> config;
  std::vector<std::string> errors;
  bool ok() const { return config.has_value(); }
};

const std::vector<std::string>& supported_physics();

/// Strict JSON config; every problem found is listed. Relative input files resolve against base_dir.
ConfigResult parse_config(const std::string& text, const std::string& base_dir = ".");
ConfigResult load_config(const std::string& path);

/// JSON echo of a validated config, defaults included.
std::string config_to_json(const ScenarioConfig& cfg);

struct Scenario {
  PortSystem system;
  ConstitutiveLaw law;
};

/// Throws InvalidArgument on material or grid problems.
Scenario build_scenario(const ScenarioConfig& cfg);

/// Default config for a physics id with n cells per axis (0 = physics default).
ScenarioConfig default_config(const std::string& physics, int n = 0);

struct VerifyLine {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::string label;
  Eigen::Index x1 = 0, x2 = 0, u1 = 0, u2 = 0;
  std::vector<VerifyLine> lines;

  bool all_pass() const;
  std::string text() const;
  std::string json() const;
  const VerifyLine* find(const std::string& name) const;
};

VerifyReport verify_system(const PortSystem& sys, const Tolerances& tol = {});

/// `target` is a physics id or a config path; corrupt in {"", "K", "L", "beta"} perturbs the system first.
VerifyReport verify_suite(const std::string& target, int n = 0, const std::string& corrupt = "");

struct RunResult {
  int exit_code = 0;
  std::string message;
  std::vector<std::string> artifacts;
};

/// Build, verify, simulate, then write CSV, manifest and optional snapshots atomically.
RunResult run_scenario(const ScenarioConfig& cfg);

/// Human-readable or JSON convergence table.
std::string format_convergence(const ConvergenceResult& res, bool json);

}  // namespace phs::cli
