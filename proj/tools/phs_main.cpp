// phs: run scenarios, verify structural identities, measure convergence.

#include "phs/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int do_run(const std::string& path, const std::optional<double>& dt, const std::optional<int>& steps,
           const std::optional<std::string>& out) {
  phs::cli::ConfigResult cr = phs::cli::load_config(path);
  if (!cr.ok()) {
    std::cerr << "config errors in " << path << ":\n";
    for (const auto& e : cr.errors) std::cerr << "  - " << e << "\n";
    return 2;
  }
  phs::cli::ScenarioConfig cfg = *cr.config;
  if (dt) {
    if (!(*dt > 0.0)) {
      std::cerr << "dt must be positive\n";
      return 2;
    }
    cfg.dt = *dt;
  }
  if (steps) {
    if (*steps < 1) {
      std::cerr << "steps must be >= 1\n";
      return 2;
    }
    cfg.steps = *steps;
  }
  if (out) cfg.outputs.directory = *out;
  const phs::cli::RunResult rr = phs::cli::run_scenario(cfg);
  (rr.exit_code == 0 ? std::cout : std::cerr) << rr.message << "\n";
  for (const auto& a : rr.artifacts) std::cout << "wrote " << a << "\n";
  return rr.exit_code;
}

int do_verify(const std::string& target, int n, const std::string& corrupt, bool as_json) {
  const phs::cli::VerifyReport rep = phs::cli::verify_suite(target, n, corrupt);
  std::cout << (as_json ? rep.json() + "\n" : rep.text());
  return rep.all_pass() ? 0 : 1;
}

int do_convergence(const std::string& case_id, std::vector<int> refinements, bool as_json) {
  if (refinements.empty()) refinements = {8, 16, 32};
  const phs::ConvergenceResult res = phs::convergence_order(case_id, refinements);
  std::cout << phs::cli::format_convergence(res, as_json);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving port-Hamiltonian simulation and verification"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<double> dt;
  std::optional<int> steps;
  std::optional<std::string> out;
  auto* run = app.add_subcommand("run", "Build, verify and simulate a scenario config");
  run->add_option("config", config_path, "Scenario config (JSON)")->required();
  run->add_option("--dt", dt, "Override the time step");
  run->add_option("--steps", steps, "Override the number of steps");
  run->add_option("--out", out, "Override the output directory");

  std::string target;
  int n = 0;
  std::string corrupt;
  bool verify_json = false;
  auto* verify = app.add_subcommand("verify", "Check structural identities for a physics id or config");
  verify->add_option("target", target, "wave1d | wave2d | elasticity2d | beam1d | maxwell3d | <config>")->required();
  verify->add_option("--n", n, "Cells per axis");
  verify->add_option("--corrupt", corrupt, "Test hook: perturb K, L or beta before checking");
  verify->add_flag("--json", verify_json, "Machine-readable report");

  std::string case_id;
  std::vector<int> refinements;
  bool conv_json = false;
  auto* conv = app.add_subcommand("convergence", "Refinement study against a closed-form solution");
  conv->add_option("case", case_id, "wave1d | wave1d-zero")->required();
  conv->add_option("refinements", refinements, "Cell counts (default 8 16 32)");
  conv->add_flag("--json", conv_json, "Machine-readable table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return do_run(config_path, dt, steps, out);
    if (verify->parsed()) return do_verify(target, n, corrupt, verify_json);
    if (conv->parsed()) return do_convergence(case_id, refinements, conv_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
