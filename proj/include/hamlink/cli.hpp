#pragma once

#include <string>
#include <vector>

namespace hamlink {

// Exit codes shared by every subcommand.
//   0 success, 1 usage/config error, 2 hypothesis failure,
//   3 solver non-convergence, 4 validation failure.
enum ExitCode {
  kExitOk = 0,
  kExitUsage = 1,
  kExitHypothesis = 2,
  kExitNoConvergence = 3,
  kExitValidation = 4,
};

struct RunConfig {
  std::string problem_path;
  int grid_T = 20;
  int grid_M = 512;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_dir = ".";

  // check
  std::string report_path = "report.json";
  int audit_T = 20;
  int audit_M = 256;

  // solve
  std::string orbit_path = "orbit.csv";
  std::string solve_path = "solve.json";
  std::string validation_path = "validation.json";
  std::string coeffs_path;  // optional coefficient export
  double tol_cerami = 1e-6;
  int max_outer = 200;
  int max_inner = 500;
  double initial_amplitude = 1.5;

  // sweep
  std::vector<double> lambdas;
  std::string sweep_path = "sweep.csv";
};

// T=..,M=.. parser for --grid.
bool parse_grid_arg(const std::string& text, int& T, int& M);

int cmd_check(const RunConfig& config);
int cmd_solve(const RunConfig& config);
int cmd_sweep(const RunConfig& config);
int cmd_validate(const RunConfig& config);

int run_cli(int argc, char** argv);

}  // namespace hamlink
