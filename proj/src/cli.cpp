#include "hamlink/cli.hpp"

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "hamlink/io.hpp"

namespace hamlink {

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
  if (file.empty() || file.front() == '/') return file;
  if (dir.empty() || dir == ".") return file;
  return dir + "/" + file;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

SolverOptions solver_options(const RunConfig& config) {
  SolverOptions opts;
  opts.tol_cerami = config.tol_cerami;
  opts.max_outer = config.max_outer;
  opts.max_inner = config.max_inner;
  opts.seed = config.seed;
  opts.initial_amplitude = config.initial_amplitude;
  return opts;
}

constexpr double kResidualTol = 1e-4;  // generic validation gate; the
                                       // benchmark sits far below it

}  // namespace

bool parse_grid_arg(const std::string& text, int& T, int& M) {
  int t = 0, m = 0;
  if (std::sscanf(text.c_str(), "T=%d,M=%d", &t, &m) == 2 ||
      std::sscanf(text.c_str(), "M=%d,T=%d", &m, &t) == 2) {
    if (t <= 0 || m <= 0) return false;
    T = t;
    M = m;
    return true;
  }
  return false;
}

int cmd_check(const RunConfig& config) {
  ProblemSpec problem;
  try {
    problem = load_problem_file(config.problem_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  AuditConfig ac;
  ac.grid_T = config.audit_T;
  ac.grid_M = config.audit_M;
  ac.scheme.seed = config.seed + 76;
  ac.kappa_seed = config.seed + 2024;
  HypothesisReport rep = audit(problem, ac);
  Json doc = hypothesis_report_json(rep);
  std::string path = join_path(config.out_dir, config.report_path);
  write_text_file(path, doc.dump(2) + "\n");
  std::cout << (rep.overall_pass ? "PASS" : "FAIL") << ": report written to " << path
            << "\n";
  if (!rep.overall_pass) std::cout << "reason: " << rep.fail_reason << "\n";
  return rep.overall_pass ? kExitOk : kExitHypothesis;
}

int cmd_solve(const RunConfig& config) {
  ProblemSpec problem;
  try {
    problem = load_problem_file(config.problem_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!problem.hyperbolicity.pass) {
    std::cerr << "error: hyperbolicity check failed; no splitting available\n";
    return kExitHypothesis;
  }
  SpectralGrid grid = make_grid(config.grid_T, config.grid_M, problem.dim());
  FunctionalContext ctx = make_context(problem, grid);

  SplitState guess = initial_guess(ctx, config.initial_amplitude);
  GeometryOptions gopts;
  gopts.seed = config.seed + 5;
  LinkingGeometry geom = verify_linking_geometry(ctx, guess, gopts);

  SolveResult sres = outer_minimize(ctx, guess, solver_options(config), &geom);

  write_orbit_csv(join_path(config.out_dir, config.orbit_path), ctx, sres.orbit);
  write_text_file(join_path(config.out_dir, config.solve_path),
                  solve_result_json(sres).dump(2) + "\n");
  if (!config.coeffs_path.empty())
    write_text_file(join_path(config.out_dir, config.coeffs_path),
                    coefficients_json(ctx.grid, sres.orbit.coeffs).dump(2) + "\n");

  ValidationReport vrep = validate_orbit(ctx, sres.orbit, &geom);
  if (has_benchmark_oracle(problem))
    vrep.oracle_error = oracle_compare(ctx, sres.orbit, benchmark_soliton, true);
  write_text_file(join_path(config.out_dir, config.validation_path),
                  validation_report_json(vrep).dump(2) + "\n");

  std::cout << "solve: converged=" << (sres.converged ? "yes" : "no")
            << " action=" << sres.action_value << " residual=" << vrep.residual_l2
            << " tail_sup=" << vrep.tail_sup << "\n";
  if (!sres.converged) return kExitNoConvergence;
  bool validated = vrep.decay_pass && vrep.residual_l2 <= kResidualTol &&
                   (!geom.valid || vrep.level_check);
  return validated ? kExitOk : kExitValidation;
}

int cmd_sweep(const RunConfig& config) {
  if (config.lambdas.empty()) {
    std::cerr << "error: sweep requires a nonempty lambda list\n";
    return kExitUsage;
  }
  ProblemSpec base;
  try {
    base = load_problem_file(config.problem_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!base.hyperbolicity.pass) {
    std::cerr << "error: hyperbolicity check failed; no splitting available\n";
    return kExitHypothesis;
  }

  // One audit fixes the admissibility threshold (it does not depend on the
  // sweep lambda).
  AuditConfig ac;
  ac.grid_T = config.audit_T;
  ac.grid_M = config.audit_M;
  ac.scheme.seed = config.seed + 76;
  ac.kappa_seed = config.seed + 2024;
  HypothesisReport audit_rep = audit(base, ac);

  SpectralGrid grid = make_grid(config.grid_T, config.grid_M, base.dim());

  std::ostringstream os;
  os << "lambda,admissible,converged,action,cerami,residual,triple,delta,monotone\n";

  bool all_converged = true;
  bool monotone_so_far = true;
  int trend = 0;  // 0 unknown, +1 nondecreasing, -1 nonincreasing
  double prev_action = 0.0;
  bool have_prev = false;
  SplitState warm;
  bool have_warm = false;

  for (double lambda : config.lambdas) {
    ProblemSpec problem = base;
    problem.lambda = lambda;
    FunctionalContext ctx = make_context(problem, grid);

    SplitState u0 = have_warm ? warm : initial_guess(ctx, config.initial_amplitude);
    GeometryOptions gopts;
    gopts.seed = config.seed + 5;
    LinkingGeometry geom = verify_linking_geometry(ctx, u0, gopts);
    SolveResult sres = outer_minimize(ctx, u0, solver_options(config), &geom);
    double residual = ode_residual(ctx, sres.orbit);
    auto tn = make_triple_norm_context(ctx.symbol);
    double triple = triple_norm(tn, sres.orbit);

    bool admissible = lambda < audit_rep.lambda_threshold;
    all_converged = all_converged && sres.converged;
    if (have_prev && monotone_so_far) {
      double d = sres.action_value - prev_action;
      if (std::fabs(d) > 1e-12) {
        int dir = d > 0 ? 1 : -1;
        if (trend == 0)
          trend = dir;
        else if (dir != trend)
          monotone_so_far = false;
      }
    }
    os << fmt17(lambda) << "," << (admissible ? 1 : 0) << ","
       << (sres.converged ? 1 : 0) << "," << fmt17(sres.action_value) << ","
       << fmt17(sres.trace.empty() ? 0.0 : sres.trace.back().cerami) << ","
       << fmt17(residual) << "," << fmt17(triple) << "," << fmt17(geom.delta) << ","
       << (monotone_so_far ? 1 : 0) << "\n";

    prev_action = sres.action_value;
    have_prev = true;
    if (sres.converged) {
      warm = sres.orbit;
      have_warm = true;
    }
  }

  std::string path = join_path(config.out_dir, config.sweep_path);
  write_text_file(path, os.str());
  std::cout << "sweep written to " << path << "\n";
  return all_converged ? kExitOk : kExitNoConvergence;
}

int cmd_validate(const RunConfig& config) {
  ProblemSpec problem;
  OrbitFile of;
  try {
    problem = load_problem_file(config.problem_path);
    of = read_orbit_csv(join_path(config.out_dir, config.orbit_path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (of.grid.dim != problem.dim()) {
    std::cerr << "error: orbit dimension does not match the problem\n";
    return kExitUsage;
  }
  if (!problem.hyperbolicity.pass) {
    std::cerr << "error: hyperbolicity check failed; no splitting available\n";
    return kExitHypothesis;
  }
  FunctionalContext ctx = make_context(problem, of.grid);
  SplitState orbit = state_from_values(*ctx.symbol, *ctx.transform, of.values);
  ValidationReport vrep = validate_orbit(ctx, orbit);
  if (has_benchmark_oracle(problem))
    vrep.oracle_error = oracle_compare(ctx, orbit, benchmark_soliton, true);
  write_text_file(join_path(config.out_dir, config.validation_path),
                  validation_report_json(vrep).dump(2) + "\n");
  std::cout << "validate: residual=" << vrep.residual_l2
            << " tail_sup=" << vrep.tail_sup << "\n";
  bool ok = vrep.decay_pass && vrep.residual_l2 <= kResidualTol;
  return ok ? kExitOk : kExitValidation;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"hamlink: spectral linking solver for homoclinic orbits"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  std::string grid_text;
  app.add_option("--problem", config.problem_path, "problem JSON file")->required(false);
  app.add_option("--grid", grid_text, "grid as T=<int>,M=<int>");
  app.add_option("--seed", config.seed, "RNG seed for the whole pipeline");
  app.add_option("--threads", config.threads, "worker thread count");
  app.add_option("--out-dir", config.out_dir, "output directory");

  auto* check = app.add_subcommand("check", "audit the structural hypotheses");
  check->add_option("--out", config.report_path, "report JSON path");

  auto* solve = app.add_subcommand("solve", "run the linking minimax solver");
  solve->add_option("--out", config.orbit_path, "orbit CSV path");
  solve->add_option("--report", config.solve_path, "solve report JSON path");
  solve->add_option("--validation", config.validation_path, "validation JSON path");
  solve->add_option("--coeffs", config.coeffs_path, "optional coefficient JSON export");
  solve->add_option("--tol-cerami", config.tol_cerami, "Cerami quantity tolerance");
  solve->add_option("--max-outer", config.max_outer, "outer iteration cap");
  solve->add_option("--max-inner", config.max_inner, "inner iteration cap");
  solve->add_option("--amplitude", config.initial_amplitude, "initial bump amplitude");

  auto* sweep = app.add_subcommand("sweep", "continuation over a lambda list");
  sweep->add_option("--lambdas", config.lambdas, "lambda values")->delimiter(',');
  std::string lambda_range;
  sweep->add_option("--lambda-range", lambda_range,
                    "lambda range as start:stop:count (inclusive)");
  sweep->add_option("--out", config.sweep_path, "sweep CSV path");
  sweep->add_option("--tol-cerami", config.tol_cerami, "Cerami quantity tolerance");
  sweep->add_option("--max-outer", config.max_outer, "outer iteration cap");
  sweep->add_option("--amplitude", config.initial_amplitude, "initial bump amplitude");

  auto* validate = app.add_subcommand("validate", "validate an orbit file");
  validate->add_option("--orbit", config.orbit_path, "orbit CSV path");
  validate->add_option("--out", config.validation_path, "validation JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  if (!grid_text.empty()) {
    if (!parse_grid_arg(grid_text, config.grid_T, config.grid_M)) {
      std::cerr << "error: --grid expects T=<int>,M=<int>\n";
      return kExitUsage;
    }
    config.audit_T = config.grid_T;
    config.audit_M = std::min(config.grid_M, 256);
  }
  if (!lambda_range.empty()) {
    double a = 0.0, b = 0.0;
    int count = 0;
    if (std::sscanf(lambda_range.c_str(), "%lf:%lf:%d", &a, &b, &count) != 3 ||
        count < 1) {
      std::cerr << "error: --lambda-range expects start:stop:count\n";
      return kExitUsage;
    }
    for (int i = 0; i < count; ++i)
      config.lambdas.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
  }
  if (const char* env = std::getenv("HAMLINK_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) config.threads = n;
  }
  set_worker_threads(config.threads);

  if (config.problem_path.empty()) {
    std::cerr << "error: --problem is required\n";
    return kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(config);
    if (solve->parsed()) return cmd_solve(config);
    if (sweep->parsed()) return cmd_sweep(config);
    if (validate->parsed()) return cmd_validate(config);
  } catch (const HyperbolicityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitHypothesis;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::cerr << "error: no subcommand\n";
  return kExitUsage;
}

}  // namespace hamlink
