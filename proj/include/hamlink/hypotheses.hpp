#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hamlink/functional.hpp"
#include "hamlink/problem.hpp"
#include "hamlink/spectral.hpp"

namespace hamlink {

// Radial-times-direction sampling used by all pointwise audits.
struct SampleScheme {
  double r_min = 1e-3;
  double r_max = 1e3;
  int n_radii = 200;
  int n_dirs = 64;
  std::uint64_t seed = 77;
};

// Directions on the unit sphere, deterministic in the seed.
std::vector<Vec> sample_directions(int dim, int n_dirs, std::uint64_t seed);

// Fitted constants of the epsilon-split growth bounds
//   |f(z)| <= eps |z| + C_f |z|^{p-1},   |g(z)| <= eps |z| + C_g |z|^{q-1},
//   F(z)  <= eps |z|^2 + C_F |z|^p,      G(z) <= eps |z|^2 + C_G |z|^q,
//   F(z)  >= C_eps |z|^q - eps |z|^2  with C_eps <= C_G.
struct GrowthConstants {
  double epsilon = 0.0;
  double C_f_eps = 0.0;
  double C_g_eps = 0.0;
  double C_F_eps = 0.0;
  double C_G_eps = 0.0;
  double C_eps = 0.0;
};

GrowthConstants fit_growth_constants(const NonlinearitySpec& nl, double epsilon,
                                     const std::vector<double>& radii,
                                     const std::vector<Vec>& dirs);
GrowthConstants fit_growth_constants(const NonlinearitySpec& nl, double epsilon,
                                     const SampleScheme& scheme);

enum class Verdict { Pass, Fail, Inconclusive };

const char* verdict_name(Verdict v);

struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  double fitted = std::numeric_limits<double>::quiet_NaN();
  double margin = std::numeric_limits<double>::quiet_NaN();
  Vec witness;  // point violating the inequality, when verdict == Fail
  std::string note;
};

// (F1), (F2) small-z decay, (F3) superquadratic growth with F >= 0,
// (F4) ray monotonicity, (F5) power lower bound beyond rho.
std::vector<CheckResult> check_F3_F4_F5(const NonlinearitySpec& nl,
                                        const SampleScheme& scheme);
std::vector<CheckResult> check_F1_F2(const NonlinearitySpec& nl,
                                     const SampleScheme& scheme);

// (G1)-(G3) plus the coupling bound (FG).
std::vector<CheckResult> check_G_and_FG(const NonlinearitySpec& nl,
                                        const SampleScheme& scheme);

// Ambrosetti-Rabinowitz chains 0 <= qF <= f.z and 0 <= g.z <= qG.
std::vector<CheckResult> check_AR(const NonlinearitySpec& nl,
                                  const SampleScheme& scheme);

// sup over |w| = rho of (g(w).w)/(f(w).w); +inf when f.w vanishes at some
// sampled direction.
double ratio_sup_at(const NonlinearitySpec& nl, double rho,
                    const std::vector<Vec>& dirs);

// Admissibility threshold lambda < (Gamma0/||Gamma||) (C_eps/C_G) (2 kappa)^{-q};
// consts must be fitted at eps = mu0^2 / (4 (Gamma0 + ||Gamma||)).
double lambda_threshold_step2(const GrowthConstants& consts, const WeightSpec& weight,
                              double kappa, double q);

struct BudgetCondition {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
  double margin() const { return rhs - lhs; }
};

struct BoundednessBudget {
  double Lambda = 0.0;
  double Lambda0 = 0.0;
  double gamma_proof = 1.0;
  double C_heuristic = 1.0;
  double rho_selected = 0.0;
  double lambda_selected = 0.0;
  double rho_input = 0.0;
  double lambda_input = 0.0;
  double ratio_sup = 0.0;   // at rho_selected (or rho_input when none accepted)
  double E = 0.0;           // 1 - lambda * ratio_sup
  double D = 0.0;           // (1 + lambda / rho^{p-q}) 2 kappa ||Gamma||
  double sup_phi = 0.0;     // sup_{|v| < rho} |Phi(v)| / |v|^2
  std::vector<BudgetCondition> conditions;
  bool accepted = false;
  std::string note;
};

// Evaluates the smallness recipe: eps = Lambda0/16, rho small enough that the
// Phi and growth conditions hold, lambda small enough that E >= 1/2 and
// lambda <= rho^{p-q}. Scans rho downward from rho_max and keeps the largest
// admissible radius for the given lambda. consts must be fitted at
// eps = Lambda0/16. The constants gamma_proof and C_heuristic are exposed
// configuration with default 1 (flagged heuristic in reports).
BoundednessBudget boundedness_budget(const NonlinearitySpec& nl,
                                     const GrowthConstants& consts,
                                     const WeightSpec& weight, double mu0,
                                     double kappa, double gamma_proof,
                                     double C_heuristic, double rho_max,
                                     double lambda, const SampleScheme& scheme);

struct AuditConfig {
  SampleScheme scheme;
  int grid_T = 20;
  int grid_M = 256;
  int kappa_samples = 200;
  std::uint64_t kappa_seed = 2024;
  double gamma_proof = 1.0;
  double C_heuristic = 1.0;
  double tol_hyp = 1e-10;
};

struct HypothesisReport {
  HyperbolicityCertificate hyperbolicity;
  double mu0 = 0.0;
  KappaEstimate kappa;
  GrowthConstants consts_step2;   // fitted at the Step-2 epsilon
  GrowthConstants consts_budget;  // fitted at eps = Lambda0/16
  double lambda = 0.0;
  double lambda_threshold = 0.0;
  double ratio_sup = 0.0;  // at the problem's rho
  double E = 0.0;
  std::vector<CheckResult> checks;
  BoundednessBudget budget;
  bool overall_pass = false;
  std::string fail_reason;
};

// Runs every check and assembles the verdict. Overall PASS requires the
// hyperbolicity certificate, every assumption verdict Pass, lambda below the
// Step-2 threshold, and an accepted boundedness budget.
HypothesisReport audit(const ProblemSpec& problem, const AuditConfig& config);

}  // namespace hamlink
