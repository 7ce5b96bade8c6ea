#pragma once

// Shared fixtures for the test suites: the Duffing-type benchmark problem
// (A = diag(-1, 1), Gamma = 1, lambda = 0, F = z_1^4/4) whose homoclinic
// orbit (sqrt(2) sech t, sqrt(2) sech t tanh t) has action 4/3, and the
// admissible power-pair problem used by the hypothesis audits.

#include <cmath>

#include "hamlink/functional.hpp"
#include "hamlink/problem.hpp"
#include "hamlink/solver.hpp"
#include "hamlink/validate.hpp"

namespace hamlink::testing {

inline Mat benchmark_matrix() {
  Mat A(2, 2);
  A << -1.0, 0.0, 0.0, 1.0;
  return A;
}

inline ProblemSpec benchmark_problem() {
  return make_problem(benchmark_matrix(), builtin_first_quartic(2), constant_weight(1.0),
                      0.0);
}

inline ProblemSpec power_problem(double lambda = 0.0, double p = 4.0, double q = 3.0) {
  return make_problem(benchmark_matrix(), builtin_power_pair(p, q, 2), constant_weight(1.0),
                      lambda);
}

// F = G = 0 with power-pair exponents; isolates the quadratic part.
inline ProblemSpec quadratic_problem() {
  NonlinearitySpec nl;
  nl.dim = 2;
  nl.p = 4.0;
  nl.q = 3.0;
  nl.rho = 1.0;
  nl.kind = "zero";
  nl.F = [](const Vec&) { return 0.0; };
  nl.f = [](const Vec& z) { return Vec(Vec::Zero(z.size())); };
  nl.G = [](const Vec&) { return 0.0; };
  nl.g = [](const Vec& z) { return Vec(Vec::Zero(z.size())); };
  return make_problem(benchmark_matrix(), nl, constant_weight(1.0), 0.0);
}

inline FunctionalContext benchmark_context(int T = 20, int M = 512) {
  return make_context(benchmark_problem(), make_grid(T, M, 2));
}

// The exact orbit sampled on the base collocation grid.
inline SplitState exact_orbit(const FunctionalContext& ctx) {
  Mat values(2, ctx.grid.n());
  for (int j = 0; j < ctx.grid.n(); ++j) values.col(j) = benchmark_soliton(ctx.grid.point(j));
  return state_from_values(*ctx.symbol, *ctx.transform, values);
}

// Gaussian bump trajectory with adjustable center/width, useful as a smooth
// deterministic test state.
inline SplitState bump_state(const FunctionalContext& ctx, double center = 0.0,
                             double width = 1.0, double amp1 = 1.0, double amp2 = 0.5) {
  Mat values(2, ctx.grid.n());
  for (int j = 0; j < ctx.grid.n(); ++j) {
    double t = ctx.grid.point(j);
    double e = std::exp(-(t - center) * (t - center) / (width * width));
    values(0, j) = amp1 * e;
    values(1, j) = amp2 * e * (t - center);
  }
  return state_from_values(*ctx.symbol, *ctx.transform, values);
}

inline SplitState random_state(const FunctionalContext& ctx, std::mt19937_64& rng,
                               bool rough = false, double scale = 1.0) {
  CMat c = random_coeffs(ctx.grid, rng, rough);
  double n = norm_x_direct(*ctx.symbol, c);
  if (n > 1e-13) c *= scale / n;
  return split(*ctx.symbol, c);
}

}  // namespace hamlink::testing
