#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hamlink/functional.hpp"
#include "hamlink/solver.hpp"

namespace hamlink {

struct ValidationReport {
  double residual_l2 = 0.0;
  double tail_sup = 0.0;
  double tail_fraction = 0.8;
  bool decay_pass = false;
  std::vector<std::pair<int, double>> window_mass;
  std::optional<double> oracle_error;
  bool level_check = false;
  double action_value = 0.0;
  double triple = 0.0;
};

// Discrete L2 norm of z' - J (A z + Gamma (f(z) - lambda g(z))). The
// derivative comes from direct spectral differentiation of the orbit,
// independent of the solver's preconditioned gradient path.
double ode_residual(const FunctionalContext& ctx, const SplitState& orbit);

// Max pointwise |z(t)| over |t| >= fraction * T.
double decay_check(const FunctionalContext& ctx, const SplitState& orbit,
                   double fraction = 0.8);

struct VanishingDiagnostic {
  std::vector<double> sup_masses;     // sup over integer y of the window mass
  std::vector<double> pairing_plus;   // int Gamma (f - lambda g) . z+
  std::vector<double> pairing_minus;  // int Gamma (f - lambda g) . z-
  bool vanishing = false;
};

// Windowed-mass escape diagnostic over a state sequence; flags vanishing
// when the sup-mass falls below 1e-3 of the first state's L2 norm^2, and
// reports the nonlinear pairings that must then vanish as well.
VanishingDiagnostic vanishing_diagnostic(const FunctionalContext& ctx,
                                         const std::vector<SplitState>& states,
                                         double R);

// Max-abs deviation from an analytic trajectory after scanning time shifts
// (integer grid, then golden-section refinement; both signs tried).
// With align = false only the zero shift is evaluated.
double oracle_compare(const FunctionalContext& ctx, const SplitState& orbit,
                      const std::function<Vec(double)>& analytic, bool align);

ValidationReport validate_orbit(const FunctionalContext& ctx, const SplitState& orbit,
                                const LinkingGeometry* geometry = nullptr,
                                double decay_fraction = 0.8);

// Benchmark soliton (sqrt(2) sech t, sqrt(2) sech t tanh t) of the
// first-component quartic problem with A = diag(-1, 1).
Vec benchmark_soliton(double t);

// True when the problem is exactly the analytic benchmark, so the soliton
// can serve as an oracle.
bool has_benchmark_oracle(const ProblemSpec& problem);

}  // namespace hamlink
