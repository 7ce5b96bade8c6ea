#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hamlink/functional.hpp"

namespace hamlink {

struct SolverOptions {
  double tol_cerami = 1e-6;
  double tol_inner = 1e-8;
  int max_inner = 500;
  int max_outer = 200;
  int restarts = 5;
  std::uint64_t seed = 1;
  double safeguard = 1e8;       // ascent value beyond this flags a Step-2 violation
  double initial_amplitude = 1.5;
  int polish_iters = 300;       // residual-minimization finisher cap
};

struct GeometryOptions {
  int sphere_starts = 4;
  int sphere_iters = 80;
  int boundary_samples = 64;
  int triple_samples = 160;
  std::uint64_t seed = 5;
  double r_cap_factor = 1024.0;  // R doubling cap, times r
};

// Certificate data for the linking configuration: a sphere radius r in X+
// with positive infimum, a cone boundary radius R with nonpositive supremum,
// and a small-triple-norm ball staying strictly below the sphere level.
struct LinkingGeometry {
  double r = 0.0;
  double inf_sphere = 0.0;
  double R_of_u = 0.0;
  double sup_boundary = 0.0;
  double delta = 0.0;
  double sup_small_triple = 0.0;
  bool valid = false;
  std::string note;
};

struct TraceEntry {
  int iter = 0;
  double value = 0.0;
  double cerami = 0.0;
  double triple = 0.0;
};

struct SolveResult {
  SplitState orbit;
  double action_value = 0.0;
  double level = 0.0;  // minimax level estimate (upper bound on c)
  std::vector<TraceEntry> trace;
  std::vector<int> shifts;
  bool converged = false;
  LinkingGeometry geometry;
  std::string flag;
};

// Gaussian bump along the top positive eigenvector of the zero-frequency
// symbol, scaled to the requested pointwise amplitude.
SplitState initial_guess(const FunctionalContext& ctx, double amplitude);

struct InnerResult {
  SplitState state;
  double value = -std::numeric_limits<double>::infinity();
  double t = 0.0;
  bool converged = false;
  int iters = 0;
  bool step2_violation = false;
};

// Ascends the action on the cone R+ u \oplus X^- by projected gradient
// ascent with adaptive steps; t is clamped to >= 0 and the iterate to
// ||z|| <= radius_cap when finite. `start` supplies a warm start.
InnerResult inner_maximize(const FunctionalContext& ctx, const SplitState& u,
                           const SplitState* start, int max_iters, double tol,
                           double radius_cap = std::numeric_limits<double>::infinity(),
                           double safeguard = 1e8);

// Integer recentering: finds y maximizing the [-1, 1]-window mass around y
// and shifts the trajectory so that window sits at the origin.
std::pair<SplitState, int> recenter(const FunctionalContext& ctx, const SplitState& z);

// Integer-window L2 masses; y runs over {-T..T-1} (circular windows).
std::vector<std::pair<int, double>> window_masses(const FunctionalContext& ctx,
                                                  const SplitState& z, double R);

// Estimates the three linking levels around direction u and selects r, R
// and delta. Refuses the certificate when no radius gives a positive sphere
// infimum.
LinkingGeometry verify_linking_geometry(const FunctionalContext& ctx,
                                        const SplitState& u,
                                        const GeometryOptions& opts);

// sup of the action over sampled states with triple norm <= delta, for each
// delta in `deltas`. One master sample set serves every delta, so the curve
// is monotone in delta by construction.
std::vector<double> sup_small_triple_curve(const FunctionalContext& ctx,
                                           const TripleNormContext& tn,
                                           const std::vector<double>& deltas,
                                           int samples, std::uint64_t seed);

// Two-level minimax: Riemannian descent over unit directions u in X+ of the
// inner cone maximum, with integer recentering after every outer step and a
// residual-minimization polish once the saddle is bracketed. Terminates on
// the Cerami quantity (1 + ||z||) ||J'(z)||.
SolveResult outer_minimize(const FunctionalContext& ctx, const SplitState& u0,
                           const SolverOptions& opts,
                           const LinkingGeometry* geometry = nullptr);

}  // namespace hamlink
