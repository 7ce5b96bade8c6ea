#include "hamlink/validate.hpp"

#include <algorithm>
#include <cmath>

namespace hamlink {

double ode_residual(const FunctionalContext& ctx, const SplitState& orbit) {
  const SpectralGrid& g = ctx.grid;
  const auto& nl = ctx.problem.nonlinearity;
  const Mat J = symplectic_matrix(g.dim);

  CMat dcoeffs = orbit.coeffs;
  for (int m = 0; m < g.n(); ++m) dcoeffs.col(m) *= Complex(0.0, g.freq(m));
  Mat dz = ctx.transform->to_values(dcoeffs);
  Mat z = ctx.transform->to_values(orbit.coeffs);

  const double h = g.spacing();
  KahanSum acc;
  Vec point(g.dim);
  for (int j = 0; j < g.n(); ++j) {
    point = z.col(j);
    Vec rhs = ctx.problem.A * point +
              ctx.gamma_base(j) * (nl.f(point) - ctx.problem.lambda * nl.g(point));
    Vec res = dz.col(j) - J * rhs;
    acc.add(h * res.squaredNorm());
  }
  return std::sqrt(std::max(0.0, acc.value()));
}

double decay_check(const FunctionalContext& ctx, const SplitState& orbit, double fraction) {
  const SpectralGrid& g = ctx.grid;
  Mat z = ctx.transform->to_values(orbit.coeffs);
  double sup = 0.0;
  for (int j = 0; j < g.n(); ++j)
    if (std::fabs(g.point(j)) >= fraction * g.T)
      sup = std::max(sup, z.col(j).norm());
  return sup;
}

VanishingDiagnostic vanishing_diagnostic(const FunctionalContext& ctx,
                                         const std::vector<SplitState>& states,
                                         double R) {
  VanishingDiagnostic diag;
  if (states.empty()) return diag;
  const auto& nl = ctx.problem.nonlinearity;
  const double lambda = ctx.problem.lambda;
  for (const SplitState& s : states) {
    auto masses = window_masses(ctx, s, R);
    double sup = 0.0;
    for (const auto& [y, m] : masses) sup = std::max(sup, m);
    diag.sup_masses.push_back(sup);

    Mat zv = ctx.transform->to_values_oversampled(s.coeffs);
    Mat pv = ctx.transform->to_values_oversampled(s.plus);
    Mat mv = ctx.transform->to_values_oversampled(s.minus);
    const double h = ctx.grid.spacing_os();
    KahanSum pp, pm;
    Vec point(ctx.grid.dim);
    for (int j = 0; j < zv.cols(); ++j) {
      point = zv.col(j);
      Vec nlv = nl.f(point) - lambda * nl.g(point);
      pp.add(h * ctx.gamma_os(j) * nlv.dot(pv.col(j)));
      pm.add(h * ctx.gamma_os(j) * nlv.dot(mv.col(j)));
    }
    diag.pairing_plus.push_back(pp.value());
    diag.pairing_minus.push_back(pm.value());
  }
  double base = l2_inner(*ctx.symbol, states.front().coeffs, states.front().coeffs);
  diag.vanishing = diag.sup_masses.back() <= 1e-3 * std::max(base, 1e-300);
  return diag;
}

namespace {

double max_abs_error_at_shift(const FunctionalContext& ctx, const SplitState& orbit,
                              const std::function<Vec(double)>& analytic, double shift,
                              double sign) {
  const SpectralGrid& g = ctx.grid;
  CMat shifted = shift_coeffs(g, orbit.coeffs, shift);
  Mat vals = ctx.transform->to_values(shifted);
  double err = 0.0;
  for (int j = 0; j < g.n(); ++j) {
    Vec ref = analytic(g.point(j));
    err = std::max(err, (sign * vals.col(j) - ref).cwiseAbs().maxCoeff());
  }
  return err;
}

}  // namespace

double oracle_compare(const FunctionalContext& ctx, const SplitState& orbit,
                      const std::function<Vec(double)>& analytic, bool align) {
  const SpectralGrid& g = ctx.grid;
  double best = std::numeric_limits<double>::infinity();
  if (!align) {
    for (double sign : {1.0, -1.0})
      best = std::min(best, max_abs_error_at_shift(ctx, orbit, analytic, 0.0, sign));
    return best;
  }
  for (double sign : {1.0, -1.0}) {
    double coarse_best = std::numeric_limits<double>::infinity();
    double coarse_shift = 0.0;
    for (int y = -g.T; y < g.T; ++y) {
      double e = max_abs_error_at_shift(ctx, orbit, analytic, y, sign);
      if (e < coarse_best) {
        coarse_best = e;
        coarse_shift = y;
      }
    }
    // Golden-section refinement on [shift - 1, shift + 1].
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = coarse_shift - 1.0, b = coarse_shift + 1.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = max_abs_error_at_shift(ctx, orbit, analytic, c, sign);
    double fd = max_abs_error_at_shift(ctx, orbit, analytic, d, sign);
    for (int it = 0; it < 48; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = max_abs_error_at_shift(ctx, orbit, analytic, c, sign);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = max_abs_error_at_shift(ctx, orbit, analytic, d, sign);
      }
    }
    best = std::min({best, coarse_best, fc, fd});
  }
  return best;
}

ValidationReport validate_orbit(const FunctionalContext& ctx, const SplitState& orbit,
                                const LinkingGeometry* geometry, double decay_fraction) {
  ValidationReport rep;
  rep.residual_l2 = ode_residual(ctx, orbit);
  rep.tail_fraction = decay_fraction;
  rep.tail_sup = decay_check(ctx, orbit, decay_fraction);
  rep.decay_pass = rep.tail_sup <= 1e-6;
  rep.window_mass = window_masses(ctx, orbit, 1.0);
  rep.action_value = action(ctx, orbit);
  auto tn = make_triple_norm_context(ctx.symbol);
  rep.triple = triple_norm(tn, orbit);
  if (geometry && geometry->valid)
    rep.level_check = rep.action_value >= geometry->inf_sphere - 1e-9 &&
                      geometry->inf_sphere > 0.0;
  return rep;
}

Vec benchmark_soliton(double t) {
  Vec z(2);
  double s = 1.0 / std::cosh(t);
  z(0) = std::sqrt(2.0) * s;
  z(1) = std::sqrt(2.0) * s * std::tanh(t);
  return z;
}

bool has_benchmark_oracle(const ProblemSpec& problem) {
  if (problem.dim() != 2 || problem.lambda != 0.0) return false;
  if (problem.nonlinearity.kind != "first_quartic") return false;
  Mat ref(2, 2);
  ref << -1.0, 0.0, 0.0, 1.0;
  if ((problem.A - ref).cwiseAbs().maxCoeff() > 1e-14) return false;
  return problem.weight.kind == "constant" &&
         std::abs(problem.weight.gamma0 - 1.0) <= 1e-14 &&
         std::abs(problem.weight.gamma_sup - 1.0) <= 1e-14;
}

}  // namespace hamlink
