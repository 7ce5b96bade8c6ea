#include "hamlink/solver.hpp"

#include <algorithm>
#include <cmath>

#include "hamlink/hypotheses.hpp"

namespace hamlink {

namespace {

// Pure X+ state with unit X-norm from raw plus-part coefficients.
SplitState unit_plus_state(const OperatorSymbol& sym, const CMat& plus_coeffs) {
  double n = norm_x_direct(sym, plus_coeffs);
  if (n < 1e-12)
    throw std::invalid_argument("solver: degenerate direction with vanishing X+ part");
  SplitState u;
  u.plus = plus_coeffs / n;
  u.minus = CMat::Zero(plus_coeffs.rows(), plus_coeffs.cols());
  u.coeffs = u.plus;
  u.norm_plus_cached = 1.0;
  u.norm_minus_cached = 0.0;
  return u;
}

// t u + v- assembled without re-running the projectors (both parts already
// live in their invariant subspaces).
SplitState cone_state(const OperatorSymbol& sym, const SplitState& u, double t,
                      const CMat& vm) {
  SplitState s;
  s.plus = t * u.plus;
  s.minus = vm;
  s.coeffs = s.plus + s.minus;
  s.norm_plus_cached = t;
  s.norm_minus_cached = std::sqrt(std::max(0.0, x_inner(sym, vm, vm)));
  return s;
}

CMat random_minus(const FunctionalContext& ctx, std::mt19937_64& rng, double target_norm) {
  const OperatorSymbol& sym = *ctx.symbol;
  CMat c = random_coeffs(ctx.grid, rng, false);
  CMat vm(ctx.grid.dim, ctx.grid.n());
  for (int m = 0; m < ctx.grid.n(); ++m) vm.col(m) = sym.modes[m].Pminus * c.col(m);
  double n = norm_x_direct(sym, vm);
  if (n < 1e-14) return CMat::Zero(ctx.grid.dim, ctx.grid.n());
  return vm * (target_norm / n);
}

CMat random_plus(const FunctionalContext& ctx, std::mt19937_64& rng, double target_norm) {
  const OperatorSymbol& sym = *ctx.symbol;
  CMat c = random_coeffs(ctx.grid, rng, false);
  CMat vp(ctx.grid.dim, ctx.grid.n());
  for (int m = 0; m < ctx.grid.n(); ++m) vp.col(m) = sym.modes[m].Pplus * c.col(m);
  double n = norm_x_direct(sym, vp);
  if (n < 1e-14) return CMat::Zero(ctx.grid.dim, ctx.grid.n());
  return vp * (target_norm / n);
}

}  // namespace

SplitState initial_guess(const FunctionalContext& ctx, double amplitude) {
  const SpectralGrid& g = ctx.grid;
  if (amplitude == 0.0) return zero_state(*ctx.symbol);
  const ModeData& zero_mode = ctx.symbol->modes[g.M];
  // Top positive eigenvector of M(0); real by construction at mode zero.
  Vec dir(g.dim);
  for (int i = 0; i < g.dim; ++i) dir(i) = zero_mode.U(i, g.dim - 1).real();
  Mat values(g.dim, g.n());
  for (int j = 0; j < g.n(); ++j) {
    double t = g.point(j);
    values.col(j) = std::exp(-t * t) * dir;
  }
  double peak = 0.0;
  for (int j = 0; j < g.n(); ++j) peak = std::max(peak, values.col(j).norm());
  values *= amplitude / peak;
  return state_from_values(*ctx.symbol, *ctx.transform, values);
}

InnerResult inner_maximize(const FunctionalContext& ctx, const SplitState& u,
                           const SplitState* start, int max_iters, double tol,
                           double radius_cap, double safeguard) {
  const OperatorSymbol& sym = *ctx.symbol;
  double t = 1.0;
  CMat vm = CMat::Zero(ctx.grid.dim, ctx.grid.n());
  if (start) {
    t = std::max(0.0, x_inner(sym, start->plus, u.plus));
    vm = start->minus;
  }

  InnerResult res;
  double step = 0.25;
  SplitState z = cone_state(sym, u, t, vm);
  double value = action(ctx, z);
  int it = 0;
  bool have_prev = false;
  double prev_t = 0.0, prev_gt = 0.0;
  CMat prev_vm, prev_gv;
  for (; it < max_iters; ++it) {
    GradientReport rep = gradient(ctx, z);
    value = rep.value;
    if (value > safeguard) {
      res.step2_violation = true;
      break;
    }
    double gt = x_inner(sym, rep.gradient.coeffs, u.coeffs);
    const CMat& gv = rep.gradient.minus;
    double gv2 = x_inner(sym, gv, gv);
    double pgt = (t > 0.0) ? gt : std::max(gt, 0.0);
    double pg = std::sqrt(pgt * pgt + gv2);
    if (pg <= tol) {
      res.converged = true;
      break;
    }
    // Barzilai-Borwein step seed from the last accepted move; it adapts to
    // the soft curvature directions a fixed step cap would crawl along.
    if (have_prev) {
      double dxt = t - prev_t;
      CMat dxv = vm - prev_vm;
      double dgt = gt - prev_gt;
      CMat dgv = gv - prev_gv;
      double num = dxt * dxt + x_inner(sym, dxv, dxv);
      double den = -(dxt * dgt + x_inner(sym, dxv, dgv));  // concave: positive
      if (den > 1e-300 && num > 0.0)
        step = std::clamp(num / den, 1e-3, 1e4);
    }
    prev_t = t;
    prev_vm = vm;
    prev_gt = gt;
    prev_gv = gv;
    have_prev = true;

    // Ascent with Armijo backtracking along +grad.
    bool accepted = false;
    while (step >= 1e-14) {
      double t2 = std::max(0.0, t + step * gt);
      CMat vm2 = vm + step * gv;
      double predicted = gt * (t2 - t) + step * gv2;
      SplitState z2 = cone_state(sym, u, t2, vm2);
      if (std::isfinite(radius_cap)) {
        double nz = norm_x(z2);
        if (nz > radius_cap) {
          double sc = radius_cap / nz;
          t2 *= sc;
          vm2 *= sc;
          z2 = cone_state(sym, u, t2, vm2);
        }
      }
      double v2 = action(ctx, z2);
      if (v2 >= value + 1e-4 * predicted - 1e-14 * (1.0 + std::abs(value))) {
        t = t2;
        vm = std::move(vm2);
        z = std::move(z2);
        value = v2;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stagnated at roundoff
  }
  res.state = std::move(z);
  res.value = value;
  res.t = t;
  res.iters = it;
  return res;
}

std::vector<std::pair<int, double>> window_masses(const FunctionalContext& ctx,
                                                  const SplitState& z, double R) {
  // |z|^2 is a trigonometric polynomial of bandwidth 2M, exactly resolved on
  // the oversampled grid, so the window integral has a closed form:
  //   int_{y-R}^{y+R} e^{i nu t} dt = e^{i nu y} 2 sin(nu R) / nu.
  // This makes the mass map exactly equivariant under the integer shifts the
  // recentering applies.
  const SpectralGrid& g = ctx.grid;
  const int nos = g.n_os();
  const int band = 2 * g.M;
  Mat vals = ctx.transform->to_values_oversampled(z.coeffs);
  std::vector<double> density(nos);
  for (int j = 0; j < nos; ++j) density[j] = vals.col(j).squaredNorm();

  // Density coefficients hat_w(nu_m) = (1/nos) sum_j w_j e^{-i nu_m t_j} for
  // nu_m = pi m / T, m = 0..2M; negative modes are conjugates.
  std::vector<Complex> wm(band + 1);
  for (int m = 0; m <= band; ++m) {
    double nu = M_PI * m / g.T;
    Complex rot = std::polar(1.0, -nu * g.spacing_os());
    Complex cur = std::polar(1.0, nu * g.T);  // e^{-i nu t_0}, t_0 = -T
    Complex acc(0.0, 0.0);
    for (int j = 0; j < nos; ++j) {
      acc += density[j] * cur;
      cur *= rot;
    }
    wm[m] = acc / static_cast<double>(nos);
  }

  std::vector<std::pair<int, double>> out;
  out.reserve(2 * g.T);
  for (int y = -g.T; y < g.T; ++y) {
    double mass = wm[0].real() * 2.0 * R;
    for (int m = 1; m <= band; ++m) {
      double nu = M_PI * m / g.T;
      Complex kernel = std::polar(1.0, nu * y) * (2.0 * std::sin(nu * R) / nu);
      mass += 2.0 * (wm[m] * kernel).real();
    }
    out.emplace_back(y, std::max(0.0, mass));
  }
  return out;
}

std::pair<SplitState, int> recenter(const FunctionalContext& ctx, const SplitState& z) {
  auto masses = window_masses(ctx, z, 1.0);
  int best_y = masses.front().first;
  double best = masses.front().second;
  for (const auto& [y, m] : masses) {
    double slack = 1e-12 * std::max(1.0, best);
    if (m > best + slack) {
      best = m;
      best_y = y;
    } else if (m >= best - slack && std::abs(y) < std::abs(best_y)) {
      best_y = y;  // tie: prefer the smaller shift
    }
  }
  if (best_y == 0) return {z, 0};
  return {shift_state(ctx.grid, z, best_y), best_y};
}

std::vector<double> sup_small_triple_curve(const FunctionalContext& ctx,
                                           const TripleNormContext& tn,
                                           const std::vector<double>& deltas,
                                           int samples, std::uint64_t seed) {
  const OperatorSymbol& sym = *ctx.symbol;
  double dmax = *std::max_element(deltas.begin(), deltas.end());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  // Master sample set spanning triple-norm radii down to dmax * 2^-12;
  // each delta takes the sup over its subset, so the curve is monotone
  // in delta exactly.
  std::vector<std::pair<double, double>> table;  // (triple, action)
  table.emplace_back(0.0, 0.0);                  // origin belongs to every ball
  int n_elem = static_cast<int>(tn.elements.size());
  for (int i = 0; i < samples; ++i) {
    double target = dmax * std::exp2(-12.0 * u01(rng));
    SplitState st;
    int kind = i % 4;
    if (kind == 0) {
      st = split(sym, random_plus(ctx, rng, target));
    } else if (kind == 1) {
      int j = std::min<int>(static_cast<int>(u01(rng) * 40), n_elem - 1);
      const auto& el = tn.elements[j];
      if (el.weight <= 0.0) continue;
      st = split(sym, tn.basis_state(j) * (target / el.weight));
    } else {
      CMat c = random_plus(ctx, rng, 1.0) + random_minus(ctx, rng, kind == 2 ? 1.0 : 4.0);
      SplitState probe = split(sym, c);
      double tn0 = triple_norm(tn, probe);
      if (tn0 < 1e-14) continue;
      st = split(sym, c * (target / tn0));
    }
    double tval = triple_norm(tn, st);
    table.emplace_back(tval, action(ctx, st));
  }

  std::vector<double> out;
  out.reserve(deltas.size());
  for (double d : deltas) {
    double sup = -std::numeric_limits<double>::infinity();
    for (const auto& [tval, a] : table)
      if (tval <= d) sup = std::max(sup, a);
    out.push_back(sup);
  }
  return out;
}

namespace {

// Multi-start Riemannian minimization of the action over the X+ sphere of
// radius r. Returns the best (lowest) value found; an upper estimate of the
// true infimum.
double sphere_infimum(const FunctionalContext& ctx, const SplitState& u, double r,
                      const GeometryOptions& opts) {
  const OperatorSymbol& sym = *ctx.symbol;
  std::mt19937_64 rng(opts.seed + 101);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < opts.sphere_starts; ++s) {
    CMat p = (s == 0) ? CMat(r * u.plus) : random_plus(ctx, rng, r);
    if (norm_x_direct(sym, p) < 1e-12) continue;
    p *= r / norm_x_direct(sym, p);
    SplitState z = split(sym, p);
    double value = action(ctx, z);
    double step = 0.2;
    for (int it = 0; it < opts.sphere_iters; ++it) {
      GradientReport rep = gradient(ctx, z);
      value = rep.value;
      const CMat& gp = rep.gradient.plus;
      double radial = x_inner(sym, gp, p) / (r * r);
      CMat tang = gp - radial * p;
      double tn2 = x_inner(sym, tang, tang);
      if (std::sqrt(tn2) <= 1e-9) break;
      bool ok = false;
      while (step >= 1e-13) {
        CMat p2 = p - step * tang;
        p2 *= r / norm_x_direct(sym, p2);
        SplitState z2 = split(sym, p2);
        double v2 = action(ctx, z2);
        if (v2 <= value - 1e-4 * step * tn2) {
          p = std::move(p2);
          z = std::move(z2);
          value = v2;
          ok = true;
          break;
        }
        step *= 0.5;
      }
      if (!ok) break;
      step = std::min(step * 1.5, 1.0);
    }
    best = std::min(best, value);
  }
  return best;
}

}  // namespace

LinkingGeometry verify_linking_geometry(const FunctionalContext& ctx, const SplitState& u0,
                                        const GeometryOptions& opts) {
  const OperatorSymbol& sym = *ctx.symbol;
  const auto& nl = ctx.problem.nonlinearity;
  LinkingGeometry geo;
  SplitState u = unit_plus_state(sym, u0.plus);

  // Radius scan seeded by the fitted sphere lower bound
  //   J(z+) >= r^2 (1/2 - eps C - C_F ||Gamma|| S_p^p r^{p-2}).
  double mu0 = sym.mu0;
  double eps1 = mu0 * mu0 / (4.0 * ctx.problem.weight.gamma_sup);
  SampleScheme scheme;
  scheme.n_radii = 60;
  scheme.n_dirs = 16;
  GrowthConstants consts = fit_growth_constants(nl, eps1, scheme);
  std::mt19937_64 rng(opts.seed);
  double Sp = 0.0;
  for (int i = 0; i < 24; ++i) {
    CMat p = random_plus(ctx, rng, 1.0);
    double nx = norm_x_direct(sym, p);
    if (nx < 1e-12) continue;
    Sp = std::max(Sp, lq_norm(*ctx.transform, p, nl.p) / nx);
  }
  Sp = std::max(Sp, lq_norm(*ctx.transform, u.plus, nl.p));
  double Ctil = std::max(1e-12, consts.C_F_eps * ctx.problem.weight.gamma_sup *
                                    std::pow(Sp, nl.p));
  double r_star = std::pow(1.0 / (2.0 * nl.p * Ctil), 1.0 / (nl.p - 2.0));

  geo.inf_sphere = -std::numeric_limits<double>::infinity();
  for (double factor : {0.5, 0.75, 1.0, 1.5}) {
    double r = factor * r_star;
    double inf_est = sphere_infimum(ctx, u, r, opts);
    if (inf_est > geo.inf_sphere) {
      geo.inf_sphere = inf_est;
      geo.r = r;
    }
  }
  if (!(geo.inf_sphere > 0.0)) {
    geo.valid = false;
    geo.note = "no sphere radius with positive action infimum";
    return geo;
  }

  // Boundary radius: double R until every sampled boundary point of M(u)
  // is nonpositive.
  double R = 2.0 * geo.r;
  const double R_cap = opts.r_cap_factor * geo.r;
  auto boundary_sup = [&](double Rv) {
    double sup = -std::numeric_limits<double>::infinity();
    std::mt19937_64 brng(opts.seed + 7);
    int nb = opts.boundary_samples;
    for (int i = 0; i < nb; ++i) {
      double frac = static_cast<double>(i % 8 + 1) / 8.0;
      CMat vm = random_minus(ctx, brng, frac * Rv);
      // disc part {v-: ||v-|| <= R}
      sup = std::max(sup, action(ctx, cone_state(sym, u, 0.0, vm)));
      // shell part {t u + v-: ||.|| = R, t > 0}
      double theta = 0.5 * M_PI * (i % 12 + 1) / 12.0;
      double t = Rv * std::cos(theta);
      CMat vs = random_minus(ctx, brng, Rv * std::sin(theta));
      sup = std::max(sup, action(ctx, cone_state(sym, u, t, vs)));
    }
    // pure-ray endpoint t = R
    sup = std::max(sup, action(ctx, cone_state(sym, u, Rv,
                                               CMat::Zero(ctx.grid.dim, ctx.grid.n()))));
    return sup;
  };
  double sup_b = boundary_sup(R);
  while (sup_b > 0.0 && R < R_cap) {
    R *= 2.0;
    sup_b = boundary_sup(R);
  }
  geo.R_of_u = R;
  geo.sup_boundary = sup_b;
  if (sup_b > 0.0) {
    geo.valid = false;
    geo.note = "boundary supremum stayed positive up to the radius cap";
    return geo;
  }

  // Small-triple ball: pick the largest delta whose sampled sup stays
  // clearly below the sphere infimum.
  auto tn = make_triple_norm_context(ctx.symbol);
  std::vector<double> deltas;
  for (int j = 1; j <= 12; ++j) deltas.push_back(geo.r * std::exp2(-j));
  auto curve = sup_small_triple_curve(ctx, tn, deltas, opts.triple_samples, opts.seed + 3);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (curve[i] < 0.95 * geo.inf_sphere) {
      geo.delta = deltas[i];
      geo.sup_small_triple = curve[i];
      geo.valid = true;
      break;
    }
  }
  if (!geo.valid) {
    geo.note = "no delta with small-triple supremum below the sphere infimum";
    return geo;
  }
  geo.note = "certificate valid: inf_sphere > max(sup_boundary, sup_small_triple)";
  return geo;
}

namespace {

InnerResult inner_with_restarts(const FunctionalContext& ctx, const SplitState& u,
                                const SplitState* warm, const SolverOptions& opts,
                                int outer_iter, double r_hint) {
  const OperatorSymbol& sym = *ctx.symbol;
  InnerResult best;
  int runs = (outer_iter == 0) ? std::max(1, opts.restarts) : 1;
  std::mt19937_64 rng(opts.seed + 1000 * static_cast<std::uint64_t>(outer_iter + 1));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < runs; ++k) {
    InnerResult ir;
    if (k == 0) {
      ir = inner_maximize(ctx, u, warm, opts.max_inner, opts.tol_inner,
                          std::numeric_limits<double>::infinity(), opts.safeguard);
    } else if (k == 1) {
      SplitState s0 = cone_state(sym, u, r_hint, CMat::Zero(ctx.grid.dim, ctx.grid.n()));
      ir = inner_maximize(ctx, u, &s0, opts.max_inner, opts.tol_inner,
                          std::numeric_limits<double>::infinity(), opts.safeguard);
    } else {
      double t0 = r_hint * (0.5 + 2.0 * u01(rng));
      SplitState s0 = cone_state(sym, u, t0, random_minus(ctx, rng, 0.5 * t0));
      ir = inner_maximize(ctx, u, &s0, opts.max_inner, opts.tol_inner,
                          std::numeric_limits<double>::infinity(), opts.safeguard);
    }
    if (ir.value > best.value + 1e-12) best = std::move(ir);
    if (best.step2_violation) break;
  }
  return best;
}

}  // namespace

SolveResult outer_minimize(const FunctionalContext& ctx, const SplitState& u0,
                           const SolverOptions& opts, const LinkingGeometry* geometry) {
  const OperatorSymbol& sym = *ctx.symbol;
  SolveResult result;
  if (geometry) result.geometry = *geometry;
  auto tn = make_triple_norm_context(ctx.symbol);

  SplitState u = unit_plus_state(sym, u0.plus);
  double r_hint = (geometry && geometry->valid) ? std::max(geometry->r, 1e-3) : 1.0;

  SplitState warm = cone_state(sym, u, std::max(r_hint, norm_plus(u0)), u0.minus);
  InnerResult inner = inner_with_restarts(ctx, u, &warm, opts, 0, r_hint);
  if (inner.step2_violation) {
    result.flag = "inner ascent exceeded the safeguard (Step-2 violation?)";
    result.orbit = inner.state;
    result.action_value = inner.value;
    result.level = inner.value;
    return result;
  }

  SplitState z = inner.state;
  double beta = 0.5;
  double value = inner.value;
  GradientReport rep = gradient(ctx, z);
  int iter = 0;
  int trace_iter = 0;
  bool converged = false;

  for (; iter < opts.max_outer; ++iter) {
    result.trace.push_back({trace_iter++, rep.value, rep.cerami, triple_norm(tn, z)});
    if (rep.cerami <= opts.tol_cerami) {
      converged = true;
      break;
    }

    // Keep the orbit centered; integer shifts leave the action invariant.
    auto [zc, y] = recenter(ctx, z);
    if (y != 0) {
      z = std::move(zc);
      u = unit_plus_state(sym, shift_coeffs(ctx.grid, u.plus, y));
      rep.gradient = shift_state(ctx.grid, rep.gradient, y);
      result.shifts.push_back(y);
    }

    // Tangent component of the X+ gradient at the inner maximizer drives
    // the outer direction update.
    double t = norm_plus(z);
    double radial = x_inner(sym, rep.gradient.plus, u.plus);
    CMat tang = rep.gradient.plus - radial * u.plus;
    double tang2 = x_inner(sym, tang, tang);
    if (t * std::sqrt(tang2) <= 0.1 * opts.tol_cerami || std::sqrt(tang2) < 1e-13) break;

    bool accepted = false;
    while (beta >= 1e-12) {
      CMat up2 = u.plus - beta * tang;
      SplitState u2 = unit_plus_state(sym, up2);
      SplitState warm2 = cone_state(
          sym, u2, std::max(0.0, x_inner(sym, z.plus, u2.plus)), z.minus);
      InnerResult ir =
          inner_maximize(ctx, u2, &warm2, opts.max_inner, opts.tol_inner,
                         std::numeric_limits<double>::infinity(), opts.safeguard);
      if (ir.step2_violation) {
        result.flag = "inner ascent exceeded the safeguard (Step-2 violation?)";
        beta = 0.0;
        break;
      }
      if (ir.value <= value - 1e-4 * beta * t * tang2) {
        u = std::move(u2);
        z = std::move(ir.state);
        value = ir.value;
        accepted = true;
        break;
      }
      beta *= 0.5;
    }
    if (!accepted) break;
    beta = std::min(beta * 1.4, 2.0);
    rep = gradient(ctx, z);
  }

  // Residual-minimization polish: gradient descent on 1/2 ||grad J||^2.
  // Safe once the minimax phase has bracketed the saddle.
  if (!converged && rep.cerami <= 1e-2 * (1.0 + std::abs(rep.value))) {
    double s = 1.0;
    double q = 0.5 * rep.derivative_norm * rep.derivative_norm;
    for (int pit = 0; pit < opts.polish_iters && !converged; ++pit) {
      double dn = rep.derivative_norm;
      if (dn < 1e-300) break;
      double h = 1e-5 * (1.0 + norm_x(z));
      CMat dhat = rep.gradient.coeffs / dn;
      GradientReport gp = gradient(ctx, split(sym, z.coeffs + h * dhat));
      GradientReport gm = gradient(ctx, split(sym, z.coeffs - h * dhat));
      CMat w = (gp.gradient.coeffs - gm.gradient.coeffs) * (dn / (2.0 * h));
      double w2 = x_inner(sym, w, w);
      if (w2 < 1e-300) break;
      bool ok = false;
      while (s >= 1e-12) {
        SplitState z2 = split(sym, z.coeffs - s * w);
        GradientReport r2 = gradient(ctx, z2);
        double q2 = 0.5 * r2.derivative_norm * r2.derivative_norm;
        if (q2 <= q - 1e-4 * s * w2) {
          z = std::move(z2);
          rep = std::move(r2);
          q = q2;
          ok = true;
          break;
        }
        s *= 0.5;
      }
      if (!ok) break;
      s = std::min(s * 1.5, 4.0);
      if (pit % 10 == 9) {
        auto [zc, y] = recenter(ctx, z);
        if (y != 0) {
          z = std::move(zc);
          rep.gradient = shift_state(ctx.grid, rep.gradient, y);
          result.shifts.push_back(y);
        }
      }
      result.trace.push_back({trace_iter++, rep.value, rep.cerami, triple_norm(tn, z)});
      if (rep.cerami <= opts.tol_cerami) converged = true;
    }
  }

  auto [zf, yf] = recenter(ctx, z);
  if (yf != 0) {
    z = std::move(zf);
    result.shifts.push_back(yf);
    rep = gradient(ctx, z);
  }

  double triple_final = triple_norm(tn, z);
  if (result.trace.empty() || result.trace.back().cerami != rep.cerami)
    result.trace.push_back({trace_iter++, rep.value, rep.cerami, triple_final});

  result.orbit = std::move(z);
  result.action_value = rep.value;
  result.level = rep.value;
  result.converged = converged && rep.cerami <= opts.tol_cerami;
  if (result.converged && geometry && geometry->valid &&
      triple_final < 0.5 * geometry->delta) {
    result.converged = false;
    result.flag = "triple norm fell below delta/2; sequence drifting to zero";
  }
  if (geometry && !geometry->valid && result.flag.empty())
    result.flag = "geometry certificate invalid; the level estimate is not a linking level";
  if (!result.converged && result.flag.empty())
    result.flag = "iteration cap reached before the Cerami tolerance";
  return result;
}

}  // namespace hamlink
