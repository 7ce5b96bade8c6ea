#include "hamlink/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hamlink {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOSmallTol = 1e-2;    // decision level for o(|z|) checks
constexpr double kF3Threshold = 10.0;  // F(Rd)/R^q must exceed this at r_max
constexpr double kMonotoneSlack = 1e-10;
}  // namespace

std::vector<Vec> sample_directions(int dim, int n_dirs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vec> dirs;
  dirs.reserve(n_dirs + 2 * dim);
  // Coordinate axes first so component-aligned degeneracies are always hit.
  for (int i = 0; i < dim; ++i) {
    Vec e = Vec::Zero(dim);
    e(i) = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  for (int i = 0; i < n_dirs; ++i) dirs.push_back(unit_direction(rng, dim));
  return dirs;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "inconclusive";
  }
}

GrowthConstants fit_growth_constants(const NonlinearitySpec& nl, double epsilon,
                                     const std::vector<double>& radii,
                                     const std::vector<Vec>& dirs) {
  if (epsilon <= 0.0) throw std::invalid_argument("fit_growth_constants: epsilon > 0 required");
  if (radii.empty() || dirs.empty())
    throw std::invalid_argument("fit_growth_constants: empty sample sets");
  GrowthConstants c;
  c.epsilon = epsilon;
  double c_lower = kInf;
  for (const Vec& d : dirs) {
    for (double r : radii) {
      if (r <= 0.0) continue;  // the origin is removable in every ratio
      Vec z = r * d;
      double fn = nl.f(z).norm();
      double gn = nl.g(z).norm();
      double F = nl.F(z);
      double G = nl.G(z);
      c.C_f_eps = std::max(c.C_f_eps, std::max(0.0, fn - epsilon * r) / std::pow(r, nl.p - 1.0));
      c.C_g_eps = std::max(c.C_g_eps, std::max(0.0, gn - epsilon * r) / std::pow(r, nl.q - 1.0));
      c.C_F_eps = std::max(c.C_F_eps, std::max(0.0, F - epsilon * r * r) / std::pow(r, nl.p));
      c.C_G_eps = std::max(c.C_G_eps, std::max(0.0, G - epsilon * r * r) / std::pow(r, nl.q));
      c_lower = std::min(c_lower, (F + epsilon * r * r) / std::pow(r, nl.q));
    }
  }
  c.C_eps = std::min(c_lower, c.C_G_eps > 0.0 ? c.C_G_eps : c_lower);
  return c;
}

GrowthConstants fit_growth_constants(const NonlinearitySpec& nl, double epsilon,
                                     const SampleScheme& scheme) {
  return fit_growth_constants(nl, epsilon,
                              logspace(scheme.r_min, scheme.r_max, scheme.n_radii),
                              sample_directions(nl.dim, scheme.n_dirs, scheme.seed));
}

namespace {

// Small-z decay of a gradient field: ratio |v(z)|/|z| must fall below the
// decision level at the inner sampling boundary.
CheckResult check_o_small(const char* name, const VecFn& v, int dim,
                          const SampleScheme& scheme) {
  CheckResult res;
  res.name = name;
  auto radii = logspace(scheme.r_min, 1.0, std::max(8, scheme.n_radii / 4));
  auto dirs = sample_directions(dim, scheme.n_dirs, scheme.seed);
  std::vector<double> worst(radii.size(), 0.0);
  for (std::size_t i = 0; i < radii.size(); ++i)
    for (const Vec& d : dirs)
      worst[i] = std::max(worst[i], v(radii[i] * d).norm() / radii[i]);
  res.fitted = worst.front();
  res.margin = kOSmallTol - worst.front();
  bool decreasing = true;
  for (std::size_t i = 1; i < std::min<std::size_t>(worst.size(), 8); ++i)
    if (worst[i] < worst[i - 1] - kMonotoneSlack * (1.0 + worst[i - 1])) decreasing = false;
  if (worst.front() <= kOSmallTol) {
    res.verdict = Verdict::Pass;
  } else if (decreasing) {
    res.verdict = Verdict::Inconclusive;
    res.note = "ratio decreasing toward 0 but above the decision level at r_min";
  } else {
    res.verdict = Verdict::Fail;
    res.witness = radii.front() * dirs.front();
    res.note = "|v(z)|/|z| does not decay near the origin";
  }
  return res;
}

// Growth-exponent sanity: sup over the top sampled decade of
// |v(z)| / (1 + |z|^{e}) must not keep climbing.
CheckResult check_growth(const char* name, const VecFn& v, double e, int dim,
                         const SampleScheme& scheme, double odd_tol = 1e-10) {
  CheckResult res;
  res.name = name;
  auto radii = logspace(scheme.r_min, scheme.r_max, scheme.n_radii);
  auto dirs = sample_directions(dim, scheme.n_dirs, scheme.seed);
  // Oddness first: a sign violation is a hard fail.
  for (const Vec& d : dirs) {
    for (double r : {scheme.r_min, 1.0, scheme.r_max}) {
      Vec z = r * d;
      double dev = (v(z) + v(-z)).norm();
      if (dev > odd_tol * (1.0 + v(z).norm())) {
        res.verdict = Verdict::Fail;
        res.witness = z;
        res.note = "field is not odd";
        return res;
      }
    }
  }
  std::vector<double> ratio(radii.size(), 0.0);
  for (std::size_t i = 0; i < radii.size(); ++i)
    for (const Vec& d : dirs)
      ratio[i] = std::max(ratio[i], v(radii[i] * d).norm() /
                                        (1.0 + std::pow(radii[i], e)));
  res.fitted = *std::max_element(ratio.begin(), ratio.end());
  double last = ratio.back();
  double decade_ago = ratio[radii.size() - 1 - radii.size() / 6];
  res.margin = 1.02 * decade_ago - last;
  if (last <= 1.02 * decade_ago + 1e-300) {
    res.verdict = Verdict::Pass;
  } else {
    res.verdict = Verdict::Inconclusive;
    res.note = "growth ratio still climbing at r_max; exponent may exceed the declared one";
  }
  return res;
}

}  // namespace

std::vector<CheckResult> check_F1_F2(const NonlinearitySpec& nl, const SampleScheme& scheme) {
  std::vector<CheckResult> out;
  out.push_back(check_growth("F1", nl.f, nl.p - 1.0, nl.dim, scheme));
  out.push_back(check_o_small("F2", nl.f, nl.dim, scheme));
  return out;
}

std::vector<CheckResult> check_F3_F4_F5(const NonlinearitySpec& nl, const SampleScheme& scheme) {
  std::vector<CheckResult> out;
  auto radii = logspace(scheme.r_min, scheme.r_max, scheme.n_radii);
  auto dirs = sample_directions(nl.dim, scheme.n_dirs, scheme.seed);

  // (F3): F(Rd)/R^q increasing and above threshold along every direction,
  // and F >= 0 everywhere sampled.
  {
    CheckResult res;
    res.name = "F3";
    res.verdict = Verdict::Pass;
    res.fitted = kInf;
    const std::size_t top = radii.size() - radii.size() / 6;  // top sampled decade
    for (const Vec& d : dirs) {
      double prev = -kInf;
      bool monotone = true;
      double top_start = 0.0, last = 0.0;
      for (std::size_t i = 0; i < radii.size(); ++i) {
        Vec z = radii[i] * d;
        double F = nl.F(z);
        if (F < -1e-14 * (1.0 + std::abs(F))) {
          res.verdict = Verdict::Fail;
          res.witness = z;
          res.note = "F takes a negative value";
          break;
        }
        double v = F / std::pow(radii[i], nl.q);
        if (i >= top) {
          if (i == top) top_start = v;
          if (v < prev - kMonotoneSlack * (1.0 + std::abs(prev))) monotone = false;
          prev = v;
        }
        last = v;
      }
      if (res.verdict == Verdict::Fail) break;
      res.fitted = std::min(res.fitted, last);
      if (last < kF3Threshold || !monotone) {
        // A ratio still rising at r_max is a truncated limit; flat or
        // falling means the superquadratic growth is genuinely absent.
        bool rising = monotone && last > top_start * (1.0 + 1e-9) + 1e-300;
        res.verdict = rising ? Verdict::Inconclusive : Verdict::Fail;
        res.witness = radii.back() * d;
        res.note = rising ? "F/|z|^q has not crossed the decision threshold at r_max"
                          : "F/|z|^q not growing at large radii";
        if (res.verdict == Verdict::Fail) break;
      }
    }
    res.margin = res.fitted - kF3Threshold;
    out.push_back(res);
  }

  // (F4): zeta -> f(zeta z).z / zeta^{q-1} nondecreasing per direction.
  {
    CheckResult res;
    res.name = "F4";
    res.verdict = Verdict::Pass;
    auto zetas = logspace(1e-2, 1e2, 60);
    double worst = kInf;
    for (const Vec& d : dirs) {
      double prev = -kInf;
      for (double zeta : zetas) {
        double v = nl.f(zeta * d).dot(d) / std::pow(zeta, nl.q - 1.0);
        double slack = kMonotoneSlack * (1.0 + std::abs(prev));
        worst = std::min(worst, v - prev);
        if (v < prev - slack) {
          res.verdict = Verdict::Fail;
          res.witness = zeta * d;
          res.note = "ray monotonicity violated";
          break;
        }
        prev = v;
      }
      if (res.verdict == Verdict::Fail) break;
    }
    res.margin = worst;
    out.push_back(res);
  }

  // (F5): fitted implicit constant min |f(z).z| / |z|^p over |z| >= rho.
  {
    CheckResult res;
    res.name = "F5";
    double c5 = kInf;
    Vec worst_z;
    for (const Vec& d : dirs) {
      for (double r : radii) {
        if (r < nl.rho) continue;
        Vec z = r * d;
        double v = std::abs(nl.f(z).dot(z)) / std::pow(r, nl.p);
        if (v < c5) {
          c5 = v;
          worst_z = z;
        }
      }
    }
    if (!std::isfinite(c5)) {
      res.verdict = Verdict::Inconclusive;
      res.note = "no samples beyond rho";
    } else {
      res.fitted = c5;
      res.margin = c5;
      if (c5 > 1e-12) {
        res.verdict = Verdict::Pass;
      } else {
        res.verdict = Verdict::Fail;
        res.witness = worst_z;
        res.note = "|f(z).z| / |z|^p collapses beyond rho";
      }
    }
    out.push_back(res);
  }
  return out;
}

std::vector<CheckResult> check_G_and_FG(const NonlinearitySpec& nl, const SampleScheme& scheme) {
  std::vector<CheckResult> out;
  auto radii = logspace(scheme.r_min, scheme.r_max, scheme.n_radii);
  auto dirs = sample_directions(nl.dim, scheme.n_dirs, scheme.seed);

  out.push_back(check_growth("G1", nl.g, nl.q - 1.0, nl.dim, scheme));
  out.push_back(check_o_small("G2", nl.g, nl.dim, scheme));

  // (G3): sign of g.z plus nonincreasing ray quotient.
  {
    CheckResult res;
    res.name = "G3";
    res.verdict = Verdict::Pass;
    for (const Vec& d : dirs) {
      for (double r : radii) {
        Vec z = r * d;
        double gz = nl.g(z).dot(z);
        if (gz < -1e-14 * (1.0 + std::abs(gz))) {
          res.verdict = Verdict::Fail;
          res.witness = z;
          res.note = "g(z).z < 0";
          break;
        }
      }
      if (res.verdict == Verdict::Fail) break;
    }
    if (res.verdict == Verdict::Pass) {
      auto zetas = logspace(1e-2, 1e2, 60);
      double worst = kInf;
      for (const Vec& d : dirs) {
        double prev = kInf;
        for (double zeta : zetas) {
          double v = nl.g(zeta * d).dot(d) / std::pow(zeta, nl.q - 1.0);
          double slack = kMonotoneSlack * (1.0 + std::abs(prev));
          if (prev < kInf) worst = std::min(worst, prev - v);
          if (prev < kInf && v > prev + slack) {
            res.verdict = Verdict::Fail;
            res.witness = zeta * d;
            res.note = "ray quotient of g not nonincreasing";
            break;
          }
          prev = v;
        }
        if (res.verdict == Verdict::Fail) break;
      }
      res.margin = worst;
    }
    out.push_back(res);
  }

  // (FG): c = min |f(z).w| / (|g(z).w| |z|^{p-q}) over |z| >= rho and random w.
  {
    CheckResult res;
    res.name = "FG";
    std::mt19937_64 rng(scheme.seed + 13);
    double c = kInf;
    Vec worst_z;
    int pairs = 0;
    for (const Vec& d : dirs) {
      for (double r : radii) {
        if (r < nl.rho) continue;
        Vec z = r * d;
        Vec fz = nl.f(z);
        Vec gz = nl.g(z);
        for (int t = 0; t < 4; ++t) {
          Vec w = unit_direction(rng, nl.dim);
          double gw = std::abs(gz.dot(w));
          if (gw < 1e-14) continue;  // degenerate pairing, skipped
          double v = std::abs(fz.dot(w)) / (gw * std::pow(r, nl.p - nl.q));
          ++pairs;
          if (v < c) {
            c = v;
            worst_z = z;
          }
        }
      }
    }
    if (pairs == 0) {
      res.verdict = Verdict::Inconclusive;
      res.note = "no nondegenerate sample pairs";
    } else {
      res.fitted = c;
      res.margin = c;
      if (c > 1e-12) {
        res.verdict = Verdict::Pass;
      } else {
        res.verdict = Verdict::Fail;
        res.witness = worst_z;
        res.note = "|f(z).w| does not dominate |g(z).w| |z|^{p-q}";
      }
    }
    out.push_back(res);
  }
  return out;
}

std::vector<CheckResult> check_AR(const NonlinearitySpec& nl, const SampleScheme& scheme) {
  std::vector<CheckResult> out;
  auto radii = logspace(scheme.r_min, scheme.r_max, scheme.n_radii);
  auto dirs = sample_directions(nl.dim, scheme.n_dirs, scheme.seed);
  const double rel = 1e-12;

  CheckResult arf;
  arf.name = "AR_f";
  arf.verdict = Verdict::Pass;
  CheckResult arg;
  arg.name = "AR_g";
  arg.verdict = Verdict::Pass;
  double worst_f = kInf, worst_g = kInf;
  for (const Vec& d : dirs) {
    for (double r : radii) {
      Vec z = r * d;
      double qF = nl.q * nl.F(z);
      double fz = nl.f(z).dot(z);
      double scale_f = std::max({1e-300, std::abs(qF), std::abs(fz)});
      worst_f = std::min(worst_f, std::min(qF, fz - qF) / scale_f);
      if (qF < -rel * scale_f || fz < qF - rel * scale_f) {
        arf.verdict = Verdict::Fail;
        arf.witness = z;
        arf.note = "0 <= qF <= f.z violated";
      }
      double gz = nl.g(z).dot(z);
      double qG = nl.q * nl.G(z);
      double scale_g = std::max({1e-300, std::abs(qG), std::abs(gz)});
      worst_g = std::min(worst_g, std::min(gz, qG - gz) / scale_g);
      if (gz < -rel * scale_g || gz > qG + rel * scale_g) {
        arg.verdict = Verdict::Fail;
        arg.witness = z;
        arg.note = "0 <= g.z <= qG violated";
      }
    }
    if (arf.verdict == Verdict::Fail && arg.verdict == Verdict::Fail) break;
  }
  arf.margin = worst_f;
  arg.margin = worst_g;
  out.push_back(arf);
  out.push_back(arg);
  return out;
}

double ratio_sup_at(const NonlinearitySpec& nl, double rho, const std::vector<Vec>& dirs) {
  double sup = -kInf;
  for (const Vec& d : dirs) {
    Vec w = rho * d;
    double fw = nl.f(w).dot(w);
    double gw = nl.g(w).dot(w);
    if (fw <= 1e-300) return kInf;  // (F5) fails here; ratio undefined
    sup = std::max(sup, gw / fw);
  }
  return sup;
}

double lambda_threshold_step2(const GrowthConstants& consts, const WeightSpec& weight,
                              double kappa, double q) {
  double k = std::max(kappa, 1.0);
  double cg = consts.C_G_eps > 0.0 ? consts.C_G_eps : consts.C_eps;
  if (cg <= 0.0) return 0.0;
  return (weight.gamma0 / weight.gamma_sup) * (consts.C_eps / cg) *
         std::pow(2.0 * k, -q);
}

BoundednessBudget boundedness_budget(const NonlinearitySpec& nl,
                                     const GrowthConstants& consts,
                                     const WeightSpec& weight, double mu0,
                                     double kappa, double gamma_proof,
                                     double C_heuristic, double rho_max,
                                     double lambda, const SampleScheme& scheme) {
  if (rho_max <= 0.0) throw std::invalid_argument("boundedness_budget: rho_max > 0 required");
  BoundednessBudget b;
  b.gamma_proof = gamma_proof;
  b.C_heuristic = C_heuristic;
  b.rho_input = rho_max;
  b.lambda_input = lambda;
  double k = std::max(kappa, 1.0);
  b.Lambda0 = mu0 * mu0 / (2.0 * gamma_proof * k * weight.gamma_sup);

  auto dirs = sample_directions(nl.dim, scheme.n_dirs, scheme.seed);

  auto eval_at = [&](double rho, BoundednessBudget& out) -> bool {
    // sup_{|v| < rho} |Phi(v)| / |v|^2 by radial sampling.
    double sup_phi = 0.0;
    auto radii = logspace(rho * 1e-6, rho * (1.0 - 1e-12), 80);
    for (const Vec& d : dirs) {
      for (double r : radii) {
        Vec v = r * d;
        double phi = 0.5 * nl.f(v).dot(v) - nl.F(v) +
                     lambda * (nl.G(v) - 0.5 * nl.g(v).dot(v));
        sup_phi = std::max(sup_phi, std::abs(phi) / (r * r));
      }
    }
    double rs = ratio_sup_at(nl, rho, dirs);
    double E = 1.0 - lambda * rs;
    double rho_pq = std::pow(rho, nl.p - nl.q);
    double D = (1.0 + lambda / rho_pq) * 2.0 * k * weight.gamma_sup;

    std::vector<BudgetCondition> conds;
    conds.push_back({"phi_small: 2 C ||Gamma|| sup|Phi|/|v|^2 <= Lambda0/16",
                     2.0 * C_heuristic * weight.gamma_sup * sup_phi, b.Lambda0 / 16.0, false});
    conds.push_back({"f_growth: (C_f+1) rho^{p-2} <= Lambda0/8",
                     (consts.C_f_eps + 1.0) * std::pow(rho, nl.p - 2.0), b.Lambda0 / 8.0, false});
    conds.push_back({"g_growth: (C_g+1) rho^{q-2} <= Lambda0/8",
                     (consts.C_g_eps + 1.0) * std::pow(rho, nl.q - 2.0), b.Lambda0 / 8.0, false});
    conds.push_back({"lambda_small: E >= 1/2 and lambda <= rho^{p-q}",
                     std::max(0.5 - E, lambda - rho_pq), 0.0, false});
    for (auto& c : conds) c.ok = c.lhs <= c.rhs;

    double Lambda = kInf;
    if (E > 0.0) {
      Lambda = consts.epsilon * (1.0 + lambda) +
               consts.C_f_eps * std::pow(rho, nl.p - 2.0) +
               lambda * consts.C_g_eps * std::pow(rho, nl.q - 2.0) +
               (1.0 + lambda / rho_pq) *
                   (std::pow(rho, nl.p - 2.0) +
                    C_heuristic * weight.gamma_sup * sup_phi / E);
    }

    out.sup_phi = sup_phi;
    out.ratio_sup = rs;
    out.E = E;
    out.D = D;
    out.Lambda = Lambda;
    out.conditions = conds;
    bool all = true;
    for (const auto& c : conds) all = all && c.ok;
    return all && Lambda < b.Lambda0;
  };

  auto rho_grid = logspace(rho_max * 1e-3, rho_max, 60);
  std::sort(rho_grid.begin(), rho_grid.end(), std::greater<double>());
  bool any_E_positive = false;
  for (double rho : rho_grid) {
    BoundednessBudget trial = b;
    bool ok = eval_at(rho, trial);
    if (trial.E > 0.0) any_E_positive = true;
    if (ok) {
      b = trial;
      b.rho_selected = rho;
      b.accepted = true;
      double rho_pq = std::pow(rho, nl.p - nl.q);
      b.lambda_selected = std::isfinite(trial.ratio_sup) && trial.ratio_sup > 0.0
                              ? std::min(0.5 / trial.ratio_sup, rho_pq)
                              : rho_pq;
      break;
    }
  }
  if (!b.accepted) {
    // Report diagnostics at the input radius.
    eval_at(rho_max, b);
    b.rho_selected = 0.0;
    b.lambda_selected = 0.0;
    b.note = any_E_positive
                 ? "no admissible rho at this lambda"
                 : "rejected: E(lambda, rho) <= 0 at every sampled rho (witness ratio recorded)";
  } else {
    b.note = "final bound Lambda <= Lambda0/2 holds at rho_selected";
  }
  return b;
}

HypothesisReport audit(const ProblemSpec& problem, const AuditConfig& config) {
  HypothesisReport rep;
  rep.lambda = problem.lambda;
  rep.hyperbolicity = check_hyperbolic(problem.A, config.tol_hyp);
  if (!rep.hyperbolicity.pass) {
    rep.overall_pass = false;
    rep.fail_reason = "hyperbolicity (A) fails: sigma(JA) touches the imaginary axis";
    return rep;
  }

  const auto& nl = problem.nonlinearity;
  SpectralGrid grid = make_grid(config.grid_T, config.grid_M, problem.dim());
  auto symbol = assemble_symbol(grid, problem.A, config.tol_hyp);
  FourierTransform ft(grid);
  rep.mu0 = symbol.mu0;
  rep.kappa = estimate_kappa(symbol, ft, nl.q, config.kappa_samples, config.kappa_seed);

  // Step-2 threshold with eps = mu0^2 / (4 (Gamma0 + ||Gamma||_inf)).
  double eps_step2 = rep.mu0 * rep.mu0 /
                     (4.0 * (problem.weight.gamma0 + problem.weight.gamma_sup));
  rep.consts_step2 = fit_growth_constants(nl, eps_step2, config.scheme);
  rep.lambda_threshold =
      lambda_threshold_step2(rep.consts_step2, problem.weight, rep.kappa.kappa, nl.q);

  auto dirs = sample_directions(nl.dim, config.scheme.n_dirs, config.scheme.seed);
  rep.ratio_sup = ratio_sup_at(nl, nl.rho, dirs);
  rep.E = 1.0 - problem.lambda * rep.ratio_sup;

  auto push = [&rep](std::vector<CheckResult> v) {
    for (auto& c : v) rep.checks.push_back(std::move(c));
  };
  push(check_F1_F2(nl, config.scheme));
  push(check_F3_F4_F5(nl, config.scheme));
  push(check_G_and_FG(nl, config.scheme));
  push(check_AR(nl, config.scheme));

  double lambda0 = rep.mu0 * rep.mu0 /
                   (2.0 * config.gamma_proof * std::max(rep.kappa.kappa, 1.0) *
                    problem.weight.gamma_sup);
  rep.consts_budget = fit_growth_constants(nl, lambda0 / 16.0, config.scheme);
  rep.budget = boundedness_budget(nl, rep.consts_budget, problem.weight, rep.mu0,
                                  rep.kappa.kappa, config.gamma_proof,
                                  config.C_heuristic, nl.rho, problem.lambda,
                                  config.scheme);

  bool checks_pass = true;
  std::string first_fail;
  for (const auto& c : rep.checks) {
    if (c.verdict != Verdict::Pass) {
      checks_pass = false;
      if (first_fail.empty()) first_fail = c.name + " " + verdict_name(c.verdict);
    }
  }
  bool lambda_ok = problem.lambda < rep.lambda_threshold;
  rep.overall_pass = checks_pass && lambda_ok && rep.budget.accepted;
  if (!rep.overall_pass) {
    if (!checks_pass)
      rep.fail_reason = "assumption check failed: " + first_fail;
    else if (!lambda_ok)
      rep.fail_reason = "lambda above the Step-2 admissibility threshold";
    else
      rep.fail_reason = "boundedness budget rejected";
  }
  return rep;
}

}  // namespace hamlink
