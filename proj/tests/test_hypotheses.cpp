#include <doctest.h>

#include <cmath>

#include "hamlink/hypotheses.hpp"
#include "support.hpp"

using namespace hamlink;

namespace {

const CheckResult& find_check(const std::vector<CheckResult>& checks,
                              const std::string& name) {
  for (const auto& c : checks)
    if (c.name == name) return c;
  REQUIRE(false);
  return checks.front();
}

NonlinearitySpec flipped_g_pair() {
  auto nl = builtin_power_pair(4.0, 3.0, 2);
  auto G = nl.G;
  auto g = nl.g;
  nl.G = [G](const Vec& z) { return -G(z); };
  nl.g = [g](const Vec& z) { return Vec(-g(z)); };
  return nl;
}

}  // namespace

TEST_CASE("growth constants for the power pair") {
  auto nl = builtin_power_pair(4.0, 3.0, 2);
  SampleScheme scheme;

  SUBCASE("C_f is 1 for any small epsilon") {
    for (double eps : {0.01, 0.1, 0.5}) {
      auto c = fit_growth_constants(nl, eps, scheme);
      // sampled sup of (|z|^{p-1} - eps|z|)/|z|^{p-1} is 1 - eps/r_max^2
      CHECK(c.C_f_eps == doctest::Approx(1.0).epsilon(1e-5));
      // for g the deficit is eps/r_max, still within sampling resolution
      CHECK(c.C_g_eps == doctest::Approx(1.0).epsilon(1e-3));
    }
  }

  SUBCASE("C_eps matches a one-dimensional scan oracle at eps = 0.1") {
    auto radii = logspace(1e-3, 1e3, 200);
    auto dirs = sample_directions(2, 16, 7);
    auto c = fit_growth_constants(nl, 0.1, radii, dirs);
    // oracle: minimize (r^4/4 + 0.1 r^2) / r^3 over the same radii
    double oracle = std::numeric_limits<double>::infinity();
    for (double r : radii)
      oracle = std::min(oracle, (0.25 * std::pow(r, 4) + 0.1 * r * r) / std::pow(r, 3));
    CHECK(c.C_eps == doctest::Approx(oracle).epsilon(1e-12));
    // analytic optimum sqrt(0.1) up to grid resolution
    CHECK(c.C_eps == doctest::Approx(std::sqrt(0.1)).epsilon(1e-3));
  }

  SUBCASE("clamp C_eps <= C_G_eps") {
    for (double eps : {0.02, 0.125, 0.7}) {
      auto c = fit_growth_constants(nl, eps, scheme);
      CHECK(c.C_eps <= c.C_G_eps * (1.0 + 1e-14));
      CHECK(c.C_eps > 0.0);
    }
  }

  SUBCASE("empty sample sets rejected") {
    CHECK_THROWS_AS(fit_growth_constants(nl, 0.1, std::vector<double>{},
                                         sample_directions(2, 4, 1)),
                    std::invalid_argument);
  }
}

TEST_CASE("F-checks on the power pair all pass") {
  auto nl = builtin_power_pair(4.0, 3.0, 2);
  SampleScheme scheme;
  auto f12 = check_F1_F2(nl, scheme);
  CHECK(find_check(f12, "F1").verdict == Verdict::Pass);
  CHECK(find_check(f12, "F2").verdict == Verdict::Pass);
  auto f345 = check_F3_F4_F5(nl, scheme);
  CHECK(find_check(f345, "F3").verdict == Verdict::Pass);
  CHECK(find_check(f345, "F4").verdict == Verdict::Pass);
  const auto& f5 = find_check(f345, "F5");
  CHECK(f5.verdict == Verdict::Pass);
  CHECK(f5.fitted == doctest::Approx(1.0).epsilon(1e-9));  // |f.z|/|z|^p = 1
}

TEST_CASE("F3 fails for the first-component quartic along a flat direction") {
  auto nl = builtin_first_quartic(2);
  SampleScheme scheme;
  auto f345 = check_F3_F4_F5(nl, scheme);
  const auto& f3 = find_check(f345, "F3");
  CHECK(f3.verdict == Verdict::Fail);
  REQUIRE(f3.witness.size() == 2);
  // the (0, 1) ray carries F = 0
  CHECK(std::abs(f3.witness(0)) <= 1e-9 * std::abs(f3.witness(1)));
}

TEST_CASE("G and FG checks on the power pair") {
  auto nl = builtin_power_pair(4.0, 3.0, 2);
  SampleScheme scheme;
  auto gs = check_G_and_FG(nl, scheme);
  CHECK(find_check(gs, "G1").verdict == Verdict::Pass);
  CHECK(find_check(gs, "G2").verdict == Verdict::Pass);
  CHECK(find_check(gs, "G3").verdict == Verdict::Pass);
  const auto& fg = find_check(gs, "FG");
  CHECK(fg.verdict == Verdict::Pass);
  // f.w and g.w share the factor z.w, so the fitted ratio is exactly 1
  CHECK(fg.fitted == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sign-flipped g fails G3 with a witness") {
  auto gs = check_G_and_FG(flipped_g_pair(), SampleScheme{});
  const auto& g3 = find_check(gs, "G3");
  CHECK(g3.verdict == Verdict::Fail);
  REQUIRE(g3.witness.size() == 2);
  auto nl = flipped_g_pair();
  CHECK(nl.g(g3.witness).dot(g3.witness) < 0.0);
}

TEST_CASE("Ambrosetti-Rabinowitz chains for the power pair") {
  auto nl = builtin_power_pair(4.0, 3.0, 2);
  SampleScheme scheme;  // 200 radii x (64 + 4) directions > 1e4 samples
  auto ar = check_AR(nl, scheme);
  CHECK(find_check(ar, "AR_f").verdict == Verdict::Pass);
  CHECK(find_check(ar, "AR_g").verdict == Verdict::Pass);
  // qF = (3/4)|z|^4 <= |z|^4 strictly; g.z = |z|^3 = qG is the equality case
  CHECK(find_check(ar, "AR_f").margin > 0.0);
  CHECK(find_check(ar, "AR_g").margin >= -1e-12);
}

TEST_CASE("ratio sup for the power pair is rho^{q-p}") {
  auto nl = builtin_power_pair(4.0, 3.0, 2);
  auto dirs = sample_directions(2, 32, 5);
  for (double rho : {0.1, 0.5, 1.0, 2.0}) {
    CHECK(ratio_sup_at(nl, rho, dirs) ==
          doctest::Approx(std::pow(rho, -1.0)).epsilon(1e-10));
  }
}

TEST_CASE("Step-2 lambda threshold formula") {
  WeightSpec w = constant_weight(1.0);
  GrowthConstants c;
  c.epsilon = 0.125;
  c.C_eps = 0.35;
  c.C_G_eps = 0.35;

  SUBCASE("equal constants, kappa 1, q 3: exactly 1/8") {
    CHECK(lambda_threshold_step2(c, w, 1.0, 3.0) == doctest::Approx(0.125).epsilon(1e-14));
  }

  SUBCASE("threshold never exceeds 1") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int i = 0; i < 50; ++i) {
      GrowthConstants cc;
      cc.C_G_eps = u(rng);
      cc.C_eps = std::min(u(rng), cc.C_G_eps);  // the clamp invariant
      WeightSpec ww;
      ww.gamma0 = u(rng);
      ww.gamma_sup = ww.gamma0 + u(rng);
      double kappa = 1.0 + u(rng);
      CHECK(lambda_threshold_step2(cc, ww, kappa, 2.0 + u(rng)) <= 1.0 + 1e-12);
    }
  }

  SUBCASE("doubling kappa scales by 2^{-q}") {
    double t1 = lambda_threshold_step2(c, w, 1.0, 3.0);
    double t2 = lambda_threshold_step2(c, w, 2.0, 3.0);
    CHECK(t2 == doctest::Approx(t1 / 8.0).epsilon(1e-12));
  }

  SUBCASE("monotone: nonincreasing in kappa, nondecreasing in Gamma0") {
    double prev = std::numeric_limits<double>::infinity();
    for (double kappa : linspace(1.0, 4.0, 13)) {
      double t = lambda_threshold_step2(c, w, kappa, 3.0);
      CHECK(t <= prev + 1e-15);
      prev = t;
    }
    prev = 0.0;
    for (double g0 : linspace(0.1, 1.0, 13)) {
      WeightSpec ww;
      ww.gamma0 = g0;
      ww.gamma_sup = 1.0;
      double t = lambda_threshold_step2(c, ww, 1.5, 3.0);
      CHECK(t >= prev - 1e-15);
      prev = t;
    }
  }
}

TEST_CASE("boundedness budget on the power pair") {
  auto nl = builtin_power_pair(4.0, 3.0, 2);
  WeightSpec w = constant_weight(1.0);
  SampleScheme scheme;
  scheme.n_dirs = 16;
  double mu0 = 1.0, kappa = 1.0;
  double lambda0 = mu0 * mu0 / (2.0 * kappa * w.gamma_sup);
  auto consts = fit_growth_constants(nl, lambda0 / 16.0, scheme);

  SUBCASE("lambda = 0 accepts with E = 1") {
    auto b = boundedness_budget(nl, consts, w, mu0, kappa, 1.0, 1.0, 1.0, 0.0, scheme);
    CHECK(b.accepted);
    CHECK(b.E == doctest::Approx(1.0));
    CHECK(b.rho_selected > 0.0);
    CHECK(b.Lambda < b.Lambda0);
    CHECK(b.Lambda <= 0.5 * b.Lambda0 + 1e-12);
  }

  SUBCASE("small positive lambda accepts; outsized lambda is rejected") {
    auto good = boundedness_budget(nl, consts, w, mu0, kappa, 1.0, 1.0, 1.0, 0.005, scheme);
    CHECK(good.accepted);
    CHECK(good.E >= 0.5);
    CHECK(good.lambda_selected > 0.0);
    auto bad = boundedness_budget(nl, consts, w, mu0, kappa, 1.0, 1.0, 1.0, 10.0, scheme);
    CHECK_FALSE(bad.accepted);
    CHECK(bad.note.find("E(") != std::string::npos);  // E <= 0 everywhere
  }

  SUBCASE("E >= 1/2 iff lambda <= rho^{p-q}/2 on a grid") {
    auto dirs = sample_directions(2, 16, scheme.seed);
    for (double rho : {0.05, 0.1, 0.4, 1.0}) {
      double rs = ratio_sup_at(nl, rho, dirs);
      for (double lam : {0.0, 0.01, 0.05, 0.2, 0.6}) {
        double E = 1.0 - lam * rs;
        bool lhs = E >= 0.5 - 1e-14;
        bool rhs = lam <= 0.5 * rho + 1e-14;  // rho^{p-q} = rho here
        CHECK(lhs == rhs);
      }
    }
  }

  SUBCASE("sup |Phi|/|v|^2 vanishes with rho") {
    // Phi(v) = |v|^4/4 at lambda = 0, so sup over |v| < rho of |Phi|/|v|^2
    // is rho^2/4; the budget reports it at its selected radius.
    for (double rho_max : {0.5, 0.1, 0.01}) {
      auto b = boundedness_budget(nl, consts, w, mu0, kappa, 1.0, 1.0, rho_max, 0.0, scheme);
      REQUIRE(b.accepted);
      CHECK(b.rho_selected <= rho_max * (1.0 + 1e-12));
      CHECK(b.sup_phi ==
            doctest::Approx(0.25 * b.rho_selected * b.rho_selected).epsilon(1e-6));
      CHECK(b.sup_phi <= 0.25 * rho_max * rho_max * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("audit passes on an admissible power-pair problem") {
  ProblemSpec problem = testing::power_problem(0.005);
  AuditConfig config;
  config.grid_M = 128;
  HypothesisReport rep = audit(problem, config);
  CHECK(rep.hyperbolicity.pass);
  CHECK(rep.mu0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.kappa.kappa >= 1.0);
  for (const auto& c : rep.checks) {
    INFO(c.name, " ", verdict_name(c.verdict), " ", c.note);
    CHECK(c.verdict == Verdict::Pass);
  }
  CHECK(problem.lambda < rep.lambda_threshold);
  CHECK(rep.budget.accepted);
  CHECK(rep.overall_pass);
}

TEST_CASE("audit verdicts are stable under doubled sample counts") {
  ProblemSpec problem = testing::power_problem(0.005);
  AuditConfig base;
  base.grid_M = 64;
  AuditConfig dense = base;
  dense.scheme.n_radii *= 2;
  dense.scheme.n_dirs *= 2;
  auto r1 = audit(problem, base);
  auto r2 = audit(problem, dense);
  REQUIRE(r1.checks.size() == r2.checks.size());
  for (std::size_t i = 0; i < r1.checks.size(); ++i)
    CHECK(r1.checks[i].verdict == r2.checks[i].verdict);
  CHECK(r1.overall_pass == r2.overall_pass);
}

TEST_CASE("audit rejects the negative controls") {
  SUBCASE("A = I fails hyperbolicity with witness +-i") {
    ProblemSpec p = make_problem(Mat::Identity(2, 2), builtin_power_pair(4, 3, 2),
                                 constant_weight(1.0), 0.0);
    AuditConfig config;
    auto rep = audit(p, config);
    CHECK_FALSE(rep.overall_pass);
    CHECK_FALSE(rep.hyperbolicity.pass);
    CHECK(rep.fail_reason.find("hyperbolicity") != std::string::npos);
  }
  SUBCASE("lambda above the Step-2 threshold is rejected by name") {
    ProblemSpec p = testing::power_problem(0.5);
    AuditConfig config;
    config.grid_M = 64;
    auto rep = audit(p, config);
    CHECK_FALSE(rep.overall_pass);
    CHECK(p.lambda >= rep.lambda_threshold);
    CHECK(rep.fail_reason.find("lambda") != std::string::npos);
  }
  SUBCASE("sign-flipped g fails G3 inside the audit") {
    ProblemSpec p = make_problem(testing::benchmark_matrix(), flipped_g_pair(),
                                 constant_weight(1.0), 0.005);
    AuditConfig config;
    config.grid_M = 64;
    auto rep = audit(p, config);
    CHECK_FALSE(rep.overall_pass);
    bool g3_failed = false;
    for (const auto& c : rep.checks)
      if (c.name == "G3" && c.verdict == Verdict::Fail && c.witness.size() == 2)
        g3_failed = true;
    CHECK(g3_failed);
  }
}
