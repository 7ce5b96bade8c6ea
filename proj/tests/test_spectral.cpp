#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "support.hpp"

using namespace hamlink;

TEST_CASE("grid construction") {
  SUBCASE("T=1, M=1: frequencies -pi, 0, pi") {
    auto g = make_grid(1, 1, 2);
    CHECK(g.n() == 3);
    CHECK(g.freq(0) == doctest::Approx(-M_PI));
    CHECK(g.freq(1) == 0.0);
    CHECK(g.freq(2) == doctest::Approx(M_PI));
    CHECK(g.point(0) == doctest::Approx(-1.0));
  }
  SUBCASE("T=20, M=512: 1025 modes, spacing pi/20") {
    auto g = make_grid(20, 512, 2);
    CHECK(g.n() == 1025);
    CHECK(g.freq(g.M + 1) - g.freq(g.M) == doctest::Approx(M_PI / 20.0));
  }
  SUBCASE("nonpositive sizes rejected") {
    CHECK_THROWS_AS(make_grid(0, 8, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(-3, 8, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(4, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(4, 8, 3), std::invalid_argument);
  }
}

TEST_CASE("transform round-trip and Parseval") {
  auto g = make_grid(8, 48, 2);
  FourierTransform ft(g);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    CMat c = random_coeffs(g, rng, trial % 2 == 1);
    Mat vals = ft.to_values(c);
    CMat back = ft.to_coeffs(vals);
    CHECK((back - c).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + c.cwiseAbs().maxCoeff()));

    // Collocation L2 norm vs coefficient-space l2 norm.
    double coeff_norm = std::sqrt(g.window() * c.cwiseAbs2().sum());
    double colloc = 0.0;
    for (int j = 0; j < g.n(); ++j) colloc += vals.col(j).squaredNorm();
    colloc = std::sqrt(colloc * g.spacing());
    CHECK(colloc == doctest::Approx(coeff_norm).epsilon(1e-10));
  }
}

TEST_CASE("symbol eigenvalues match the closed form for A = diag(-1,1)") {
  auto g = make_grid(4, 16, 2);
  auto sym = assemble_symbol(g, testing::benchmark_matrix());
  // mode omega = 0 has eigenvalues {-1, +1}
  const ModeData& zero = sym.modes[g.M];
  CHECK(zero.eigs(0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(zero.eigs(1) == doctest::Approx(1.0).epsilon(1e-12));
  // every mode: +-sqrt(1 + omega^2)
  for (int m = 0; m < g.n(); ++m) {
    double omega = g.freq(m);
    double lam = std::sqrt(1.0 + omega * omega);
    CHECK(sym.modes[m].eigs(0) == doctest::Approx(-lam).epsilon(1e-12));
    CHECK(sym.modes[m].eigs(1) == doctest::Approx(lam).epsilon(1e-12));
  }
}

TEST_CASE("symbol at omega = sqrt(3) has eigenvalues +-2") {
  // Direct 2x2 construction, independent of any grid.
  double omega = std::sqrt(3.0);
  CMat M = -testing::benchmark_matrix().cast<Complex>() +
           Complex(0.0, -omega) * symplectic_matrix(2).cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMat> es(M);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(es.eigenvalues()(1) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("symbol invariants: hermiticity, projector completeness, conjugation") {
  auto g = make_grid(6, 24, 2);
  auto sym = assemble_symbol(g, testing::benchmark_matrix());
  for (int m = 0; m < g.n(); ++m) {
    const ModeData& md = sym.modes[m];
    CHECK((md.symbol - md.symbol.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    CMat I = CMat::Identity(2, 2);
    CHECK(((md.Pplus + md.Pminus) - I).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((md.Pplus * md.Pminus).cwiseAbs().maxCoeff() <= 1e-12);
    // M(-omega) = conj(M(omega)), exact by construction
    const ModeData& mirror = sym.modes[g.n() - 1 - m];
    CHECK((mirror.symbol - md.symbol.conjugate()).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((mirror.Pplus - md.Pplus.conjugate()).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("exactly singular symbol raises a hyperbolicity error") {
  // A = (pi/4) I has sigma(JA) = +-(pi/4) i, which the T=4 grid hits at k=1.
  Mat A = (M_PI / 4.0) * Mat::Identity(2, 2);
  auto g = make_grid(4, 8, 2);
  CHECK_THROWS_AS(assemble_symbol(g, A), HyperbolicityError);
}

TEST_CASE("split: reference cases and the sign of the quadratic form") {
  auto g = make_grid(20, 128, 2);
  auto sym = assemble_symbol(g, testing::benchmark_matrix());

  SUBCASE("zero splits to zero") {
    auto s = zero_state(sym);
    CHECK(norm_plus(s) == 0.0);
    CHECK(norm_minus(s) == 0.0);
  }

  SUBCASE("single positive eigenvector has no minus part") {
    CMat c = CMat::Zero(2, g.n());
    int m = g.M + 3;
    const ModeData& md = sym.modes[m];
    c.col(m) = md.U.col(1);  // positive eigenvector
    c.col(g.n() - 1 - m) = c.col(m).conjugate();
    auto s = split(sym, c);
    CHECK(norm_minus(s) <= 1e-12);
    CHECK(norm_plus(s) > 0.0);
  }

  SUBCASE("Q(z+) > 0 > Q(z-) via the direct quadratic form") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
      auto s = split(sym, random_coeffs(g, rng, i % 2 == 1));
      double qp = quadratic_form_direct(g, testing::benchmark_matrix(), s.plus);
      double qm = quadratic_form_direct(g, testing::benchmark_matrix(), s.minus);
      CHECK(qp > 0.0);
      CHECK(qm < 0.0);
      // and the direct form agrees with the cached subspace norms
      CHECK(qp == doctest::Approx(norm_plus(s) * norm_plus(s)).epsilon(1e-9));
      CHECK(qm == doctest::Approx(-norm_minus(s) * norm_minus(s)).epsilon(1e-9));
    }
  }

  SUBCASE("reality violation is an input error") {
    CMat c = CMat::Zero(2, g.n());
    c(0, g.M + 2) = Complex(1.0, 0.5);  // mirror left at zero
    CHECK_THROWS_AS(split(sym, c), std::invalid_argument);
  }
}

TEST_CASE("re-projection is idempotent") {
  auto g = make_grid(10, 64, 2);
  auto sym = assemble_symbol(g, testing::benchmark_matrix());
  std::mt19937_64 rng(13);
  for (int i = 0; i < 10; ++i) {
    auto s = split(sym, random_coeffs(g, rng, i % 2 == 1));
    auto again_plus = split(sym, s.plus);
    auto again_minus = split(sym, s.minus);
    double scale = 1.0 + s.coeffs.cwiseAbs().maxCoeff();
    CHECK((again_plus.plus - s.plus).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    CHECK(again_plus.minus.cwiseAbs().maxCoeff() <= 1e-12 * scale);
    CHECK((again_minus.minus - s.minus).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    CHECK(again_minus.plus.cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }
}

TEST_CASE("Pythagoras: ||z||^2 = ||z+||^2 + ||z-||^2 on 100 random states") {
  auto g = make_grid(10, 64, 2);
  auto sym = assemble_symbol(g, testing::benchmark_matrix());
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    auto s = split(sym, random_coeffs(g, rng, i % 2 == 1));
    double whole = norm_x_direct(sym, s.coeffs);
    double parts = norm_x(s);
    CHECK(std::abs(whole * whole - parts * parts) <= 1e-10 * whole * whole);
  }
}

TEST_CASE("subspace norm of a unit eigenmode equals |eigenvalue| times weight") {
  auto g = make_grid(4, 8, 2);
  auto sym = assemble_symbol(g, testing::benchmark_matrix());
  // mode 0 eigenvector with eigenvalue +1: ||z||^2 = 2T * 1
  CMat c = CMat::Zero(2, g.n());
  c.col(g.M) = sym.modes[g.M].U.col(1);
  auto s = split(sym, c);
  CHECK(norm_plus(s) * norm_plus(s) == doctest::Approx(g.window()).epsilon(1e-12));

  // eigenvalue magnitude 2: A = diag(2,-3) has M(0) eigenvalues {-2, 3},
  // ascending, so the magnitude-2 eigenvector sits in column 0
  Mat A2(2, 2);
  A2 << 2.0, 0.0, 0.0, -3.0;
  auto sym2 = assemble_symbol(g, A2);
  REQUIRE(sym2.modes[g.M].eigs(0) == doctest::Approx(-2.0).epsilon(1e-12));
  CMat c2 = CMat::Zero(2, g.n());
  c2.col(g.M) = sym2.modes[g.M].U.col(0);
  auto s2 = split(sym2, c2);
  CHECK(norm_minus(s2) * norm_minus(s2) ==
        doctest::Approx(2.0 * g.window()).epsilon(1e-12));
}

TEST_CASE("lq norms of the sech trajectories") {
  auto ctx = testing::benchmark_context(20, 256);
  SUBCASE("zero") {
    CHECK(lq_norm(*ctx.transform, zero_state(*ctx.symbol).coeffs, 2.0) == 0.0);
  }
  SUBCASE("int sech^2 = 2") {
    Mat vals = Mat::Zero(2, ctx.grid.n());
    for (int j = 0; j < ctx.grid.n(); ++j)
      vals(0, j) = 1.0 / std::cosh(ctx.grid.point(j));
    auto s = state_from_values(*ctx.symbol, *ctx.transform, vals);
    double l2 = lq_norm(*ctx.transform, s.coeffs, 2.0);
    CHECK(l2 * l2 == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("int (sqrt(2) sech)^4 = 16/3") {
    Mat vals = Mat::Zero(2, ctx.grid.n());
    for (int j = 0; j < ctx.grid.n(); ++j)
      vals(0, j) = std::sqrt(2.0) / std::cosh(ctx.grid.point(j));
    auto s = state_from_values(*ctx.symbol, *ctx.transform, vals);
    double l4 = lq_norm(*ctx.transform, s.coeffs, 4.0);
    CHECK(std::pow(l4, 4) == doctest::Approx(16.0 / 3.0).epsilon(1e-9));
  }
}

TEST_CASE("grid refinement leaves the norm of a smooth bump unchanged") {
  auto c1 = testing::benchmark_context(20, 128);
  auto c2 = testing::benchmark_context(20, 256);
  auto s1 = testing::bump_state(c1);
  auto s2 = testing::bump_state(c2);
  CHECK(norm_x(s1) == doctest::Approx(norm_x(s2)).epsilon(1e-8));
}

TEST_CASE("mu0 values and the spectral gap inequality") {
  SUBCASE("A = diag(-1,1): mu0 = 1") {
    auto g = make_grid(10, 64, 2);
    auto sym = assemble_symbol(g, testing::benchmark_matrix());
    CHECK(sym.mu0 == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("A = diag(2,-3): mu0^2 = 2") {
    Mat A(2, 2);
    A << 2.0, 0.0, 0.0, -3.0;
    auto g = make_grid(10, 64, 2);
    auto sym = assemble_symbol(g, A);
    CHECK(sym.mu0 * sym.mu0 == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("mu0 ||z||_2 <= ||z|| on 100 random states") {
    auto g = make_grid(10, 64, 2);
    auto sym = assemble_symbol(g, testing::benchmark_matrix());
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
      auto s = split(sym, random_coeffs(g, rng, i % 2 == 1));
      double l2 = std::sqrt(l2_inner(sym, s.coeffs, s.coeffs));
      CHECK(sym.mu0 * l2 <= norm_x(s) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("kappa estimate") {
  auto ctx = testing::benchmark_context(10, 64);
  SUBCASE("pure X+ state has ratio exactly 1") {
    std::mt19937_64 rng(2);
    CMat c = random_coeffs(ctx.grid, rng, false);
    CMat plus(2, ctx.grid.n());
    for (int m = 0; m < ctx.grid.n(); ++m)
      plus.col(m) = ctx.symbol->modes[m].Pplus * c.col(m);
    auto s = split(*ctx.symbol, plus);
    double full = lq_norm(*ctx.transform, s.coeffs, 3.0);
    double rp = lq_norm(*ctx.transform, s.plus, 3.0);
    CHECK(rp == doctest::Approx(full).epsilon(1e-12));
  }
  SUBCASE("estimate over 1e3 Gaussian samples is clamped to >= 1 and finite") {
    auto est = estimate_kappa(*ctx.symbol, *ctx.transform, 3.0, 1000, 123);
    CHECK(est.kappa >= 1.0);
    CHECK(std::isfinite(est.kappa));
    CHECK(est.raw_max > 0.0);
    CHECK(est.samples == 1000);
  }
  SUBCASE("zero samples rejected") {
    CHECK_THROWS_AS(estimate_kappa(*ctx.symbol, *ctx.transform, 3.0, 0, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("triple norm") {
  auto ctx = testing::benchmark_context(10, 64);
  auto tn = make_triple_norm_context(ctx.symbol);

  SUBCASE("first basis element scores its weight 1/4") {
    auto s = split(*ctx.symbol, tn.basis_state(0));
    CHECK(norm_x(s) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(triple_norm(tn, s) == doctest::Approx(0.25).epsilon(1e-10));
  }

  SUBCASE("pure X+ state: triple norm equals ||z+||") {
    std::mt19937_64 rng(3);
    CMat c = random_coeffs(ctx.grid, rng, false);
    CMat plus(2, ctx.grid.n());
    for (int m = 0; m < ctx.grid.n(); ++m)
      plus.col(m) = ctx.symbol->modes[m].Pplus * c.col(m);
    auto s = split(*ctx.symbol, plus);
    CHECK(triple_norm(tn, s) == doctest::Approx(norm_plus(s)).epsilon(1e-12));
    CHECK(triple_norm(tn, s) == doctest::Approx(norm_x(s)).epsilon(1e-10));
  }

  SUBCASE("basis orthonormality in the X inner product") {
    for (std::size_t j = 0; j < 16; ++j) {
      for (std::size_t k = j; k < 16; ++k) {
        double ip = x_inner(*ctx.symbol, tn.basis_state(j), tn.basis_state(k));
        CHECK(std::abs(ip - (j == k ? 1.0 : 0.0)) <= 1e-10);
      }
    }
  }

  SUBCASE("sandwich ||z+|| <= |||z||| <= ||z|| on 100 random states") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
      auto s = split(*ctx.symbol, random_coeffs(ctx.grid, rng, i % 2 == 1));
      double t = triple_norm(tn, s);
      CHECK(norm_plus(s) <= t * (1.0 + 1e-12) + 1e-14);
      CHECK(t <= norm_x(s) * (1.0 + 1e-12) + 1e-14);
    }
  }

  SUBCASE("norm axioms: homogeneity and triangle inequality") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 40; ++i) {
      auto a = split(*ctx.symbol, random_coeffs(ctx.grid, rng, false));
      auto b = split(*ctx.symbol, random_coeffs(ctx.grid, rng, true));
      double ta = triple_norm(tn, a);
      double tb = triple_norm(tn, b);
      auto scaled = split(*ctx.symbol, CMat(2.5 * a.coeffs));
      CHECK(triple_norm(tn, scaled) == doctest::Approx(2.5 * ta).epsilon(1e-10));
      auto sum = split(*ctx.symbol, CMat(a.coeffs + b.coeffs));
      CHECK(triple_norm(tn, sum) <= (ta + tb) * (1.0 + 1e-10) + 1e-14);
    }
  }
}

TEST_CASE("shift acts by exact phases") {
  auto ctx = testing::benchmark_context(10, 64);
  auto s = testing::bump_state(ctx, 0.0, 1.0);
  auto shifted = shift_state(ctx.grid, s, 3.0);
  // The shifted trajectory interpolates the bump at t + 3; integer shifts
  // are not grid-point shifts, so compare against the analytic profile.
  Mat v3 = ctx.transform->to_values(shifted.coeffs);
  for (int j = 0; j < ctx.grid.n(); ++j) {
    double t = ctx.grid.point(j);
    if (std::fabs(t + 3.0) <= ctx.grid.T - 1.0) {
      double expect = std::exp(-(t + 3.0) * (t + 3.0));
      CHECK(std::abs(v3(0, j) - expect) <= 1e-12);
    }
  }
  CHECK(norm_x(shifted) == doctest::Approx(norm_x(s)).epsilon(1e-12));
}
