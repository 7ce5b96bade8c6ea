#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "hamlink/io.hpp"
#include "support.hpp"

using namespace hamlink;

namespace {

Json benchmark_doc() {
  return Json{{"dim", 2},
              {"A", {-1.0, 0.0, 0.0, 1.0}},
              {"lambda", 0.0},
              {"weight", {{"kind", "constant"}, {"value", 1.0}}},
              {"nonlinearity", {{"kind", "first_quartic"}, {"q", 3.0}, {"rho", 1.0}}}};
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/hamlink_io_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("problem documents load and validate") {
  SUBCASE("benchmark document") {
    ProblemSpec p = problem_from_json(benchmark_doc());
    CHECK(p.dim() == 2);
    CHECK(p.lambda == 0.0);
    CHECK(p.A(0, 0) == -1.0);
    CHECK(p.hyperbolicity.pass);
    CHECK(p.weight.gamma0 == doctest::Approx(1.0));
    CHECK(p.nonlinearity.kind == "first_quartic");
  }
  SUBCASE("power document with cosine weight") {
    Json doc{{"dim", 2},
             {"A", {-1.0, 0.0, 0.0, 1.0}},
             {"lambda", 0.01},
             {"weight", {{"kind", "cosine"}, {"mean", 1.0}, {"amplitude", 0.25}}},
             {"nonlinearity", {{"kind", "power"}, {"p", 4.0}, {"q", 3.0}, {"rho", 0.5}}}};
    ProblemSpec p = problem_from_json(doc);
    CHECK(p.nonlinearity.p == 4.0);
    CHECK(p.nonlinearity.rho == 0.5);
    CHECK(p.weight.gamma0 == doctest::Approx(0.75));
    CHECK(p.weight.gamma_sup == doctest::Approx(1.25));
  }
  SUBCASE("bad documents are rejected") {
    Json doc = benchmark_doc();
    doc["A"] = {1.0, 2.0, 3.0};
    CHECK_THROWS(problem_from_json(doc));
    doc = benchmark_doc();
    doc["nonlinearity"]["kind"] = "unknown";
    CHECK_THROWS(problem_from_json(doc));
    doc = benchmark_doc();
    doc["weight"]["kind"] = "sawtooth";
    CHECK_THROWS(problem_from_json(doc));
  }
  SUBCASE("malformed JSON file") {
    TempFile f("garbage.json");
    std::ofstream(f.path) << "{ not json";
    CHECK_THROWS(load_problem_file(f.path));
    CHECK_THROWS(load_problem_file("/nonexistent/nowhere.json"));
  }
}

TEST_CASE("orbit CSV round trip") {
  auto ctx = testing::benchmark_context(10, 48);
  auto orbit = testing::bump_state(ctx, 0.5, 1.2, 1.0, 0.4);
  TempFile f("orbit.csv");
  write_orbit_csv(f.path, ctx, orbit);
  OrbitFile of = read_orbit_csv(f.path);
  CHECK(of.grid.T == 10);
  CHECK(of.grid.M == 48);
  CHECK(of.grid.dim == 2);
  Mat vals = ctx.transform->to_values(orbit.coeffs);
  CHECK((of.values - vals).cwiseAbs().maxCoeff() <= 1e-12);

  SUBCASE("writing twice yields identical bytes") {
    TempFile f2("orbit2.csv");
    write_orbit_csv(f2.path, ctx, orbit);
    std::ifstream a(f.path), b(f2.path);
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
  }
}

TEST_CASE("orbit CSV rejects a non-integer window") {
  TempFile f("badT.csv");
  {
    std::ofstream out(f.path);
    out << "t,z_1,z_2\n";
    // T = 3.5 with 7 points: spacing 1.0, t in [-3.5, 2.5]
    for (int j = 0; j < 7; ++j) out << (-3.5 + j) << ",0,0\n";
  }
  CHECK_THROWS_WITH_AS(read_orbit_csv(f.path),
                       doctest::Contains("positive integer"), std::runtime_error);
}

TEST_CASE("orbit CSV rejects malformed grids") {
  SUBCASE("even row count") {
    TempFile f("even.csv");
    std::ofstream out(f.path);
    out << "t,z_1,z_2\n";
    for (int j = 0; j < 6; ++j) out << (-3.0 + j) << ",0,0\n";
    out.close();
    CHECK_THROWS(read_orbit_csv(f.path));
  }
  SUBCASE("nonuniform time column") {
    TempFile f("nonuni.csv");
    std::ofstream out(f.path);
    out << "t,z_1,z_2\n-2,0,0\n-1,0,0\n0.5,0,0\n1,0,0\n2,0,0\n";
    out.close();
    CHECK_THROWS(read_orbit_csv(f.path));
  }
}

TEST_CASE("coefficient export shape") {
  auto ctx = testing::benchmark_context(4, 8);
  auto orbit = testing::bump_state(ctx);
  Json doc = coefficients_json(ctx.grid, orbit.coeffs);
  CHECK(doc["T"] == 4);
  CHECK(doc["M"] == 8);
  REQUIRE(doc["components"].size() == 2);
  REQUIRE(doc["components"][0].size() == ctx.grid.n());
  CHECK(doc["components"][0][0][0] == -8);  // lowest mode index
  CHECK(doc["components"][0][ctx.grid.n() - 1][0] == 8);
}

TEST_CASE("report serializers emit the advertised fields") {
  auto ctx = testing::benchmark_context(10, 48);
  auto rep = gradient(ctx, testing::bump_state(ctx));
  Json g = gradient_report_json(rep);
  CHECK(g.contains("value"));
  CHECK(g.contains("derivative_norm"));
  CHECK(g.contains("cerami"));

  LinkingGeometry geo;
  geo.valid = true;
  geo.r = 1.0;
  Json gj = geometry_json(geo);
  CHECK(gj["valid"] == true);

  SolveResult sr;
  sr.orbit = testing::bump_state(ctx);
  sr.trace.push_back({0, 1.0, 0.5, 0.2});
  Json sj = solve_result_json(sr);
  CHECK(sj["trace"].size() == 1);
  CHECK(sj["trace_columns"][1] == "value");
}
