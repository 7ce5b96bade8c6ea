#include "hamlink/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hamlink {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

ProblemSpec problem_from_json(const Json& doc) {
  int dim = doc.at("dim").get<int>();
  if (dim < 2 || dim % 2 != 0)
    throw std::runtime_error("problem: dim must be even and >= 2");

  auto a_flat = doc.at("A").get<std::vector<double>>();
  if (static_cast<int>(a_flat.size()) != dim * dim)
    throw std::runtime_error("problem: A must hold dim*dim row-major entries");
  Mat A(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) A(r, c) = a_flat[r * dim + c];

  double lambda = doc.value("lambda", 0.0);

  const Json& wj = doc.at("weight");
  std::string wkind = wj.at("kind").get<std::string>();
  WeightSpec w;
  if (wkind == "constant")
    w = constant_weight(wj.value("value", 1.0));
  else if (wkind == "cosine")
    w = cosine_weight(wj.at("mean").get<double>(), wj.at("amplitude").get<double>());
  else
    throw std::runtime_error("problem: unknown weight kind '" + wkind + "'");

  const Json& nj = doc.at("nonlinearity");
  std::string nkind = nj.at("kind").get<std::string>();
  NonlinearitySpec nl;
  if (nkind == "power")
    nl = builtin_power_pair(nj.at("p").get<double>(), nj.at("q").get<double>(), dim,
                            nj.value("rho", 1.0));
  else if (nkind == "first_quartic")
    nl = builtin_first_quartic(dim, nj.value("q", 3.0), nj.value("rho", 1.0));
  else
    throw std::runtime_error("problem: unknown nonlinearity kind '" + nkind + "'");

  return make_problem(std::move(A), std::move(nl), std::move(w), lambda);
}

ProblemSpec load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  Json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw std::runtime_error("malformed problem JSON (" + path + "): " + e.what());
  }
  return problem_from_json(doc);
}

Json certificate_json(const HyperbolicityCertificate& cert) {
  Json eigs = Json::array();
  for (const auto& ev : cert.spectrum) eigs.push_back({ev.real(), ev.imag()});
  return Json{{"pass", cert.pass},
              {"margin", cert.margin},
              {"tol", cert.tol},
              {"spectrum_JA", eigs}};
}

Json growth_constants_json(const GrowthConstants& c) {
  return Json{{"epsilon", c.epsilon}, {"C_f_eps", c.C_f_eps}, {"C_g_eps", c.C_g_eps},
              {"C_F_eps", c.C_F_eps}, {"C_G_eps", c.C_G_eps}, {"C_eps", c.C_eps}};
}

Json check_result_json(const CheckResult& c) {
  Json j{{"name", c.name}, {"verdict", verdict_name(c.verdict)}};
  if (std::isfinite(c.fitted)) j["fitted"] = c.fitted;
  if (std::isfinite(c.margin)) j["margin"] = c.margin;
  if (c.witness.size() > 0) {
    Json w = Json::array();
    for (int i = 0; i < c.witness.size(); ++i) w.push_back(c.witness(i));
    j["witness"] = w;
  }
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json budget_json(const BoundednessBudget& b) {
  Json conds = Json::array();
  for (const auto& c : b.conditions)
    conds.push_back(Json{{"name", c.name},
                         {"lhs", c.lhs},
                         {"rhs", c.rhs},
                         {"ok", c.ok},
                         {"margin", c.margin()}});
  return Json{{"accepted", b.accepted},
              {"Lambda", b.Lambda},
              {"Lambda0", b.Lambda0},
              {"gamma_proof", b.gamma_proof},
              {"C_heuristic", b.C_heuristic},
              {"heuristic_constants", true},
              {"rho_input", b.rho_input},
              {"lambda_input", b.lambda_input},
              {"rho_selected", b.rho_selected},
              {"lambda_selected", b.lambda_selected},
              {"ratio_sup", b.ratio_sup},
              {"E", b.E},
              {"D", b.D},
              {"sup_phi_over_v2", b.sup_phi},
              {"conditions", conds},
              {"note", b.note}};
}

Json hypothesis_report_json(const HypothesisReport& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks) checks.push_back(check_result_json(c));
  return Json{{"overall_pass", rep.overall_pass},
              {"fail_reason", rep.fail_reason},
              {"lambda", rep.lambda},
              {"lambda_threshold_step2", rep.lambda_threshold},
              {"mu0", rep.mu0},
              {"kappa",
               Json{{"estimate", rep.kappa.kappa},
                    {"raw_max", rep.kappa.raw_max},
                    {"samples", rep.kappa.samples},
                    {"s", rep.kappa.s},
                    {"heuristic", true}}},
              {"ratio_sup_at_rho", rep.ratio_sup},
              {"E_lambda_rho", rep.E},
              {"hyperbolicity", certificate_json(rep.hyperbolicity)},
              {"growth_constants_step2", growth_constants_json(rep.consts_step2)},
              {"growth_constants_budget", growth_constants_json(rep.consts_budget)},
              {"checks", checks},
              {"budget", budget_json(rep.budget)}};
}

Json gradient_report_json(const GradientReport& rep) {
  return Json{{"value", rep.value},
              {"derivative_norm", rep.derivative_norm},
              {"cerami", rep.cerami},
              {"norm_plus", norm_plus(rep.gradient)},
              {"norm_minus", norm_minus(rep.gradient)}};
}

Json geometry_json(const LinkingGeometry& g) {
  return Json{{"valid", g.valid},
              {"r", g.r},
              {"inf_sphere", g.inf_sphere},
              {"R_of_u", g.R_of_u},
              {"sup_boundary", g.sup_boundary},
              {"delta", g.delta},
              {"sup_small_triple", g.sup_small_triple},
              {"note", g.note}};
}

Json solve_result_json(const SolveResult& r) {
  Json trace = Json::array();
  for (const auto& e : r.trace)
    trace.push_back({e.iter, e.value, e.cerami, e.triple});
  Json shifts = Json::array();
  for (int s : r.shifts) shifts.push_back(s);
  return Json{{"converged", r.converged},
              {"action", r.action_value},
              {"level_estimate", r.level},
              {"flag", r.flag},
              {"shifts", shifts},
              {"geometry", geometry_json(r.geometry)},
              {"trace_columns", {"iter", "value", "cerami", "triple"}},
              {"trace", trace}};
}

Json validation_report_json(const ValidationReport& r) {
  Json wm = Json::array();
  for (const auto& [y, m] : r.window_mass) wm.push_back({y, m});
  Json j{{"residual_l2", r.residual_l2},
         {"tail_sup", r.tail_sup},
         {"tail_fraction", r.tail_fraction},
         {"decay_pass", r.decay_pass},
         {"action", r.action_value},
         {"triple", r.triple},
         {"level_check", r.level_check},
         {"window_mass", wm}};
  if (r.oracle_error) j["oracle_error"] = *r.oracle_error;
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

void write_orbit_csv(const std::string& path, const FunctionalContext& ctx,
                     const SplitState& orbit) {
  Mat vals = ctx.transform->to_values(orbit.coeffs);
  std::ostringstream os;
  os << "t";
  for (int r = 0; r < ctx.grid.dim; ++r) os << ",z_" << (r + 1);
  os << "\n";
  for (int j = 0; j < ctx.grid.n(); ++j) {
    os << fmt_double(ctx.grid.point(j));
    for (int r = 0; r < ctx.grid.dim; ++r) os << "," << fmt_double(vals(r, j));
    os << "\n";
  }
  write_text_file(path, os.str());
}

OrbitFile read_orbit_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open orbit file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty orbit file: " + path);
  int dim = -1;  // from header: t,z_1..z_dim
  {
    int commas = 0;
    for (char c : line)
      if (c == ',') ++commas;
    dim = commas;
  }
  if (dim < 2) throw std::runtime_error("orbit file must carry at least two components");

  std::vector<double> times;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (static_cast<int>(row.size()) != dim + 1)
      throw std::runtime_error("orbit file row width mismatch");
    times.push_back(row[0]);
    rows.push_back(std::vector<double>(row.begin() + 1, row.end()));
  }
  int n = static_cast<int>(times.size());
  if (n < 3 || n % 2 == 0)
    throw std::runtime_error("orbit file must hold an odd number (2M+1) of rows");

  double T = -times.front();
  double h = times[1] - times[0];
  if (T <= 0.0 || std::fabs(T - std::round(T)) > 1e-9)
    throw std::runtime_error("orbit file: window half-length must be a positive integer");
  for (int j = 0; j < n; ++j)
    if (std::fabs(times[j] - (-T + j * h)) > 1e-9 * std::max(1.0, T))
      throw std::runtime_error("orbit file: nonuniform time grid");
  if (std::fabs(h * n - 2.0 * T) > 1e-9)
    throw std::runtime_error("orbit file: spacing does not match a periodic grid");

  OrbitFile of;
  of.grid = make_grid(static_cast<int>(std::round(T)), (n - 1) / 2, dim);
  of.values.resize(dim, n);
  for (int j = 0; j < n; ++j)
    for (int r = 0; r < dim; ++r) of.values(r, j) = rows[j][r];
  return of;
}

Json coefficients_json(const SpectralGrid& grid, const CMat& coeffs) {
  Json comps = Json::array();
  for (int r = 0; r < grid.dim; ++r) {
    Json arr = Json::array();
    for (int m = 0; m < grid.n(); ++m)
      arr.push_back({m - grid.M, coeffs(r, m).real(), coeffs(r, m).imag()});
    comps.push_back(arr);
  }
  return Json{{"T", grid.T}, {"M", grid.M}, {"dim", grid.dim}, {"components", comps}};
}

}  // namespace hamlink
