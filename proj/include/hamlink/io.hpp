#pragma once

#include <string>

#include <json.hpp>

#include "hamlink/hypotheses.hpp"
#include "hamlink/problem.hpp"
#include "hamlink/solver.hpp"
#include "hamlink/validate.hpp"

namespace hamlink {

using Json = nlohmann::ordered_json;

// Problem document:
// {
//   "dim": 2,
//   "A": [-1, 0, 0, 1],                            // row-major
//   "lambda": 0.0,
//   "weight": {"kind": "constant", "value": 1.0}   // or {"kind": "cosine",
//                                                  //     "mean": m, "amplitude": a}
//   "nonlinearity": {"kind": "power", "p": 4, "q": 3, "rho": 1.0}
//                                                  // or {"kind": "first_quartic",
//                                                  //     "q": 3, "rho": 1.0}
// }
ProblemSpec problem_from_json(const Json& doc);
ProblemSpec load_problem_file(const std::string& path);

Json certificate_json(const HyperbolicityCertificate& cert);
Json growth_constants_json(const GrowthConstants& c);
Json check_result_json(const CheckResult& c);
Json budget_json(const BoundednessBudget& b);
Json hypothesis_report_json(const HypothesisReport& rep);
Json gradient_report_json(const GradientReport& rep);
Json geometry_json(const LinkingGeometry& g);
Json solve_result_json(const SolveResult& r);
Json validation_report_json(const ValidationReport& r);

void write_text_file(const std::string& path, const std::string& text);

// Trajectory CSV: header t,z_1..z_{2N}; one row per collocation point.
void write_orbit_csv(const std::string& path, const FunctionalContext& ctx,
                     const SplitState& orbit);

struct OrbitFile {
  SpectralGrid grid;  // inferred from the time column
  Mat values;         // dim x n
};
OrbitFile read_orbit_csv(const std::string& path);

// Coefficient export: per component, an array of [mode_index, re, im].
Json coefficients_json(const SpectralGrid& grid, const CMat& coeffs);

}  // namespace hamlink
