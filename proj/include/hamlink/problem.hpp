#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hamlink/common.hpp"

namespace hamlink {

using ScalarFn = std::function<double(const Vec&)>;
using VecFn = std::function<Vec(const Vec&)>;

// Outcome of the hyperbolicity check sigma(JA) and i*R disjoint.
struct HyperbolicityCertificate {
  bool pass = false;
  double margin = 0.0;  // min |Re lambda| over the spectrum of JA
  double tol = 1e-10;
  std::vector<Complex> spectrum;  // eigenvalues of JA, sorted
};

// Superquadratic pair (F, G) with gradients and exponents 2 < q < p.
// rho is the radius threshold entering the (F5)-type lower bound.
struct NonlinearitySpec {
  int dim = 2;
  ScalarFn F;
  VecFn f;  // gradient of F
  ScalarFn G;
  VecFn g;  // gradient of G
  double p = 4.0;
  double q = 3.0;
  double rho = 1.0;
  std::string kind = "custom";
};

// Positive 1-periodic weight with declared bounds.
struct WeightSpec {
  std::function<double(double)> gamma;
  double gamma0 = 1.0;     // inf of gamma
  double gamma_sup = 1.0;  // sup of gamma
  std::string kind = "custom";
};

// Full Hamiltonian data: H(z,t) = 1/2 A z . z + Gamma(t) (F(z) - lambda G(z)).
struct ProblemSpec {
  Mat A;
  NonlinearitySpec nonlinearity;
  WeightSpec weight;
  double lambda = 0.0;
  HyperbolicityCertificate hyperbolicity;

  int dim() const { return static_cast<int>(A.rows()); }
};

// Standard symplectic matrix J = [[0, -I], [I, 0]] of size dim x dim.
Mat symplectic_matrix(int dim);

// F(z) = |z|^p / p, G(z) = |z|^q / q with gradients |z|^{p-2} z, |z|^{q-2} z.
// Throws std::invalid_argument unless 2 < q < p.
NonlinearitySpec builtin_power_pair(double p, double q, int dim, double rho = 1.0);

// F(z) = z_1^4 / 4 (first component only), paired with G(z) = |z|^q / q.
// The classical Duffing-type benchmark nonlinearity.
NonlinearitySpec builtin_first_quartic(int dim, double q = 3.0, double rho = 1.0);

WeightSpec constant_weight(double value);
// Gamma(t) = mean + amplitude * cos(2 pi t); requires mean > |amplitude|.
WeightSpec cosine_weight(double mean, double amplitude);

// Spectrum of JA; passes iff every eigenvalue keeps |Re| > tol.
HyperbolicityCertificate check_hyperbolic(const Mat& A, double tol = 1e-10);

double eval_hamiltonian(const ProblemSpec& spec, const Vec& z, double t);

// Assembles and validates a ProblemSpec:
//  - A symmetric to 1e-12 entrywise,
//  - f = grad F and g = grad G by central finite differences (tol 1e-5),
//  - F(0) = G(0) = 0 and oddness of f, g on sample points,
//  - declared Gamma bounds cross-checked on 1e4 samples over one period
//    (tightened to the sampled range if violated),
//  - hyperbolicity certificate attached (pass not required here; solvers
//    refuse to run on a failing certificate).
// Throws std::invalid_argument on structural violations.
ProblemSpec make_problem(Mat A, NonlinearitySpec nl, WeightSpec w, double lambda);

}  // namespace hamlink
