#include "hamlink/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace hamlink {

Mat symplectic_matrix(int dim) {
  if (dim < 2 || dim % 2 != 0)
    throw std::invalid_argument("symplectic_matrix: dim must be even and >= 2");
  int n = dim / 2;
  Mat J = Mat::Zero(dim, dim);
  J.topRightCorner(n, n) = -Mat::Identity(n, n);
  J.bottomLeftCorner(n, n) = Mat::Identity(n, n);
  return J;
}

namespace {

// |z|^e z with the integer-exponent fast path; e >= 0.
Vec radial_power_gradient(const Vec& z, double e) {
  double r2 = z.squaredNorm();
  if (r2 == 0.0) return Vec::Zero(z.size());
  double s;
  double half = e / 2.0;
  if (half == std::floor(half))
    s = std::pow(r2, half);  // pow with integer-valued exponent is exact-ish and fast
  else
    s = std::pow(std::sqrt(r2), e);
  return s * z;
}

double radial_power_value(const Vec& z, double p) {
  double r2 = z.squaredNorm();
  if (r2 == 0.0) return 0.0;
  double half = p / 2.0;
  if (half == std::floor(half)) return std::pow(r2, half) / p;
  return std::pow(std::sqrt(r2), p) / p;
}

void check_gradient_consistency(const ScalarFn& V, const VecFn& v, int dim,
                                const char* name, double tol) {
  std::mt19937_64 rng(0x5eedu);
  for (int trial = 0; trial < 24; ++trial) {
    Vec z = unit_direction(rng, dim) * std::pow(10.0, -1.0 + 2.0 * (trial % 4) / 3.0);
    Vec g = v(z);
    double scale = std::max(1.0, g.norm());
    for (int i = 0; i < dim; ++i) {
      double h = 1e-6 * std::max(1.0, std::abs(z(i)));
      Vec zp = z, zm = z;
      zp(i) += h;
      zm(i) -= h;
      double fd = (V(zp) - V(zm)) / (2.0 * h);
      if (std::abs(fd - g(i)) > tol * scale)
        throw std::invalid_argument(std::string(name) +
                                    ": declared gradient disagrees with finite differences");
    }
  }
}

}  // namespace

NonlinearitySpec builtin_power_pair(double p, double q, int dim, double rho) {
  if (!(2.0 < q && q < p))
    throw std::invalid_argument("builtin_power_pair: require 2 < q < p");
  if (rho <= 0.0) throw std::invalid_argument("builtin_power_pair: rho must be positive");
  NonlinearitySpec nl;
  nl.dim = dim;
  nl.p = p;
  nl.q = q;
  nl.rho = rho;
  nl.kind = "power";
  nl.F = [p](const Vec& z) { return radial_power_value(z, p); };
  nl.f = [p](const Vec& z) { return radial_power_gradient(z, p - 2.0); };
  nl.G = [q](const Vec& z) { return radial_power_value(z, q); };
  nl.g = [q](const Vec& z) { return radial_power_gradient(z, q - 2.0); };
  return nl;
}

NonlinearitySpec builtin_first_quartic(int dim, double q, double rho) {
  if (!(2.0 < q && q < 4.0))
    throw std::invalid_argument("builtin_first_quartic: require q in (2, 4)");
  NonlinearitySpec nl;
  nl.dim = dim;
  nl.p = 4.0;
  nl.q = q;
  nl.rho = rho;
  nl.kind = "first_quartic";
  nl.F = [](const Vec& z) {
    double a = z(0);
    return 0.25 * a * a * a * a;
  };
  nl.f = [](const Vec& z) {
    Vec out = Vec::Zero(z.size());
    out(0) = z(0) * z(0) * z(0);
    return out;
  };
  nl.G = [q](const Vec& z) { return radial_power_value(z, q); };
  nl.g = [q](const Vec& z) { return radial_power_gradient(z, q - 2.0); };
  return nl;
}

WeightSpec constant_weight(double value) {
  if (value <= 0.0) throw std::invalid_argument("constant_weight: value must be positive");
  WeightSpec w;
  w.gamma = [value](double) { return value; };
  w.gamma0 = value;
  w.gamma_sup = value;
  w.kind = "constant";
  return w;
}

WeightSpec cosine_weight(double mean, double amplitude) {
  if (mean <= std::abs(amplitude))
    throw std::invalid_argument("cosine_weight: need mean > |amplitude| for positivity");
  WeightSpec w;
  w.gamma = [mean, amplitude](double t) {
    return mean + amplitude * std::cos(2.0 * M_PI * t);
  };
  w.gamma0 = mean - std::abs(amplitude);
  w.gamma_sup = mean + std::abs(amplitude);
  w.kind = "cosine";
  return w;
}

HyperbolicityCertificate check_hyperbolic(const Mat& A, double tol) {
  if (A.rows() != A.cols()) throw std::invalid_argument("check_hyperbolic: A must be square");
  HyperbolicityCertificate cert;
  cert.tol = tol;
  Mat JA = symplectic_matrix(static_cast<int>(A.rows())) * A;
  Eigen::EigenSolver<Mat> es(JA, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("check_hyperbolic: eigendecomposition failed");
  CVec ev = es.eigenvalues();
  cert.spectrum.resize(ev.size());
  for (int i = 0; i < ev.size(); ++i) cert.spectrum[i] = ev(i);
  std::sort(cert.spectrum.begin(), cert.spectrum.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  cert.margin = std::abs(ev(0).real());
  for (int i = 1; i < ev.size(); ++i)
    cert.margin = std::min(cert.margin, std::abs(ev(i).real()));
  cert.pass = cert.margin > tol;
  return cert;
}

double eval_hamiltonian(const ProblemSpec& spec, const Vec& z, double t) {
  double quad = 0.5 * z.dot(spec.A * z);
  double gamma = spec.weight.gamma(t);
  return quad + gamma * (spec.nonlinearity.F(z) - spec.lambda * spec.nonlinearity.G(z));
}

ProblemSpec make_problem(Mat A, NonlinearitySpec nl, WeightSpec w, double lambda) {
  if (A.rows() != A.cols() || A.rows() != nl.dim)
    throw std::invalid_argument("make_problem: A must be square with dim matching nonlinearity");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("make_problem: A must be symmetric (tol 1e-12)");
  if (lambda < 0.0) throw std::invalid_argument("make_problem: lambda must be nonnegative");
  if (!(2.0 < nl.q && nl.q < nl.p))
    throw std::invalid_argument("make_problem: require 2 < q < p");

  Vec zero = Vec::Zero(nl.dim);
  if (std::abs(nl.F(zero)) != 0.0 || std::abs(nl.G(zero)) != 0.0)
    throw std::invalid_argument("make_problem: F(0) and G(0) must vanish");

  check_gradient_consistency(nl.F, nl.f, nl.dim, "F", 1e-5);
  check_gradient_consistency(nl.G, nl.g, nl.dim, "G", 1e-5);

  // Oddness spot check for f and g.
  std::mt19937_64 rng(0x0ddu);
  for (int trial = 0; trial < 16; ++trial) {
    Vec z = unit_direction(rng, nl.dim) * std::pow(10.0, -2.0 + trial % 5);
    if ((nl.f(z) + nl.f(-z)).norm() > 1e-10 * std::max(1.0, nl.f(z).norm()))
      throw std::invalid_argument("make_problem: f must be odd");
    if ((nl.g(z) + nl.g(-z)).norm() > 1e-10 * std::max(1.0, nl.g(z).norm()))
      throw std::invalid_argument("make_problem: g must be odd");
  }

  // Cross-check declared weight bounds over one period; tighten if violated.
  const int samples = 10000;
  double lo = w.gamma(0.0), hi = lo;
  for (int i = 1; i < samples; ++i) {
    double g = w.gamma(static_cast<double>(i) / samples);
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  if (lo <= 0.0) throw std::invalid_argument("make_problem: Gamma must be positive");
  for (int i = 0; i < 64; ++i) {
    double t = -3.0 + 6.0 * i / 63.0;
    if (std::abs(w.gamma(t + 1.0) - w.gamma(t)) > 1e-10 * std::max(1.0, std::abs(w.gamma(t))))
      throw std::invalid_argument("make_problem: Gamma must be 1-periodic");
  }
  if (w.gamma0 > lo || w.gamma0 <= 0.0) w.gamma0 = lo;
  if (w.gamma_sup < hi) w.gamma_sup = hi;

  ProblemSpec spec;
  spec.A = std::move(A);
  spec.nonlinearity = std::move(nl);
  spec.weight = std::move(w);
  spec.lambda = lambda;
  spec.hyperbolicity = check_hyperbolic(spec.A);
  return spec;
}

}  // namespace hamlink
