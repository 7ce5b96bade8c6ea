#include "hamlink/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hamlink/problem.hpp"

#include <Eigen/Eigenvalues>
#include <fftw3.h>

namespace hamlink {

SpectralGrid make_grid(int T, int M, int dim) {
  if (T <= 0) throw std::invalid_argument("make_grid: T must be a positive integer");
  if (M <= 0) throw std::invalid_argument("make_grid: M must be positive");
  if (dim < 2 || dim % 2 != 0)
    throw std::invalid_argument("make_grid: dim must be even and >= 2");
  SpectralGrid g;
  g.T = T;
  g.M = M;
  g.dim = dim;
  return g;
}

// ---------------------------------------------------------------------------
// Fourier transform
//
// z(t_j) = sum_k zhat_k e^{i omega_k t_j} with t_j = -T + j h reduces to a
// plain DFT after the phase e^{i omega_k t_j} = (-1)^k e^{2 pi i k j / n}.
// ---------------------------------------------------------------------------

struct FourierTransform::Plans {
  fftw_plan fwd_n = nullptr, bwd_n = nullptr;
  fftw_plan fwd_os = nullptr, bwd_os = nullptr;

  ~Plans() {
    if (fwd_n) fftw_destroy_plan(fwd_n);
    if (bwd_n) fftw_destroy_plan(bwd_n);
    if (fwd_os) fftw_destroy_plan(fwd_os);
    if (bwd_os) fftw_destroy_plan(bwd_os);
  }
};

namespace {

fftw_plan make_plan(int n, int sign) {
  std::vector<Complex> a(n), b(n);
  // UNALIGNED lets fftw_execute_dft run on arbitrary caller buffers, which
  // keeps execution thread-safe (plans are created once, serially).
  return fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                          reinterpret_cast<fftw_complex*>(b.data()), sign,
                          FFTW_ESTIMATE | FFTW_UNALIGNED);
}

void run_plan(fftw_plan plan, std::vector<Complex>& in, std::vector<Complex>& out) {
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

inline double mode_sign(int k) { return (k & 1) ? -1.0 : 1.0; }

void enforce_reality(CMat& coeffs) {
  int M = (static_cast<int>(coeffs.cols()) - 1) / 2;
  for (int r = 0; r < coeffs.rows(); ++r) {
    coeffs(r, M) = Complex(coeffs(r, M).real(), 0.0);
    for (int k = 1; k <= M; ++k) {
      Complex a = 0.5 * (coeffs(r, M + k) + std::conj(coeffs(r, M - k)));
      coeffs(r, M + k) = a;
      coeffs(r, M - k) = std::conj(a);
    }
  }
}

}  // namespace

FourierTransform::FourierTransform(const SpectralGrid& grid)
    : grid_(grid), plans_(std::make_unique<Plans>()) {
  plans_->fwd_n = make_plan(grid.n(), FFTW_FORWARD);
  plans_->bwd_n = make_plan(grid.n(), FFTW_BACKWARD);
  plans_->fwd_os = make_plan(grid.n_os(), FFTW_FORWARD);
  plans_->bwd_os = make_plan(grid.n_os(), FFTW_BACKWARD);
}

FourierTransform::~FourierTransform() = default;

CMat FourierTransform::to_coeffs(const Mat& values) const {
  const int n = grid_.n();
  const int M = grid_.M;
  if (values.rows() != grid_.dim || values.cols() != n)
    throw std::invalid_argument("to_coeffs: values must be dim x (2M+1)");
  CMat coeffs(grid_.dim, n);
  std::vector<Complex> in(n), out(n);
  for (int r = 0; r < grid_.dim; ++r) {
    for (int j = 0; j < n; ++j) in[j] = Complex(values(r, j), 0.0);
    run_plan(plans_->fwd_n, in, out);
    for (int k = -M; k <= M; ++k) {
      int bin = k >= 0 ? k : k + n;
      coeffs(r, M + k) = mode_sign(k) * out[bin] / static_cast<double>(n);
    }
  }
  enforce_reality(coeffs);
  return coeffs;
}

Mat FourierTransform::to_values(const CMat& coeffs) const {
  const int n = grid_.n();
  const int M = grid_.M;
  if (coeffs.rows() != grid_.dim || coeffs.cols() != n)
    throw std::invalid_argument("to_values: coeffs must be dim x (2M+1)");
  Mat values(grid_.dim, n);
  std::vector<Complex> in(n), out(n);
  for (int r = 0; r < grid_.dim; ++r) {
    std::fill(in.begin(), in.end(), Complex(0.0, 0.0));
    for (int k = -M; k <= M; ++k) {
      int bin = k >= 0 ? k : k + n;
      in[bin] = mode_sign(k) * coeffs(r, M + k);
    }
    run_plan(plans_->bwd_n, in, out);
    for (int j = 0; j < n; ++j) values(r, j) = out[j].real();
  }
  return values;
}

Mat FourierTransform::to_values_oversampled(const CMat& coeffs) const {
  const int nos = grid_.n_os();
  const int M = grid_.M;
  if (coeffs.rows() != grid_.dim || coeffs.cols() != grid_.n())
    throw std::invalid_argument("to_values_oversampled: coeffs must be dim x (2M+1)");
  Mat values(grid_.dim, nos);
  std::vector<Complex> in(nos), out(nos);
  for (int r = 0; r < grid_.dim; ++r) {
    std::fill(in.begin(), in.end(), Complex(0.0, 0.0));
    for (int k = -M; k <= M; ++k) {
      int bin = k >= 0 ? k : k + nos;
      in[bin] = mode_sign(k) * coeffs(r, M + k);
    }
    run_plan(plans_->bwd_os, in, out);
    for (int j = 0; j < nos; ++j) values(r, j) = out[j].real();
  }
  return values;
}

CMat FourierTransform::from_values_oversampled(const Mat& values_os) const {
  const int nos = grid_.n_os();
  const int M = grid_.M;
  if (values_os.rows() != grid_.dim || values_os.cols() != nos)
    throw std::invalid_argument("from_values_oversampled: values must be dim x n_os");
  CMat coeffs(grid_.dim, grid_.n());
  std::vector<Complex> in(nos), out(nos);
  for (int r = 0; r < grid_.dim; ++r) {
    for (int j = 0; j < nos; ++j) in[j] = Complex(values_os(r, j), 0.0);
    run_plan(plans_->fwd_os, in, out);
    for (int k = -M; k <= M; ++k) {
      int bin = k >= 0 ? k : k + nos;
      coeffs(r, M + k) = mode_sign(k) * out[bin] / static_cast<double>(nos);
    }
  }
  enforce_reality(coeffs);
  return coeffs;
}

// ---------------------------------------------------------------------------
// Operator symbol
// ---------------------------------------------------------------------------

OperatorSymbol assemble_symbol(const SpectralGrid& grid, const Mat& A, double tol_hyp) {
  if (A.rows() != grid.dim || A.cols() != grid.dim)
    throw std::invalid_argument("assemble_symbol: A must match grid dimension");
  OperatorSymbol sym;
  sym.grid = grid;
  sym.tol_hyp = tol_hyp;
  sym.modes.resize(grid.n());

  const Mat J = symplectic_matrix(grid.dim);
  const int M = grid.M;
  std::vector<char> singular(M + 1, 0);

  // Modes k = 0..M; negative modes are conjugate mirrors, which keeps the
  // reality of split parts exact.
  parallel_for(static_cast<std::size_t>(M) + 1, [&](std::size_t kk) {
    int k = static_cast<int>(kk);
    double omega = M_PI * k / grid.T;
    ModeData md;
    md.symbol = -A.cast<Complex>();
    md.symbol += Complex(0.0, -omega) * J.cast<Complex>();
    if (k == 0) {
      Eigen::SelfAdjointEigenSolver<Mat> es(-A);
      md.eigs = es.eigenvalues();
      md.U = es.eigenvectors().cast<Complex>();
    } else {
      Eigen::SelfAdjointEigenSolver<CMat> es(md.symbol);
      md.eigs = es.eigenvalues();
      md.U = es.eigenvectors();
    }
    if (md.eigs.cwiseAbs().minCoeff() <= tol_hyp) singular[kk] = 1;
    int d = grid.dim;
    md.Pplus = CMat::Zero(d, d);
    md.Pminus = CMat::Zero(d, d);
    md.absM = CMat::Zero(d, d);
    md.absMinv = CMat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      CMat outer = md.U.col(i) * md.U.col(i).adjoint();
      if (md.eigs(i) > 0.0)
        md.Pplus += outer;
      else
        md.Pminus += outer;
      md.absM += std::abs(md.eigs(i)) * outer;
      md.absMinv += outer / std::max(std::abs(md.eigs(i)), 1e-300);
    }
    sym.modes[M + k] = std::move(md);
  });

  for (int k = 0; k <= M; ++k)
    if (singular[k])
      throw HyperbolicityError(
          "assemble_symbol: symbol eigenvalue within tol of zero at omega = " +
          std::to_string(M_PI * k / grid.T) + "; splitting undefined");

  for (int k = 1; k <= M; ++k) {
    const ModeData& src = sym.modes[M + k];
    ModeData md;
    md.symbol = src.symbol.conjugate();
    md.eigs = src.eigs;
    md.U = src.U.conjugate();
    md.Pplus = src.Pplus.conjugate();
    md.Pminus = src.Pminus.conjugate();
    md.absM = src.absM.conjugate();
    md.absMinv = src.absMinv.conjugate();
    sym.modes[M - k] = std::move(md);
  }

  sym.mu0 = compute_mu0(sym);
  return sym;
}

double compute_mu0(const OperatorSymbol& symbol) {
  double min_abs = std::numeric_limits<double>::infinity();
  for (const auto& md : symbol.modes)
    min_abs = std::min(min_abs, md.eigs.cwiseAbs().minCoeff());
  return std::sqrt(min_abs);
}

// ---------------------------------------------------------------------------
// Splitting and norms
// ---------------------------------------------------------------------------

SplitState split(const OperatorSymbol& symbol, const CMat& coeffs, double reality_tol) {
  const SpectralGrid& g = symbol.grid;
  if (coeffs.rows() != g.dim || coeffs.cols() != g.n())
    throw std::invalid_argument("split: coefficient shape mismatch");
  const int M = g.M;
  double scale = 1.0 + coeffs.cwiseAbs().maxCoeff();
  for (int k = 0; k <= M; ++k) {
    double dev = (coeffs.col(M + k) - coeffs.col(M - k).conjugate()).cwiseAbs().maxCoeff();
    if (dev > reality_tol * scale)
      throw std::invalid_argument("split: coefficients violate the reality constraint");
  }

  SplitState s;
  s.coeffs = coeffs;
  s.plus.resize(g.dim, g.n());
  s.minus.resize(g.dim, g.n());
  KahanSum np2, nm2;
  const double w = symbol.quad_weight();
  for (int m = 0; m < g.n(); ++m) {
    const ModeData& md = symbol.modes[m];
    CVec zp = md.Pplus * coeffs.col(m);
    CVec zm = md.Pminus * coeffs.col(m);
    s.plus.col(m) = zp;
    s.minus.col(m) = zm;
    np2.add(w * (zp.adjoint() * md.absM * zp)(0, 0).real());
    nm2.add(w * (zm.adjoint() * md.absM * zm)(0, 0).real());
  }
  s.norm_plus_cached = std::sqrt(std::max(0.0, np2.value()));
  s.norm_minus_cached = std::sqrt(std::max(0.0, nm2.value()));
  return s;
}

SplitState state_from_values(const OperatorSymbol& symbol, const FourierTransform& ft,
                             const Mat& values) {
  return split(symbol, ft.to_coeffs(values));
}

SplitState zero_state(const OperatorSymbol& symbol) {
  const SpectralGrid& g = symbol.grid;
  return split(symbol, CMat::Zero(g.dim, g.n()));
}

double norm_plus(const SplitState& s) { return s.norm_plus_cached; }
double norm_minus(const SplitState& s) { return s.norm_minus_cached; }
double norm_x(const SplitState& s) {
  return std::sqrt(s.norm_plus_cached * s.norm_plus_cached +
                   s.norm_minus_cached * s.norm_minus_cached);
}

double norm_x_direct(const OperatorSymbol& symbol, const CMat& coeffs) {
  KahanSum acc;
  const double w = symbol.quad_weight();
  for (int m = 0; m < coeffs.cols(); ++m) {
    const ModeData& md = symbol.modes[m];
    acc.add(w * (coeffs.col(m).adjoint() * md.absM * coeffs.col(m))(0, 0).real());
  }
  return std::sqrt(std::max(0.0, acc.value()));
}

double quadratic_form_direct(const SpectralGrid& grid, const Mat& A, const CMat& coeffs) {
  const Mat J = symplectic_matrix(grid.dim);
  KahanSum acc;
  for (int m = 0; m < grid.n(); ++m) {
    double omega = grid.freq(m);
    CMat sym = -A.cast<Complex>() + Complex(0.0, -omega) * J.cast<Complex>();
    acc.add(grid.window() * (coeffs.col(m).adjoint() * sym * coeffs.col(m))(0, 0).real());
  }
  return acc.value();
}

double symbol_pairing(const OperatorSymbol& symbol, const CMat& a, const CMat& b) {
  KahanSum acc;
  const double w = symbol.quad_weight();
  for (int m = 0; m < a.cols(); ++m)
    acc.add(w * (a.col(m).adjoint() * symbol.modes[m].symbol * b.col(m))(0, 0).real());
  return acc.value();
}

double x_inner(const OperatorSymbol& symbol, const CMat& a, const CMat& b) {
  KahanSum acc;
  const double w = symbol.quad_weight();
  for (int m = 0; m < a.cols(); ++m)
    acc.add(w * (a.col(m).adjoint() * symbol.modes[m].absM * b.col(m))(0, 0).real());
  return acc.value();
}

double l2_inner(const OperatorSymbol& symbol, const CMat& a, const CMat& b) {
  KahanSum acc;
  const double w = symbol.quad_weight();
  for (int m = 0; m < a.cols(); ++m)
    acc.add(w * (a.col(m).adjoint() * b.col(m))(0, 0).real());
  return acc.value();
}

double lq_norm(const FourierTransform& ft, const CMat& coeffs, double s) {
  if (s < 1.0) throw std::invalid_argument("lq_norm: s must be >= 1");
  Mat vals = ft.to_values_oversampled(coeffs);
  const double h = ft.grid().spacing_os();
  KahanSum acc;
  for (int j = 0; j < vals.cols(); ++j) {
    double r = vals.col(j).norm();
    acc.add(h * std::pow(r, s));
  }
  return std::pow(acc.value(), 1.0 / s);
}

// ---------------------------------------------------------------------------
// Random states, kappa estimate, shifts
// ---------------------------------------------------------------------------

CMat random_coeffs(const SpectralGrid& grid, std::mt19937_64& rng, bool rough) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int M = grid.M;
  CMat c = CMat::Zero(grid.dim, grid.n());
  double omega_c = std::max(1.0, M_PI * M / grid.T / 4.0);
  for (int r = 0; r < grid.dim; ++r) {
    for (int k = 0; k <= M; ++k) {
      double env = rough ? 1.0 : std::exp(-std::pow(grid.freq(M + k) / omega_c, 2));
      double re = gauss(rng), im = gauss(rng);
      if (k == 0)
        c(r, M) = Complex(env * re, 0.0);
      else {
        c(r, M + k) = env * Complex(re, im);
        c(r, M - k) = std::conj(c(r, M + k));
      }
    }
  }
  return c;
}

KappaEstimate estimate_kappa(const OperatorSymbol& symbol, const FourierTransform& ft,
                             double s, int samples, std::uint64_t seed) {
  if (samples <= 0) throw std::invalid_argument("estimate_kappa: samples must be positive");
  std::mt19937_64 rng(seed);
  KappaEstimate est;
  est.s = s;
  est.samples = samples;
  for (int i = 0; i < samples; ++i) {
    CMat c = random_coeffs(symbol.grid, rng, i % 2 == 1);
    SplitState st = split(symbol, c);
    double full = lq_norm(ft, st.coeffs, s);
    if (full < 1e-13) continue;
    double rp = lq_norm(ft, st.plus, s) / full;
    double rm = lq_norm(ft, st.minus, s) / full;
    est.raw_max = std::max(est.raw_max, std::max(rp, rm));
  }
  est.kappa = std::max(1.0, est.raw_max);
  return est;
}

CMat shift_coeffs(const SpectralGrid& grid, const CMat& coeffs, double y) {
  CMat out = coeffs;
  for (int m = 0; m < grid.n(); ++m)
    out.col(m) *= std::polar(1.0, grid.freq(m) * y);
  return out;
}

SplitState shift_state(const SpectralGrid& grid, const SplitState& s, double y) {
  SplitState out;
  out.coeffs = shift_coeffs(grid, s.coeffs, y);
  out.plus = shift_coeffs(grid, s.plus, y);
  out.minus = shift_coeffs(grid, s.minus, y);
  // Unit per-mode phases leave every |M|-weighted norm unchanged.
  out.norm_plus_cached = s.norm_plus_cached;
  out.norm_minus_cached = s.norm_minus_cached;
  return out;
}

// ---------------------------------------------------------------------------
// Triple norm
// ---------------------------------------------------------------------------

TripleNormContext make_triple_norm_context(std::shared_ptr<const OperatorSymbol> symbol) {
  TripleNormContext ctx;
  ctx.symbol = symbol;
  const SpectralGrid& g = symbol->grid;
  const int M = g.M;
  std::size_t pos = 0;
  for (int k = 0; k <= M; ++k) {
    const ModeData& md = symbol->modes[M + k];
    std::vector<int> neg;
    for (int i = 0; i < g.dim; ++i)
      if (md.eigs(i) < 0.0) neg.push_back(i);
    std::stable_sort(neg.begin(), neg.end(), [&](int a, int b) {
      return std::abs(md.eigs(a)) < std::abs(md.eigs(b));
    });
    for (int i : neg) {
      double lam = std::abs(md.eigs(i));
      int phases = (k == 0) ? 1 : 2;
      for (int phase = 0; phase < phases; ++phase) {
        TripleNormContext::Element el;
        el.mode_abs = k;
        el.eig_index = i;
        el.phase = phase;
        el.abs_eig = lam;
        double mass = (k == 0) ? g.window() : 2.0 * g.window();
        el.scale = 1.0 / std::sqrt(mass * lam);
        ++pos;
        int expo = -static_cast<int>(pos) - 1;
        el.weight = expo > -1080 ? std::ldexp(1.0, expo) : 0.0;
        ctx.elements.push_back(el);
      }
    }
  }
  return ctx;
}

CMat TripleNormContext::basis_state(std::size_t j) const {
  const SpectralGrid& g = symbol->grid;
  const Element& el = elements.at(j);
  CMat c = CMat::Zero(g.dim, g.n());
  const ModeData& md = symbol->modes[g.M + el.mode_abs];
  Complex amp = el.phase == 0 ? Complex(el.scale, 0.0) : Complex(0.0, el.scale);
  c.col(g.M + el.mode_abs) = amp * md.U.col(el.eig_index);
  if (el.mode_abs > 0)
    c.col(g.M - el.mode_abs) = c.col(g.M + el.mode_abs).conjugate();
  return c;
}

double triple_norm(const TripleNormContext& ctx, const SplitState& s) {
  const OperatorSymbol& sym = *ctx.symbol;
  const SpectralGrid& g = sym.grid;
  const double w = sym.quad_weight();
  KahanSum minus_sum;
  for (const auto& el : ctx.elements) {
    if (el.weight == 0.0) break;  // exact zeros from here on
    const ModeData& md = sym.modes[g.M + el.mode_abs];
    Complex proj = (md.U.col(el.eig_index).adjoint() * s.minus.col(g.M + el.mode_abs))(0, 0);
    double inner;
    if (el.mode_abs == 0)
      inner = w * el.abs_eig * el.scale * proj.real();
    else if (el.phase == 0)
      inner = 2.0 * w * el.abs_eig * el.scale * proj.real();
    else
      inner = 2.0 * w * el.abs_eig * el.scale * proj.imag();
    minus_sum.add(el.weight * std::abs(inner));
  }
  return std::max(norm_plus(s), minus_sum.value());
}

}  // namespace hamlink
