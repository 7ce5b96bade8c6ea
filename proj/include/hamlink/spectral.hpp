#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "hamlink/common.hpp"

namespace hamlink {

// Raised when the per-mode symbol is (numerically) singular, i.e. the
// positive/negative splitting is undefined.
struct HyperbolicityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Periodic window [-T, T), trigonometric modes omega_k = pi k / T for
// k = -M..M, and 2M+1 equispaced collocation points. T is kept integer so
// integer time shifts and the 1-periodic weight commute with the grid.
struct SpectralGrid {
  int T = 20;
  int M = 512;
  int dim = 2;

  int n() const { return 2 * M + 1; }
  int n_os() const { return 2 * n(); }  // 2x oversampled nonlinear grid
  double window() const { return 2.0 * T; }
  double spacing() const { return window() / n(); }
  double spacing_os() const { return window() / n_os(); }
  // Mode index m in [0, 2M] maps to wavenumber k = m - M.
  double freq(int m) const { return M_PI * (m - M) / T; }
  double point(int j) const { return -T + j * spacing(); }
  double point_os(int j) const { return -T + j * spacing_os(); }
};

SpectralGrid make_grid(int T, int M, int dim);

// FFT bridge between collocation values and centered-mode coefficients.
// Layout: values are dim x n (row = component), coefficients are dim x n
// complex with column m holding mode k = m - M. Real trajectories satisfy
// coeff(:, M - k) = conj(coeff(:, M + k)); the from-values paths enforce
// that exactly.
class FourierTransform {
 public:
  explicit FourierTransform(const SpectralGrid& grid);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  const SpectralGrid& grid() const { return grid_; }

  CMat to_coeffs(const Mat& values) const;
  Mat to_values(const CMat& coeffs) const;
  Mat to_values_oversampled(const CMat& coeffs) const;
  // Projects oversampled-grid values back onto the retained modes.
  CMat from_values_oversampled(const Mat& values_os) const;

 private:
  SpectralGrid grid_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

// Per-mode data of the Fourier multiplier M(omega) = -i omega J - A.
struct ModeData {
  CMat symbol;   // M(omega_k), Hermitian
  Vec eigs;      // real eigenvalues, ascending
  CMat U;        // unitary eigenvectors, columns match eigs
  CMat Pplus;    // projector onto positive eigenspace
  CMat Pminus;   // projector onto negative eigenspace
  CMat absM;     // |M(omega_k)|
  CMat absMinv;  // |M(omega_k)|^{-1}
};

struct OperatorSymbol {
  SpectralGrid grid;
  std::vector<ModeData> modes;  // size n(), centered mode order
  double mu0 = 0.0;             // min over modes/components of sqrt|eig|
  double tol_hyp = 1e-10;

  const ModeData& mode(int m) const { return modes[m]; }
  // Parseval weight: integrals over the window are 2T * coefficient sums.
  double quad_weight() const { return grid.window(); }
};

// Eigen-decomposes the symbol on every mode. Throws HyperbolicityError if
// any eigenvalue magnitude falls to tol_hyp or below.
OperatorSymbol assemble_symbol(const SpectralGrid& grid, const Mat& A,
                               double tol_hyp = 1e-10);

// A trajectory with its X+/X- decomposition and cached subspace norms.
struct SplitState {
  CMat coeffs;
  CMat plus;
  CMat minus;
  double norm_plus_cached = 0.0;
  double norm_minus_cached = 0.0;
};

// Applies the per-mode spectral projectors. Throws std::invalid_argument if
// the coefficients violate the reality constraint beyond reality_tol.
SplitState split(const OperatorSymbol& symbol, const CMat& coeffs,
                 double reality_tol = 1e-9);

// Builds a SplitState from real collocation values.
SplitState state_from_values(const OperatorSymbol& symbol,
                             const FourierTransform& ft, const Mat& values);

SplitState zero_state(const OperatorSymbol& symbol);

double norm_plus(const SplitState& s);
double norm_minus(const SplitState& s);
double norm_x(const SplitState& s);

// Independent route to ||z||^2 through |M| on the full coefficients.
double norm_x_direct(const OperatorSymbol& symbol, const CMat& coeffs);

// Quadratic form integral((-J z' - A z) . z) evaluated directly from A and J,
// bypassing the eigen-machinery.
double quadratic_form_direct(const SpectralGrid& grid, const Mat& A,
                             const CMat& coeffs);

// Bilinear pairing 2T sum_k a_k^* M(omega_k) b_k (the form behind the
// X+/X- geometry).
double symbol_pairing(const OperatorSymbol& symbol, const CMat& a, const CMat& b);

// X inner product 2T sum_k a_k^* |M(omega_k)| b_k.
double x_inner(const OperatorSymbol& symbol, const CMat& a, const CMat& b);

// L2 inner product over the window.
double l2_inner(const OperatorSymbol& symbol, const CMat& a, const CMat& b);

// Collocation L^s norm on the oversampled grid, s >= 1.
double lq_norm(const FourierTransform& ft, const CMat& coeffs, double s);

double compute_mu0(const OperatorSymbol& symbol);

struct KappaEstimate {
  double kappa = 1.0;  // clamped to >= 1
  double raw_max = 0.0;
  int samples = 0;
  double s = 3.0;
};

// Monte-Carlo lower estimate of the L^s projection constant
// ||z^{+-}||_s <= kappa ||z||_s. Heuristic by nature; reported with its
// sample count.
KappaEstimate estimate_kappa(const OperatorSymbol& symbol,
                             const FourierTransform& ft, double s,
                             int samples, std::uint64_t seed = 2024);

// Random real trajectory with Gaussian coefficients under a spectral
// envelope; rough = flat envelope.
CMat random_coeffs(const SpectralGrid& grid, std::mt19937_64& rng,
                   bool rough = false);

// z(t + y) in coefficient space (exact phase multiplication).
CMat shift_coeffs(const SpectralGrid& grid, const CMat& coeffs, double y);
SplitState shift_state(const SpectralGrid& grid, const SplitState& s, double y);

// Weighted basis enumeration of the discretized X^- for the mixed
// strong/weak diagnostic norm max{||z^+||, sum_k 2^{-(k+1)} |<z^-, e_k>|}.
// Basis order: |omega| ascending, then eigenvalue magnitude, then the
// cosine phase before the sine phase of each mode pair.
struct TripleNormContext {
  struct Element {
    int mode_abs;    // k >= 0
    int eig_index;   // column into ModeData::U
    int phase;       // 0 = cosine, 1 = sine (absent for mode 0)
    double scale;    // X-normalization coefficient
    double abs_eig;
    double weight;   // 2^{-(position+1)}, 1-based position
  };
  std::shared_ptr<const OperatorSymbol> symbol;
  std::vector<Element> elements;

  // Materializes element j as a coefficient array (unit X-norm).
  CMat basis_state(std::size_t j) const;
};

TripleNormContext make_triple_norm_context(std::shared_ptr<const OperatorSymbol> symbol);

double triple_norm(const TripleNormContext& ctx, const SplitState& s);

}  // namespace hamlink
