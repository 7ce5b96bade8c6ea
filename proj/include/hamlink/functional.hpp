#pragma once

#include <memory>

#include "hamlink/problem.hpp"
#include "hamlink/spectral.hpp"

namespace hamlink {

// Everything needed to evaluate the action and its gradient on one grid:
// the problem data, the assembled symbol, the transform, and the weight
// tabulated on the oversampled nonlinear grid.
struct FunctionalContext {
  ProblemSpec problem;
  SpectralGrid grid;
  std::shared_ptr<const OperatorSymbol> symbol;
  std::shared_ptr<const FourierTransform> transform;
  Vec gamma_os;      // Gamma at oversampled points
  Vec gamma_base;    // Gamma at collocation points
  int dealias_factor = 2;
};

// Assembles the symbol (throws HyperbolicityError if the certificate in
// `problem` failed) and tabulates the weight.
FunctionalContext make_context(const ProblemSpec& problem, const SpectralGrid& grid);

// Action value J(z) = 1/2 ||z+||^2 - 1/2 ||z-||^2 - int Gamma F(z)
//                     + lambda int Gamma G(z).
// Nonlinear integrals use dealiased collocation quadrature with
// compensated summation.
double action(const FunctionalContext& ctx, const SplitState& z);

// Directional derivative J'(z)(v).
double derivative(const FunctionalContext& ctx, const SplitState& z,
                  const SplitState& v);

struct GradientReport {
  double value = 0.0;            // J(z)
  SplitState gradient;           // Riesz representative in the X inner product
  double derivative_norm = 0.0;  // ||J'(z)|| = X-norm of the representative
  double cerami = 0.0;           // (1 + ||z||) ||J'(z)||
};

// Riesz gradient: per mode |M(omega)|^{-1} applied to the L2 gradient of the
// nonlinear part, combined with z+ - z-.
GradientReport gradient(const FunctionalContext& ctx, const SplitState& z);

struct PhiQuantity {
  Vec pointwise;   // Phi(z(t)) on the oversampled grid
  double integral; // int Gamma(t) Phi(z(t)) dt
};

// Phi(z) = 1/2 f(z).z - F(z) + lambda G(z) - lambda/2 g(z).z; its weighted
// integral equals J(z) - 1/2 J'(z)(z).
PhiQuantity phi_quantity(const FunctionalContext& ctx, const SplitState& z);

}  // namespace hamlink
