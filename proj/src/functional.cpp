#include "hamlink/functional.hpp"

#include <cmath>
#include <stdexcept>

namespace hamlink {

FunctionalContext make_context(const ProblemSpec& problem, const SpectralGrid& grid) {
  if (grid.dim != problem.dim())
    throw std::invalid_argument("make_context: grid dimension must match problem");
  if (!problem.hyperbolicity.pass)
    throw HyperbolicityError("make_context: problem failed the hyperbolicity check");
  FunctionalContext ctx;
  ctx.problem = problem;
  ctx.grid = grid;
  ctx.symbol = std::make_shared<OperatorSymbol>(assemble_symbol(grid, problem.A));
  ctx.transform = std::make_shared<FourierTransform>(grid);
  ctx.gamma_os.resize(grid.n_os());
  for (int j = 0; j < grid.n_os(); ++j)
    ctx.gamma_os(j) = problem.weight.gamma(grid.point_os(j));
  ctx.gamma_base.resize(grid.n());
  for (int j = 0; j < grid.n(); ++j)
    ctx.gamma_base(j) = problem.weight.gamma(grid.point(j));
  return ctx;
}

namespace {

void check_shape(const FunctionalContext& ctx, const SplitState& z, const char* who) {
  if (z.coeffs.rows() != ctx.grid.dim || z.coeffs.cols() != ctx.grid.n())
    throw std::invalid_argument(std::string(who) + ": state does not match context grid");
}

}  // namespace

double action(const FunctionalContext& ctx, const SplitState& z) {
  check_shape(ctx, z, "action");
  const auto& nl = ctx.problem.nonlinearity;
  Mat vals = ctx.transform->to_values_oversampled(z.coeffs);
  const double h = ctx.grid.spacing_os();
  KahanSum intF, intG;
  Vec point(ctx.grid.dim);
  for (int j = 0; j < vals.cols(); ++j) {
    point = vals.col(j);
    intF.add(h * ctx.gamma_os(j) * nl.F(point));
    if (ctx.problem.lambda != 0.0) intG.add(h * ctx.gamma_os(j) * nl.G(point));
  }
  double np = norm_plus(z), nm = norm_minus(z);
  return 0.5 * np * np - 0.5 * nm * nm - intF.value() + ctx.problem.lambda * intG.value();
}

double derivative(const FunctionalContext& ctx, const SplitState& z, const SplitState& v) {
  check_shape(ctx, z, "derivative");
  check_shape(ctx, v, "derivative");
  const auto& nl = ctx.problem.nonlinearity;
  double bilinear = symbol_pairing(*ctx.symbol, z.coeffs, v.coeffs);
  Mat zv = ctx.transform->to_values_oversampled(z.coeffs);
  Mat vv = ctx.transform->to_values_oversampled(v.coeffs);
  const double h = ctx.grid.spacing_os();
  KahanSum intf, intg;
  Vec point(ctx.grid.dim);
  for (int j = 0; j < zv.cols(); ++j) {
    point = zv.col(j);
    intf.add(h * ctx.gamma_os(j) * nl.f(point).dot(vv.col(j)));
    if (ctx.problem.lambda != 0.0)
      intg.add(h * ctx.gamma_os(j) * nl.g(point).dot(vv.col(j)));
  }
  return bilinear - intf.value() + ctx.problem.lambda * intg.value();
}

GradientReport gradient(const FunctionalContext& ctx, const SplitState& z) {
  check_shape(ctx, z, "gradient");
  const auto& nl = ctx.problem.nonlinearity;
  Mat vals = ctx.transform->to_values_oversampled(z.coeffs);
  Mat hvals(ctx.grid.dim, ctx.grid.n_os());
  const double h = ctx.grid.spacing_os();
  KahanSum intF, intG;
  Vec point(ctx.grid.dim);
  for (int j = 0; j < vals.cols(); ++j) {
    point = vals.col(j);
    Vec fz = nl.f(point);
    intF.add(h * ctx.gamma_os(j) * nl.F(point));
    if (ctx.problem.lambda != 0.0) {
      Vec gz = nl.g(point);
      intG.add(h * ctx.gamma_os(j) * nl.G(point));
      hvals.col(j) = ctx.gamma_os(j) * (fz - ctx.problem.lambda * gz);
    } else {
      hvals.col(j) = ctx.gamma_os(j) * fz;
    }
  }

  CMat hc = ctx.transform->from_values_oversampled(hvals);
  CMat gc(ctx.grid.dim, ctx.grid.n());
  for (int m = 0; m < ctx.grid.n(); ++m) {
    const ModeData& md = ctx.symbol->modes[m];
    gc.col(m) = z.plus.col(m) - z.minus.col(m) - md.absMinv * hc.col(m);
  }

  GradientReport rep;
  rep.gradient = split(*ctx.symbol, gc);
  double np = norm_plus(z), nm = norm_minus(z);
  rep.value = 0.5 * np * np - 0.5 * nm * nm - intF.value() +
              ctx.problem.lambda * intG.value();
  rep.derivative_norm = norm_x(rep.gradient);
  rep.cerami = (1.0 + norm_x(z)) * rep.derivative_norm;
  return rep;
}

PhiQuantity phi_quantity(const FunctionalContext& ctx, const SplitState& z) {
  check_shape(ctx, z, "phi_quantity");
  const auto& nl = ctx.problem.nonlinearity;
  const double lambda = ctx.problem.lambda;
  Mat vals = ctx.transform->to_values_oversampled(z.coeffs);
  const double h = ctx.grid.spacing_os();
  PhiQuantity out;
  out.pointwise.resize(vals.cols());
  KahanSum acc;
  Vec point(ctx.grid.dim);
  for (int j = 0; j < vals.cols(); ++j) {
    point = vals.col(j);
    double phi = 0.5 * nl.f(point).dot(point) - nl.F(point) +
                 lambda * (nl.G(point) - 0.5 * nl.g(point).dot(point));
    out.pointwise(j) = phi;
    acc.add(h * ctx.gamma_os(j) * phi);
  }
  out.integral = acc.value();
  return out;
}

}  // namespace hamlink
