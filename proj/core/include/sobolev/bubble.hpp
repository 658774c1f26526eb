#pragma once

#include "sobolev/params.hpp"

namespace sobolev {

/// Parameters of the radial extremal c * U_{lambda,0}(r) = c lambda^{(N-p)/p} U(lambda r).
struct BubbleSpec {
  double c = 1.0;
  double lambda = 1.0;
};

/// Whole-space quantities of the unit extremal U (c = 1, lambda = 1).
struct BubbleConstants {
  double normalization = 0.0;  ///< U(0), the factor making U solve the critical equation
  double grad_norm = 0.0;      ///< ||grad U||_p
  double crit_norm = 0.0;      ///< ||U||_{p*}
  double sharp_constant = 0.0; ///< S(N, p) = ||grad U||_p / ||U||_{p*}
  double weak_norm = 0.0;      ///< ||U|| in weak L^{p_bar}; +infinity when p <= 2N/(N+1)
  bool weak_norm_finite = false;
  double sphere = 0.0;         ///< |S^{N-1}|

  /// Sharp constant from the power identity ||grad U||_p = S^{p*/(p*-p)}.
  [[nodiscard]] double sharp_constant_from_power(const Params& params) const;
};

/// The unique positive U(0) for which U solves -div(|grad u|^{p-2} grad u) = u^{p*-1}.
double normalization_gamma(const Params& params);

double bubble_value(const Params& params, const BubbleSpec& spec, double r);
double bubble_derivative(const Params& params, const BubbleSpec& spec, double r);
/// Second radial derivative; unbounded at r = 0 when p > 2.
double bubble_second_derivative(const Params& params, const BubbleSpec& spec, double r);

/// d/d(lambda) of c U_{lambda,0}(r) and its radial derivative.
double bubble_lambda_derivative(const Params& params, const BubbleSpec& spec, double r);
double bubble_lambda_derivative_slope(const Params& params, const BubbleSpec& spec, double r);

/// -r^{1-N} (r^{N-1} |u'|^{p-2} u')' - |u|^{p*-2} u for u = c U_{lambda,0}; requires r > 0.
double bubble_residual(const Params& params, const BubbleSpec& spec, double r);

/// Norms of U by radial quadrature, cached per (N, p, quadrature tolerance).
BubbleConstants bubble_constants(const Params& params);

/// Integral of r^{N-1} (1 + r^{p/(p-1)})^{-N} over [a, infinity).
double tail_integral(const Params& params, double a);

}  // namespace sobolev
