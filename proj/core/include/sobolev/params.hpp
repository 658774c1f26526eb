#pragma once

namespace sobolev {

/// Dimension, gradient exponent and the exponents derived from them.
struct Params {
  int N = 3;
  double p = 2.0;
  double p_star = 6.0;  ///< critical exponent pN/(N-p)
  double p_bar = 3.0;   ///< critical remainder exponent p*(p-1)/p
  double gamma = 2.0;   ///< max{2, p}: exponent of the stability lower bound
  double zeta = 2.0;    ///< min{2, p}: exponent of the deficit upper bound
  bool weak_norm_valid = true;  ///< p > 2N/(N+1), equivalently p_bar > 1

  /// (N - p) / p, the dilation weight of the extremal family.
  [[nodiscard]] double scaling_exponent() const { return (N - p) / p; }
  /// p / (p - 1), the Hölder conjugate of p.
  [[nodiscard]] double conjugate() const { return p / (p - 1.0); }
};

/// Builds a Params; throws ParameterDomainError when N < 2 or p is not in (1, N).
Params derive_params(int N, double p);

/// Surface measure 2 pi^{N/2} / Gamma(N/2) of the unit sphere in R^N.
double sphere_measure(int N);

/// Volume of the ball of radius R in R^N (infinity for R = infinity).
double ball_measure(int N, double R);

}  // namespace sobolev
