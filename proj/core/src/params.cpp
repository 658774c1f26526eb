#include "sobolev/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sobolev/errors.hpp"

namespace sobolev {

Params derive_params(int N, double p) {
  if (N < 2) {
    throw ParameterDomainError("dimension N must satisfy N >= 2, got N=" + std::to_string(N));
  }
  if (!(p > 1.0)) {
    throw ParameterDomainError("exponent p must satisfy p > 1, got p=" + std::to_string(p));
  }
  if (!(p < N)) {
    throw ParameterDomainError("exponent p must satisfy p < N=" + std::to_string(N) +
                               ", got p=" + std::to_string(p));
  }
  Params out;
  out.N = N;
  out.p = p;
  out.p_star = p * N / (N - p);
  out.p_bar = out.p_star * (p - 1.0) / p;
  out.gamma = std::max(2.0, p);
  out.zeta = std::min(2.0, p);
  out.weak_norm_valid = out.p_bar > 1.0;
  return out;
}

double sphere_measure(int N) {
  const double half = 0.5 * N;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double ball_measure(int N, double R) {
  if (std::isinf(R)) return std::numeric_limits<double>::infinity();
  return sphere_measure(N) * std::pow(R, N) / N;
}

}  // namespace sobolev
