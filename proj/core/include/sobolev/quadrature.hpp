#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace sobolev {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;  ///< error floor for integrands that cancel to roundoff level
  std::size_t max_evaluations = 1'000'000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  ///< summed Gauss-Kronrod error estimate
  std::size_t evaluations = 0;
};

/// Options used by every quadrature call on the current thread.
const QuadratureOptions& current_quadrature();

/// Installs quadrature options for the lifetime of the guard (thread-local, nests).
class ScopedQuadrature {
 public:
  explicit ScopedQuadrature(const QuadratureOptions& options);
  ~ScopedQuadrature();
  ScopedQuadrature(const ScopedQuadrature&) = delete;
  ScopedQuadrature& operator=(const ScopedQuadrature&) = delete;

 private:
  QuadratureOptions saved_;
};

/// Adaptive Gauss-Kronrod integral of f over [a, b]; b may be +infinity.
///
/// The interval is split at every breakpoint strictly inside (a, b). A semi-infinite
/// last piece [c, inf) is mapped with r = c / (1 - t)^4, which keeps integrands with
/// algebraic decay r^{-k}, k >= 5/4, bounded. Throws NumericError when the summed error
/// estimate exceeds the tolerance or the evaluation cap is hit.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints = {},
                           const QuadratureOptions& options = current_quadrature());

}  // namespace sobolev
