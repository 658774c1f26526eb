#pragma once

#include <array>
#include <cstddef>
#include <functional>

namespace sobolev {

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
  std::size_t evaluations = 0;
};

/// Golden-section search for the maximum of a unimodal f on [a, b] to |b - a| <= tol.
ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double a, double b,
                                      double tol = 1e-10, std::size_t max_iterations = 200);

struct NelderMeadOptions {
  double x_tol = 1e-8;   ///< simplex diameter (max-norm) at termination
  double f_tol = 0.0;    ///< absolute spread of simplex values at termination
  std::size_t max_evaluations = 2000;
};

struct NelderMeadResult {
  std::array<double, 2> x{};
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Two-dimensional Nelder-Mead minimization from the simplex {x0, x0 + step_0 e_0, x0 + step_1 e_1}.
/// Deterministic: ties are broken by vertex order.
NelderMeadResult nelder_mead(const std::function<double(const std::array<double, 2>&)>& f,
                             std::array<double, 2> x0, std::array<double, 2> step,
                             const NelderMeadOptions& options = {});

}  // namespace sobolev
