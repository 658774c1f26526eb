#pragma once

#include <cstddef>
#include <vector>

#include "sobolev/bubble.hpp"
#include "sobolev/params.hpp"
#include "sobolev/radial_profile.hpp"

namespace sobolev {

struct ProjectionResult {
  double c_opt = 0.0;
  double lambda_opt = 1.0;
  double distance = 0.0;  ///< ||grad(u - c_opt U_{lambda_opt})||_p
  std::size_t evaluations = 0;
  bool converged = false;
};

struct ProjectionOptions {
  double lambda_min = 1e-3;
  double lambda_max = 1e3;
  std::size_t lambda_grid = 25;  ///< logarithmic coarse grid points over [lambda_min, lambda_max]
  double x_tol = 1e-8;           ///< in (c / c_scale, log lambda)
  std::size_t max_evaluations = 2000;
};

/// ||grad(u - c U_lambda)||_p over the whole space.
double projection_objective(const RadialProfile& u, const Params& params, const BubbleSpec& bubble);

/// Distance from u to the radial extremal manifold {c U_{lambda,0}}.
///
/// A coarse logarithmic scan in lambda, with c started from the p-linearized fit, seeds a
/// Nelder-Mead search in (c, log lambda). A search that hits the evaluation cap or leaves
/// the lambda box returns converged = false.
ProjectionResult project(const RadialProfile& u, const Params& params, const ProjectionOptions& options = {});

/// u = c U_lambda + d w with ||grad w||_p = 1 (w = 0 when d = 0).
struct Decomposition {
  BubbleSpec bubble;
  double d = 0.0;
  RadialProfile w;
};

Decomposition decompose(const RadialProfile& u, const Params& params, const ProjectionResult& projection);

/// The radial tangent directions {U_lambda, dU_lambda/dlambda} at spec (c is ignored).
std::vector<RadialProfile> tangent_basis(const Params& params, const BubbleSpec& spec);

struct OrthogonalityResiduals {
  double gradient = 0.0;  ///< int |grad U_lambda|^{p-2} grad U_lambda . grad w
  double weighted = 0.0;  ///< int U_lambda^{p*-1} w
  double lambda = 0.0;    ///< int U_lambda^{p*-2} (dU_lambda/dlambda) w
  [[nodiscard]] double max_abs() const;
};

OrthogonalityResiduals orthogonality_residuals(const Params& params, const BubbleSpec& bubble,
                                               const RadialProfile& w);
OrthogonalityResiduals orthogonality_residuals(const Params& params, const Decomposition& dec);

/// seed - a U_lambda - b dU_lambda/dlambda with (a, b) chosen so that the weighted and
/// lambda pairings vanish, scaled to unit gradient L^p norm.
RadialProfile make_orthogonal_perturbation(const RadialProfile& seed, const Params& params,
                                           const BubbleSpec& spec);

}  // namespace sobolev
