#include "sobolev/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sobolev/errors.hpp"
#include "sobolev/optimize.hpp"
#include "sobolev/quadrature.hpp"
#include "sobolev/radial_calculus.hpp"

namespace sobolev {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> cuts_with(const RadialProfile& u, double lambda) {
  std::vector<double> cuts(u.breakpoints().begin(), u.breakpoints().end());
  const auto grid = u.grid();
  if (grid.size() <= 20000) cuts.insert(cuts.end(), grid.begin(), grid.end());
  cuts.push_back(1.0 / lambda);
  std::erase_if(cuts, [](double c) { return !(c > 0.0); });
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

// |S^{N-1}| int_0^inf f(r) r^{N-1} dr.
double space_integral(const Params& params, const std::function<double(double)>& f,
                      std::span<const double> cuts, double abs_tol = 0.0) {
  QuadratureOptions options = current_quadrature();
  options.abs_tol = std::max(options.abs_tol, abs_tol);
  const int N = params.N;
  const double value =
      integrate([&](double r) { return f(r) * std::pow(r, N - 1); }, 0.0, kInf, cuts, options).value;
  return sphere_measure(N) * value;
}

// E^p(c, lambda). The integrand |u' - c U_lambda'|^p carries roundoff of relative size eps
// in u' and c U_lambda', i.e. absolute noise up to p eps E^{p-1} G in the integral, where G
// bounds the gradient norms. A loose first pass estimates E and sets the error floor of the
// second pass above that noise; the floor (1e-9 G)^p covers E near 0.
double objective_power(const RadialProfile& u, const Params& params, double c, double lambda,
                       const std::vector<double>& base_cuts, double scale) {
  std::vector<double> cuts = base_cuts;
  cuts.push_back(1.0 / lambda);
  std::sort(cuts.begin(), cuts.end());
  const BubbleSpec unit{1.0, lambda};
  const double p = params.p;
  const double G = std::pow(scale, 1.0 / p);
  const double floor = std::pow(1e-9 * G, p);
  const auto integrand = [&](double r) {
    return std::pow(std::abs(u.derivative(r) - c * bubble_derivative(params, unit, r)), p);
  };
  QuadratureOptions loose = current_quadrature();
  loose.rel_tol = std::max(loose.rel_tol, 1e-6);
  double estimate;
  {
    ScopedQuadrature guard(loose);
    estimate = space_integral(params, integrand, cuts, floor);
  }
  const double E = std::pow(std::max(estimate, 0.0), 1.0 / p);
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * p * std::pow(E, p - 1.0) * G;
  return space_integral(params, integrand, cuts, std::max(floor, noise));
}

// Start value for c at fixed lambda: int |U_lambda'|^{p-2} U_lambda' u' / ||grad U||^p.
double linearized_c(const RadialProfile& u, const Params& params, double lambda,
                    const std::vector<double>& base_cuts, double grad_u_power) {
  std::vector<double> cuts = base_cuts;
  cuts.push_back(1.0 / lambda);
  std::sort(cuts.begin(), cuts.end());
  const BubbleSpec unit{1.0, lambda};
  const double p = params.p;
  const double num = space_integral(
      params,
      [&](double r) {
        const double b = bubble_derivative(params, unit, r);
        return std::pow(std::abs(b), p - 1.0) * (b < 0.0 ? -1.0 : 1.0) * u.derivative(r);
      },
      cuts, 1e-14 * grad_u_power);
  return num / std::pow(bubble_constants(params).grad_norm, p);
}

double weighted_pairing(const Params& params, const BubbleSpec& unit, const RadialProfile& w, double power,
                        const std::function<double(double)>& weight) {
  const auto cuts = cuts_with(w, unit.lambda);
  return space_integral(
      params, [&](double r) { return std::pow(bubble_value(params, unit, r), power) * weight(r) * w.value(r); },
      cuts, 1e-15);
}

}  // namespace

double OrthogonalityResiduals::max_abs() const {
  return std::max({std::abs(gradient), std::abs(weighted), std::abs(lambda)});
}

double projection_objective(const RadialProfile& u, const Params& params, const BubbleSpec& bubble) {
  const DomainBall space = DomainBall::whole_space(params.N);
  const double scale = std::pow(grad_lp_norm(u, params.p, space), params.p) +
                       std::pow(std::abs(bubble.c) * bubble_constants(params).grad_norm, params.p);
  const auto cuts = cuts_with(u, bubble.lambda);
  return std::pow(objective_power(u, params, bubble.c, bubble.lambda, cuts, scale), 1.0 / params.p);
}

ProjectionResult project(const RadialProfile& u, const Params& params, const ProjectionOptions& options) {
  const DomainBall space = DomainBall::whole_space(params.N);
  const double p = params.p;
  const double grad_u = grad_lp_norm(u, p, space);
  if (!(grad_u > 0.0) || !std::isfinite(grad_u)) {
    throw DomainError("project: gradient norm of the profile must be finite and positive");
  }
  const double grad_U = bubble_constants(params).grad_norm;
  const double grad_u_power = std::pow(grad_u, p);
  std::vector<double> base(u.breakpoints().begin(), u.breakpoints().end());
  if (u.grid().size() <= 20000) base.insert(base.end(), u.grid().begin(), u.grid().end());
  std::erase_if(base, [](double c) { return !(c > 0.0); });

  std::size_t evaluations = 0;
  auto energy = [&](double c, double lambda) {
    ++evaluations;
    const double scale = grad_u_power + std::pow(std::abs(c) * grad_U, p);
    return objective_power(u, params, c, lambda, base, scale);
  };

  // Coarse scan over log lambda.
  const double log_lo = std::log(options.lambda_min);
  const double log_hi = std::log(options.lambda_max);
  const std::size_t n = std::max<std::size_t>(options.lambda_grid, 2);
  double best_c = 0.0;
  double best_log = 0.0;
  double best_e = kInf;
  for (std::size_t k = 0; k < n; ++k) {
    const double log_lambda = log_lo + (log_hi - log_lo) * static_cast<double>(k) / (n - 1);
    const double lambda = std::exp(log_lambda);
    const double c = linearized_c(u, params, lambda, base, grad_u_power);
    const double e = energy(c, lambda);
    if (e < best_e) {
      best_e = e;
      best_c = c;
      best_log = log_lambda;
    }
  }

  const double c_scale = std::max(std::abs(best_c), 1e-3 * grad_u / grad_U);
  auto f = [&](const std::array<double, 2>& x) {
    const double e = energy(x[0] * c_scale, std::exp(x[1]));
    return std::pow(e, 1.0 / p);
  };
  NelderMeadOptions nm;
  nm.x_tol = options.x_tol;
  nm.max_evaluations = options.max_evaluations;
  const double log_step = 0.25 * (log_hi - log_lo) / (n - 1);
  const auto result = nelder_mead(f, {best_c / c_scale, best_log}, {0.1, log_step}, nm);

  ProjectionResult out;
  out.c_opt = result.x[0] * c_scale;
  out.lambda_opt = std::exp(result.x[1]);
  out.distance = std::pow(energy(out.c_opt, out.lambda_opt), 1.0 / p);
  out.evaluations = evaluations;
  const bool in_box = result.x[1] >= log_lo - 1e-12 && result.x[1] <= log_hi + 1e-12;
  out.converged = result.converged && in_box;
  return out;
}

Decomposition decompose(const RadialProfile& u, const Params& params, const ProjectionResult& projection) {
  const BubbleSpec bubble{projection.c_opt, projection.lambda_opt};
  const double d = projection.distance;
  const RadialProfile fitted = bubble_profile(params, bubble);
  if (!(d > 0.0)) {
    return {bubble, 0.0, RadialProfile(ProfileKind::Custom, [](double) { return 0.0; }, [](double) { return 0.0; })};
  }
  RadialProfile w = combine(1.0 / d, u, -1.0 / d, fitted, ProfileKind::Custom);
  return {bubble, d, std::move(w)};
}

std::vector<RadialProfile> tangent_basis(const Params& params, const BubbleSpec& spec) {
  if (!(spec.lambda > 0.0)) throw DomainError("tangent_basis: lambda must be positive");
  const BubbleSpec unit{1.0, spec.lambda};
  std::vector<RadialProfile> basis;
  basis.push_back(bubble_profile(params, unit));
  basis.emplace_back(
      ProfileKind::Custom, [params, unit](double r) { return bubble_lambda_derivative(params, unit, r); },
      [params, unit](double r) { return bubble_lambda_derivative_slope(params, unit, r); }, kInf,
      std::vector<double>{1.0 / spec.lambda});
  return basis;
}

OrthogonalityResiduals orthogonality_residuals(const Params& params, const BubbleSpec& bubble,
                                               const RadialProfile& w) {
  const BubbleSpec unit{1.0, bubble.lambda};
  const double p = params.p;
  OrthogonalityResiduals out;
  const auto cuts = cuts_with(w, bubble.lambda);
  out.gradient = space_integral(
      params,
      [&](double r) {
        const double b = bubble_derivative(params, unit, r);
        return std::pow(std::abs(b), p - 2.0) * b * w.derivative(r);
      },
      cuts, 1e-15);
  out.weighted = weighted_pairing(params, unit, w, params.p_star - 1.0, [](double) { return 1.0; });
  out.lambda = weighted_pairing(params, unit, w, params.p_star - 2.0,
                                [&](double r) { return bubble_lambda_derivative(params, unit, r); });
  return out;
}

OrthogonalityResiduals orthogonality_residuals(const Params& params, const Decomposition& dec) {
  return orthogonality_residuals(params, dec.bubble, dec.w);
}

RadialProfile make_orthogonal_perturbation(const RadialProfile& seed, const Params& params,
                                           const BubbleSpec& spec) {
  const DomainBall space = DomainBall::whole_space(params.N);
  const double seed_grad = grad_lp_norm(seed, params.p, space);
  if (!(seed_grad > 0.0) || !std::isfinite(seed_grad)) {
    throw DomainError("make_orthogonal_perturbation: seed gradient norm must be finite and positive");
  }
  const BubbleSpec unit{1.0, spec.lambda};
  const auto basis = tangent_basis(params, spec);
  const double ps = params.p_star;
  auto lambda_weight = [&](double r) { return bubble_lambda_derivative(params, unit, r); };
  auto one = [](double) { return 1.0; };
  // Pairings <v>_1 = int U^{p*-1} v and <v>_2 = int U^{p*-2} dU v against seed and basis.
  double G[2][2];
  double rhs[2];
  for (int j = 0; j < 2; ++j) {
    G[0][j] = weighted_pairing(params, unit, basis[j], ps - 1.0, one);
    G[1][j] = weighted_pairing(params, unit, basis[j], ps - 2.0, lambda_weight);
  }
  rhs[0] = weighted_pairing(params, unit, seed, ps - 1.0, one);
  rhs[1] = weighted_pairing(params, unit, seed, ps - 2.0, lambda_weight);
  const double det = G[0][0] * G[1][1] - G[0][1] * G[1][0];
  if (!(std::abs(det) > 0.0)) throw NumericError("make_orthogonal_perturbation: singular tangent Gram matrix", kInf);
  const double a = (rhs[0] * G[1][1] - G[0][1] * rhs[1]) / det;
  const double b = (G[0][0] * rhs[1] - G[1][0] * rhs[0]) / det;

  const RadialProfile tangent = combine(a, basis[0], b, basis[1]);
  const RadialProfile raw = combine(1.0, seed, -1.0, tangent, ProfileKind::Custom);
  const double norm = grad_lp_norm(raw, params.p, space);
  if (!(norm >= 1e-8 * seed_grad)) {
    throw DegeneratePerturbationError("make_orthogonal_perturbation: seed lies in the tangent space");
  }
  return raw.scaled(1.0 / norm);
}

}  // namespace sobolev
