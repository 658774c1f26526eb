#include "sobolev/bubble.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include "sobolev/errors.hpp"
#include "sobolev/quadrature.hpp"
#include "sobolev/radial_calculus.hpp"
#include "sobolev/radial_profile.hpp"

namespace sobolev {
namespace {

// Unit profile U(x) = g (1 + x^{p'})^{-(N-p)/p} and its x-derivatives.
struct UnitBubble {
  double g;
  double N;
  double p;
  double conj;  // p / (p - 1)
  double q;     // 1 / (p - 1)

  explicit UnitBubble(const Params& params)
      : g(normalization_gamma(params)),
        N(params.N),
        p(params.p),
        conj(params.conjugate()),
        q(1.0 / (params.p - 1.0)) {}

  [[nodiscard]] double value(double x) const {
    return g * std::pow(1.0 + std::pow(x, conj), -(N - p) / p);
  }
  [[nodiscard]] double slope(double x) const {
    if (x == 0.0) return 0.0;
    return -g * (N - p) / (p - 1.0) * std::pow(x, q) * std::pow(1.0 + std::pow(x, conj), -N / p);
  }
  [[nodiscard]] double curvature(double x) const {
    const double s = std::pow(x, conj);
    const double bracket = q * (1.0 + s) - N / (p - 1.0) * s;
    return -g * (N - p) / (p - 1.0) * std::pow(x, q - 1.0) * std::pow(1.0 + s, -N / p - 1.0) *
           bracket;
  }
};

double signed_pow(double x, double e) { return std::copysign(std::pow(std::abs(x), e), x); }

}  // namespace

double BubbleConstants::sharp_constant_from_power(const Params& params) const {
  return std::pow(grad_norm, (params.p_star - params.p) / params.p_star);
}

double normalization_gamma(const Params& params) {
  // Substituting g (1 + r^{p'})^{-(N-p)/p} into the critical equation leaves
  // g^{p*-p} = N ((N-p)/(p-1))^{p-1}.
  const double N = params.N;
  const double p = params.p;
  const double k = N * std::pow((N - p) / (p - 1.0), p - 1.0);
  return std::pow(k, 1.0 / (params.p_star - p));
}

double bubble_value(const Params& params, const BubbleSpec& spec, double r) {
  if (spec.c == 0.0) return 0.0;
  const UnitBubble u(params);
  return spec.c * std::pow(spec.lambda, params.scaling_exponent()) * u.value(spec.lambda * r);
}

double bubble_derivative(const Params& params, const BubbleSpec& spec, double r) {
  if (spec.c == 0.0) return 0.0;
  const UnitBubble u(params);
  return spec.c * std::pow(spec.lambda, params.scaling_exponent() + 1.0) * u.slope(spec.lambda * r);
}

double bubble_second_derivative(const Params& params, const BubbleSpec& spec, double r) {
  if (spec.c == 0.0) return 0.0;
  const UnitBubble u(params);
  return spec.c * std::pow(spec.lambda, params.scaling_exponent() + 2.0) *
         u.curvature(spec.lambda * r);
}

double bubble_lambda_derivative(const Params& params, const BubbleSpec& spec, double r) {
  const UnitBubble u(params);
  const double a = params.scaling_exponent();
  const double l = spec.lambda;
  const double x = l * r;
  return spec.c * (a * std::pow(l, a - 1.0) * u.value(x) + std::pow(l, a) * r * u.slope(x));
}

double bubble_lambda_derivative_slope(const Params& params, const BubbleSpec& spec, double r) {
  if (r == 0.0) return 0.0;
  const UnitBubble u(params);
  const double a = params.scaling_exponent();
  const double l = spec.lambda;
  const double x = l * r;
  return spec.c * ((a + 1.0) * std::pow(l, a) * u.slope(x) + std::pow(l, a + 1.0) * r * u.curvature(x));
}

double bubble_residual(const Params& params, const BubbleSpec& spec, double r) {
  if (!(r > 0.0)) throw DomainError("bubble_residual: radius must be positive");
  const double p = params.p;
  const double u = bubble_value(params, spec, r);
  const double du = bubble_derivative(params, spec, r);
  const double ddu = bubble_second_derivative(params, spec, r);
  // Radial p-Laplacian: (r^{N-1}|u'|^{p-2}u')' r^{1-N} = (p-1)|u'|^{p-2}u'' + (N-1)/r |u'|^{p-2}u'.
  const double w = std::pow(std::abs(du), p - 2.0);
  const double lap = (p - 1.0) * w * ddu + (params.N - 1.0) / r * w * du;
  return -lap - signed_pow(u, params.p_star - 1.0);
}

BubbleConstants bubble_constants(const Params& params) {
  using Key = std::tuple<int, double, double>;
  static std::mutex mutex;
  static std::map<Key, BubbleConstants> cache;

  const Key key{params.N, params.p, current_quadrature().rel_tol};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  BubbleConstants out;
  out.normalization = normalization_gamma(params);
  out.sphere = sphere_measure(params.N);
  const RadialProfile unit = bubble_profile(params, BubbleSpec{});
  const DomainBall space = DomainBall::whole_space(params.N);
  out.grad_norm = grad_lp_norm(unit, params.p, space);
  out.crit_norm = lq_norm(unit, params.p_star, space);
  out.sharp_constant = out.grad_norm / out.crit_norm;
  if (params.weak_norm_valid) {
    const WeakNorm w = weak_norm(unit, params.p_bar, space);
    out.weak_norm = w.value;
    out.weak_norm_finite = !w.unbounded;
  } else {
    out.weak_norm = std::numeric_limits<double>::infinity();
    out.weak_norm_finite = false;
  }

  std::lock_guard lock(mutex);
  return cache.emplace(key, out).first->second;
}

double tail_integral(const Params& params, double a) {
  if (!(a >= 0.0)) throw DomainError("tail_integral: lower limit must be nonnegative");
  const double N = params.N;
  const double conj = params.conjugate();
  const auto f = [&](double r) { return std::pow(r, N - 1.0) * std::pow(1.0 + std::pow(r, conj), -N); };
  const std::array<double, 1> cut{1.0};
  return integrate(f, a, std::numeric_limits<double>::infinity(), cut).value;
}

}  // namespace sobolev
