#include "sobolev/deficit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sobolev/bubble.hpp"
#include "sobolev/errors.hpp"
#include "sobolev/pointwise.hpp"
#include "sobolev/radial_calculus.hpp"

namespace sobolev {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_weak_range(const Params& params) {
  if (!params.weak_norm_valid) {
    std::ostringstream msg;
    msg << "the weak-norm remainder requires p > 2N/(N+1) (N=" << params.N << ", p=" << params.p
        << ", 2N/(N+1)=" << 2.0 * params.N / (params.N + 1.0) << ")";
    throw HypothesisError(msg.str());
  }
}

void require_bounded(const DomainBall& dom) {
  if (!dom.bounded()) throw DomainError("the remainder needs a domain of finite measure");
}

DeficitValue deficit_from_norms(double grad, double crit, const Params& params) {
  const double S = bubble_constants(params).sharp_constant;
  const double gp = std::pow(grad, params.p);
  DeficitValue out;
  out.raw = gp - std::pow(S * crit, params.p);
  out.value = out.raw;
  if (out.raw < 0.0 && out.raw >= -1e-10 * gp) {
    out.value = 0.0;
    out.clamped = true;
  }
  return out;
}

bool on_manifold(double distance, double grad) {
  return distance <= manifold_distance_tol * grad;
}

}  // namespace

DeficitValue evaluate_deficit(const RadialProfile& u, const Params& params, const DomainBall& dom) {
  return deficit_from_norms(grad_lp_norm(u, params.p, dom), lq_norm(u, params.p_star, dom), params);
}

double deficit(const RadialProfile& u, const Params& params, const DomainBall& dom) {
  return evaluate_deficit(u, params, dom).value;
}

double remainder_thm11(const RadialProfile& u, const Params& params, const DomainBall& dom) {
  require_weak_range(params);
  require_bounded(dom);
  const double crit = lq_norm(u, params.p_star, dom);
  if (!(crit > 0.0)) throw DomainError("the remainder is undefined for u = 0");
  const double weak = weak_norm(u, params.p_bar, dom).value;
  const double g = params.gamma;
  return std::pow(dom.measure, -g / (params.p_star * (params.p - 1.0))) * std::pow(weak, g) *
         std::pow(crit, params.p - g);
}

double remainder_cor12(const RadialProfile& u, double t, const Params& params, const DomainBall& dom) {
  require_weak_range(params);
  require_bounded(dom);
  if (!(t > 0.0 && t < params.p_bar)) {
    std::ostringstream msg;
    msg << "the L^t remainder needs 0 < t < p_bar = " << params.p_bar << ", got t = " << t;
    throw DomainError(msg.str());
  }
  const double crit = lq_norm(u, params.p_star, dom);
  if (!(crit > 0.0)) throw DomainError("the remainder is undefined for u = 0");
  const double g = params.gamma;
  const double ps = params.p_star;
  return std::pow(dom.measure, -g * (ps - t) / (t * ps)) * std::pow(lq_norm(u, t, dom), g) *
         std::pow(crit, params.p - g);
}

double thm13_upper_cap(double distance, double grad_norm, const Params& params) {
  if (distance == 0.0) return 0.0;
  return std::pow(distance, params.zeta) * std::pow(grad_norm, params.p - params.zeta);
}

double thm13_upper_cap(const RadialProfile& u, const Params& params) {
  const auto whole = DomainBall::whole_space(params.N);
  const double grad = grad_lp_norm(u, params.p, whole);
  return thm13_upper_cap(project(u, params).distance, grad, params);
}

StabilityFunctionals fz_lower_functionals(const RadialProfile& u, const Params& params) {
  const auto whole = DomainBall::whole_space(params.N);
  const double grad = grad_lp_norm(u, params.p, whole);
  const double crit = lq_norm(u, params.p_star, whole);
  const auto proj = project(u, params);
  const double S = bubble_constants(params).sharp_constant;

  StabilityFunctionals out;
  out.distance = proj.distance;
  out.converged = proj.converged;
  out.lhs_1_8 = grad / crit - S;
  out.rhs_1_8 = std::pow(proj.distance / grad, params.gamma);
  out.lhs_1_9 = deficit_from_norms(grad, crit, params).value;
  out.rhs_1_9 = std::pow(proj.distance, params.gamma) * std::pow(grad, params.p - params.gamma);
  if (!on_manifold(proj.distance, grad)) {
    out.ratio_1_8 = out.lhs_1_8 / out.rhs_1_8;
    out.ratio_1_9 = out.lhs_1_9 / out.rhs_1_9;
  }
  return out;
}

DeficitReport deficit_report(const RadialProfile& u, const Params& params, const DomainBall& dom) {
  DeficitReport out;
  out.grad_p = grad_lp_norm(u, params.p, dom);
  out.crit = lq_norm(u, params.p_star, dom);
  const auto d = deficit_from_norms(out.grad_p, out.crit, params);
  out.deficit = d.value;
  out.deficit_clamped = d.clamped;
  out.weak = params.weak_norm_valid || !dom.bounded() ? weak_norm(u, params.p_bar, dom).value : kNaN;
  out.remainder_thm11 = params.weak_norm_valid && dom.bounded() && out.crit > 0.0
                            ? remainder_thm11(u, params, dom)
                            : kNaN;

  const auto proj = project(u, params);
  out.distance = proj.distance;
  out.projection_converged = proj.converged;
  out.remainder_thm13_cap = thm13_upper_cap(proj.distance, out.grad_p, params);

  if (std::isfinite(out.remainder_thm11) && out.remainder_thm11 > 0.0) {
    out.ratios["thm11"] = out.deficit / out.remainder_thm11;
  }
  if (!on_manifold(proj.distance, out.grad_p)) {
    const double S = bubble_constants(params).sharp_constant;
    out.ratios["thm13"] = out.deficit / out.remainder_thm13_cap;
    out.ratios["fz18"] = (out.grad_p / out.crit - S) / std::pow(proj.distance / out.grad_p, params.gamma);
    out.ratios["fz19"] = out.deficit / (std::pow(proj.distance, params.gamma) *
                                        std::pow(out.grad_p, params.p - params.gamma));
  }
  return out;
}

ProofConstants proof_constants(const Params& params, double c0, double C0) {
  if (!(c0 > 0.0 && c0 <= C0 && std::isfinite(C0))) {
    std::ostringstream msg;
    msg << "proof constants need 0 < c0 <= C0 < infinity, got c0 = " << c0 << ", C0 = " << C0;
    throw DomainError(msg.str());
  }
  require_weak_range(params);
  const auto bc = bubble_constants(params);
  const double S = bc.sharp_constant;
  const double g0 = bc.normalization;
  const double ps = params.p_star;
  const double N = params.N;
  const double p = params.p;

  ProofConstants out;
  out.c0 = c0;
  out.C0 = C0;
  out.K = S * g0 * std::pow(bc.sphere * tail_integral(params, 1.0), 1.0 / ps) / bc.grad_norm;
  out.rho = c0 * out.K / (1.0 + out.K);

  const double lead = (c0 - out.rho) * S * g0 / bc.grad_norm;
  out.C_under = lead * std::pow(std::pow(2.0, -N) * bc.sphere * N / (p - 1.0), 1.0 / ps);
  out.C_under_consistent = lead * std::pow(std::pow(2.0, -N) * bc.sphere * (p - 1.0) / N, 1.0 / ps);

  const double e = 1.0 / (ps * (p - 1.0));
  const double grad_power = std::pow(S, ps / (ps - p));
  auto build_B = [&](double c_under, double measure_factor) {
    return (C0 + out.rho) * bc.weak_norm * measure_factor /
               (c_under * std::pow(bc.sphere, e) * grad_power) +
           1.0 / S;
  };
  out.B = build_B(out.C_under, 1.0);
  out.B_consistent = build_B(out.C_under_consistent, std::pow(N, e));
  return out;
}

LemmaCheck lemma21_check(const RadialProfile& u, const Params& params, const DomainBall& dom,
                         const ProofConstants& consts, const LemmaCheckOptions& options) {
  require_weak_range(params);
  if (!dom.bounded()) throw HypothesisError("lemma check needs a bounded ball B_R");
  if (u.support_radius() > dom.R * (1.0 + 1e-12)) {
    throw HypothesisError("u must be supported in the closed ball B_R");
  }
  if (u.value(0.0) < 0.0 || !is_radially_nonincreasing(u, dom)) {
    throw HypothesisError("u must be nonnegative and radially nonincreasing");
  }
  const double grad = grad_lp_norm(u, params.p, dom);
  const double crit = lq_norm(u, params.p_star, dom);
  if (std::abs(crit - 1.0) > options.normalization_tol) {
    std::ostringstream msg;
    msg << "u must satisfy the normalization ||u||_{p*} = 1, got " << crit;
    throw HypothesisError(msg.str());
  }
  const double S = bubble_constants(params).sharp_constant;
  const double def = deficit_from_norms(grad, crit, params).value;
  if (!(def < options.deficit_threshold * std::pow(S, params.p))) {
    std::ostringstream msg;
    msg << "u must have small deficit (< " << options.deficit_threshold << " S^p), got " << def;
    throw HypothesisError(msg.str());
  }

  LemmaCheck out;
  out.deficit = def;
  out.lhs = weak_norm(u, params.p_bar, dom).value;
  out.distance = project(u, params).distance;
  const double measure = std::pow(dom.measure, 1.0 / (params.p_star * (params.p - 1.0)));
  out.rhs = consts.B * measure * out.distance;
  out.rhs_consistent = consts.B_consistent * measure * out.distance;
  out.below_rho = out.distance < consts.rho;
  out.holds = out.lhs <= out.rhs;
  return out;
}

TailCheck tail_lower_bound_check(const Params& params, double lambda, double R) {
  const double a = lambda * R;
  if (!(a >= 1.0)) {
    std::ostringstream msg;
    msg << "the tail bound needs lambda R >= 1, got " << a;
    throw HypothesisError(msg.str());
  }
  const auto bc = bubble_constants(params);
  const double N = params.N;
  const double p = params.p;
  const double front = std::pow(bc.normalization, params.p_star) * bc.sphere;
  TailCheck out;
  out.lambdaR_ge_1 = true;
  out.exact = front * tail_integral(params, a);
  const double decay = std::pow(2.0, -N) * front * std::pow(a, -N / (p - 1.0));
  out.bound = decay * (p - 1.0) / N;
  out.displayed = decay * N / (p - 1.0);
  return out;
}

double tail_exponent_mismatch(const Params& params) {
  const double p = params.p;
  const double N = params.N;
  return N / ((p - 1.0) * params.p_star) - (N - p) / (p * (p - 1.0));
}

ExpansionBound upper_expansion_bound(const Decomposition& dec, const Params& params) {
  const auto bc = bubble_constants(params);
  const double p = params.p;
  const double c = dec.bubble.c;
  const double d = dec.d;
  ExpansionBound out;
  if (d == 0.0) {
    out.constant = p >= 2.0 ? p * (p - 1.0) / 2.0 : estimate_gamma_p(p).value;
    return out;
  }
  const auto res = orthogonality_residuals(params, dec);
  if (res.max_abs() > 1e-4) {
    std::ostringstream msg;
    msg << "the perturbation is not orthogonal to the tangent space (residual " << res.max_abs() << ")";
    throw HypothesisError(msg.str());
  }
  const auto u = combine(1.0, bubble_profile(params, dec.bubble), d, dec.w,
                         ProfileKind::BubblePlusPerturbation);
  out.deficit_value = deficit(u, params, DomainBall::whole_space(params.N));
  if (p >= 2.0) {
    const double mass = std::pow(std::abs(c) * bc.grad_norm, p) + std::pow(d, p);
    out.constant = p * (p - 1.0) / 2.0 * std::pow(2.0, (p - 1.0) * (p - 2.0) / p) *
                   std::pow(mass, (p - 2.0) / p);
    out.bound_value = out.constant * d * d;
  } else {
    out.constant = estimate_gamma_p(p).value;
    out.bound_value = out.constant * std::pow(d, p);
  }
  return out;
}

CritLowerBound unit_lower_bound_crit(const Decomposition& dec, const Params& params) {
  const auto bc = bubble_constants(params);
  const auto u = combine(1.0, bubble_profile(params, dec.bubble), dec.d, dec.w,
                         ProfileKind::BubblePlusPerturbation);
  CritLowerBound out;
  out.lhs = std::pow(lq_norm(u, params.p_star, DomainBall::whole_space(params.N)), params.p);
  out.rhs = std::pow(std::abs(dec.bubble.c) * bc.crit_norm, params.p);
  return out;
}

}  // namespace sobolev
