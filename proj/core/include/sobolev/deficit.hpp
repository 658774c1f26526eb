#pragma once

#include <map>
#include <optional>
#include <string>

#include "sobolev/params.hpp"
#include "sobolev/projection.hpp"
#include "sobolev/radial_profile.hpp"

namespace sobolev {

struct DeficitValue {
  double value = 0.0;   ///< raw, or 0 when the raw value is a clamped roundoff negative
  double raw = 0.0;     ///< ||grad u||_p^p - S^p ||u||_{p*}^p as computed
  bool clamped = false; ///< raw was in [-1e-10 ||grad u||_p^p, 0)
};

/// ||grad u||_p^p - S^p ||u||_{p*}^p over dom, with the roundoff clamp recorded.
DeficitValue evaluate_deficit(const RadialProfile& u, const Params& params, const DomainBall& dom);

/// evaluate_deficit(...).value.
double deficit(const RadialProfile& u, const Params& params, const DomainBall& dom);

/// |Omega|^{-gamma/(p*(p-1))} ||u||_{w,p_bar}^gamma ||u||_{p*}^{p-gamma}.
/// HypothesisError unless p > 2N/(N+1); DomainError on the whole space or for u = 0.
double remainder_thm11(const RadialProfile& u, const Params& params, const DomainBall& dom);

/// |Omega|^{-gamma(p*-t)/(t p*)} ||u||_t^gamma ||u||_{p*}^{p-gamma} for 0 < t < p_bar.
double remainder_cor12(const RadialProfile& u, double t, const Params& params, const DomainBall& dom);

/// distance^zeta ||grad u||_p^{p-zeta}, the upper cap without its constant.
double thm13_upper_cap(double distance, double grad_norm, const Params& params);
double thm13_upper_cap(const RadialProfile& u, const Params& params);

struct StabilityFunctionals {
  double distance = 0.0;
  bool converged = false;
  double lhs_1_8 = 0.0;  ///< ||grad u||_p / ||u||_{p*} - S
  double rhs_1_8 = 0.0;  ///< (distance / ||grad u||_p)^gamma
  double lhs_1_9 = 0.0;  ///< the deficit
  double rhs_1_9 = 0.0;  ///< distance^gamma ||grad u||_p^{p-gamma}
  std::optional<double> ratio_1_8;  ///< empty on the manifold
  std::optional<double> ratio_1_9;
};

/// Relative distance below which u counts as a manifold point and ratios are undefined.
inline constexpr double manifold_distance_tol = 1e-6;

/// Whole-space stability functionals, using project() for the distance.
StabilityFunctionals fz_lower_functionals(const RadialProfile& u, const Params& params);

struct DeficitReport {
  double grad_p = 0.0;
  double crit = 0.0;
  double weak = 0.0;
  double deficit = 0.0;
  bool deficit_clamped = false;
  double remainder_thm11 = 0.0;      ///< NaN on the whole space or when p <= 2N/(N+1)
  double remainder_thm13_cap = 0.0;
  double distance = 0.0;
  bool projection_converged = false;
  std::map<std::string, double> ratios;  ///< only the defined ones: thm11, thm13, fz18, fz19
};

DeficitReport deficit_report(const RadialProfile& u, const Params& params, const DomainBall& dom);

struct ProofConstants {
  double c0 = 0.0;
  double C0 = 0.0;
  double rho = 0.0;
  double C_under = 0.0;
  double B = 0.0;
  double K = 0.0;  ///< rho / (c0 - rho)
  /// C_under and B rebuilt from the exact tail integral (p-1)/N and the measure factor
  /// N^{1/(p*(p-1))} of |B_R|; both are diagnostics next to the displayed forms.
  double C_under_consistent = 0.0;
  double B_consistent = 0.0;
};

/// rho from rho ||grad U|| / ((c0 - rho) S) = U(0) (|S^{N-1}| tail(1))^{1/p*}, then
/// C_under = (c0 - rho) S U(0) / ||grad U|| (2^{-N} |S^{N-1}| N/(p-1))^{1/p*} and
/// B = (C0 + rho) ||U||_w / (C_under |S^{N-1}|^{1/(p*(p-1))} S^{p*/(p*-p)}) + 1/S.
ProofConstants proof_constants(const Params& params, double c0, double C0);

struct LemmaCheckOptions {
  double deficit_threshold = 0.1;        ///< small deficit means deficit < threshold * S^p
  double normalization_tol = 1e-6;       ///< | ||u||_{p*} - 1 |
};

struct LemmaCheck {
  double lhs = 0.0;  ///< ||u||_{w,p_bar} on B_R
  double rhs = 0.0;  ///< B |B_R|^{1/(p*(p-1))} distance
  double rhs_consistent = 0.0;
  double distance = 0.0;
  double deficit = 0.0;
  bool below_rho = false;  ///< distance < rho, the regime the constants are built for
  bool holds = false;
};

/// Weak-norm control of a normalized radial decreasing u on B_R by its manifold distance.
/// HypothesisError names the first failed precondition.
LemmaCheck lemma21_check(const RadialProfile& u, const Params& params, const DomainBall& dom,
                         const ProofConstants& consts, const LemmaCheckOptions& options = {});

struct TailCheck {
  double exact = 0.0;      ///< ||U_lambda||_{p*}^{p*} outside B_R
  double bound = 0.0;      ///< 2^{-N} U(0)^{p*} |S^{N-1}| (p-1)/N (lambda R)^{-N/(p-1)}
  double displayed = 0.0;  ///< the same with N/(p-1) in place of (p-1)/N
  bool lambdaR_ge_1 = false;
  [[nodiscard]] bool holds() const { return exact >= bound; }
};

/// HypothesisError when lambda R < 1.
TailCheck tail_lower_bound_check(const Params& params, double lambda, double R);

/// N/((p-1) p*) - (N-p)/(p(p-1)): the tail exponent after taking the p*-th root. Zero up to rounding.
double tail_exponent_mismatch(const Params& params);

struct ExpansionBound {
  double deficit_value = 0.0;
  double bound_value = 0.0;
  double constant = 0.0;  ///< C (p >= 2) or gamma_p (p < 2)
  [[nodiscard]] bool holds(double rel_slack = 1e-6) const {
    return deficit_value <= bound_value * (1.0 + rel_slack);
  }
};

/// Deficit of c U_lambda + d w against C d^2 (p >= 2) or gamma_p d^p (1 < p < 2).
/// HypothesisError when an orthogonality residual of w exceeds 1e-4.
ExpansionBound upper_expansion_bound(const Decomposition& dec, const Params& params);

struct CritLowerBound {
  double lhs = 0.0;  ///< ||c U_lambda + d w||_{p*}^p
  double rhs = 0.0;  ///< |c|^p ||U||_{p*}^p
  [[nodiscard]] bool holds(double rel_slack = 1e-6) const { return lhs >= rhs * (1.0 - rel_slack); }
};

CritLowerBound unit_lower_bound_crit(const Decomposition& dec, const Params& params);

}  // namespace sobolev
