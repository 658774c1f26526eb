#pragma once

#include <cstddef>

#include "sobolev/params.hpp"
#include "sobolev/radial_profile.hpp"

namespace sobolev {

/// (|S^{N-1}| int_0^R |u|^q r^{N-1} dr)^{1/q}. For 0 < q < 1 this is the L^q quasi-norm.
double lq_norm(const RadialProfile& u, double q, const DomainBall& dom);

/// (|S^{N-1}| int_0^R |u'|^p r^{N-1} dr)^{1/p}.
double grad_lp_norm(const RadialProfile& u, double p, const DomainBall& dom);

/// True when u is nonincreasing on a dense sample of its support within dom.
bool is_radially_nonincreasing(const RadialProfile& u, const DomainBall& dom);

struct RearrangeOptions {
  std::size_t geometric_levels = 512;  ///< levels between max(u) * level_floor and max(u)
  std::size_t uniform_levels = 512;    ///< evenly spaced levels in (0, max(u)]
  double level_floor = 1e-6;
  std::size_t radial_samples = 4000;
};

/// Symmetric decreasing rearrangement u* of a nonnegative radial u on B_R.
///
/// The distribution function mu(t) = |{u > t}| is evaluated on a level grid and
/// inverted to radii rho(t) = (N mu(t) / |S^{N-1}|)^{1/N}. The slope of u* at each
/// node follows from the coarea formula, and a monotone cubic Hermite interpolant is
/// built through the nodes. A profile that is already nonincreasing is returned as is.
RadialProfile rearrange(const RadialProfile& u, const DomainBall& dom,
                        const RearrangeOptions& options = {});

/// mu(t) = |{x in B_R : u(x) > t}| for radial u.
double distribution_function(const RadialProfile& u, double t, const DomainBall& dom);

struct WeakNorm {
  double value = 0.0;
  bool unbounded = false;  ///< the supremum grows without bound (whole space only)
  double radius = 0.0;     ///< radius of the maximizing ball (infinity for a limit at infinity)
};

/// sup over D of |D|^{-(s-1)/s} int_D |u|.
///
/// For nonincreasing u the candidates are centered balls. Otherwise the candidates are the
/// superlevel sets {|u| > t}, which are the balls of the rearrangement without building it.
/// On a bounded ball s must exceed 1. On the whole space any s > 0 is accepted and an
/// objective that keeps growing across six decades of radii is reported as unbounded.
WeakNorm weak_norm(const RadialProfile& u, double s, const DomainBall& dom);

/// sup_t t mu(t)^{1/s} on the rearrangement level grid; a cross-check of weak_norm only.
double classical_weak_norm(const RadialProfile& u, double s, const DomainBall& dom);

struct InequalitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  [[nodiscard]] bool holds(double rel_slack = 1e-8) const { return lhs <= rhs * (1.0 + rel_slack); }
};

/// ||u||_{w, p_bar} <= ||u||_{p*} |Omega|^{1/(p p_bar)}.
InequalitySides weak_norm_holder_bound(const RadialProfile& u, const DomainBall& dom,
                                       const Params& params);

/// ||u||_t <= (s/(s-t))^{1/t} |Omega|^{(s-t)/(s t)} ||u||_{w,s} for 0 < t < s, s > 1.
InequalitySides weak_to_strong(const RadialProfile& u, double t, double s, const DomainBall& dom);

/// The constant (s/(s-t))^{1/t} of weak_to_strong.
double weak_to_strong_constant(double t, double s);

}  // namespace sobolev
