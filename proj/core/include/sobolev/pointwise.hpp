#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sobolev {

struct VectorSample {
  std::vector<double> x;
  std::vector<double> y;
  double exponent = 2.0;
  std::optional<double> kappa;
};

struct ConstantEstimate {
  std::string name;  ///< "gamma_p" or "C1"
  double exponent = 0.0;
  std::optional<double> kappa;
  double value = 0.0;
  std::size_t samples = 0;
  VectorSample worst_sample;  ///< reduced pair (|x| = 1) at which the extremum was found
};

/// RHS - LHS of |x+y|^p <= |x|^p + p|x|^{p-2} x.y + p(p-1)/2 (|x|+|y|)^{p-2} |y|^2, p >= 2.
double check_311(std::span<const double> x, std::span<const double> y, double p);

/// RHS - LHS of |x+y|^p <= |x|^p + p|x|^{p-2} x.y + gamma |y|^p, 1 < p < 2.
double check_312(std::span<const double> x, std::span<const double> y, double p, double gamma);

/// |x|^{r-2}|y|^2 + (r-2)|w~|^{r-2}(|x| - |x+y|)^2 for 1 < r < 2 (nonnegative for x != 0).
double fz_quadratic_part(std::span<const double> x, std::span<const double> y, double r);

/// LHS - RHS of the lower expansion of |x+y|^r with constant C1: the omega-bar form for
/// r >= 2 and the omega-tilde form with min{|y|^r, |x|^{r-2}|y|^2} for 1 < r < 2.
/// kappa must lie in (0, 1]; kappa = 1 drops the quadratic correction.
double check_fz_lower(std::span<const double> x, std::span<const double> y, double r, double kappa, double C1);

/// |a+b|^r - |a|^r - r|a|^{r-2} a b.
double check_scalar_33(double a, double b, double r);

struct EstimateOptions {
  std::uint64_t seed = 0;
  std::size_t random_samples = 1'000'000;
  std::size_t grid_radial = 400;   ///< |y|/|x| log-spaced in [1e-4, 1e4]
  std::size_t grid_angular = 181;  ///< angle between x and y in [0, pi]
};

/// Least admissible gamma_p in check_312, times (1 + 1e-3). Cached per (p, options).
ConstantEstimate estimate_gamma_p(double p, const EstimateOptions& options = {});

/// Largest admissible C1 in check_fz_lower, times (1 - 1e-3). Cached per (r, kappa, options).
/// Throws EstimationFailure when the estimate is not positive.
ConstantEstimate estimate_C1(double r, double kappa, const EstimateOptions& options = {});

struct SweepReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;  ///< smallest margin / scale seen
  VectorSample worst;
};

/// Random checks over x, y in R^N drawn from seeded substreams (one per chunk of samples).
/// A violation is a margin below -tolerance * scale with scale = (|x| + |y|)^exponent.
SweepReport sweep_311(double p, int N, std::size_t samples, std::uint64_t seed, double tolerance = 1e-12);
SweepReport sweep_312(double p, double gamma, int N, std::size_t samples, std::uint64_t seed,
                      double tolerance = 1e-12);
SweepReport sweep_fz_lower(double r, double kappa, double C1, int N, std::size_t samples, std::uint64_t seed,
                           double tolerance = 1e-12);
SweepReport sweep_fz_quadratic_part(double r, int N, std::size_t samples, std::uint64_t seed,
                                    double tolerance = 1e-12);
SweepReport sweep_scalar_33(double r, std::size_t samples, std::uint64_t seed, double tolerance = 1e-14);

/// CSV table with header `name,r,kappa,value,samples`.
void write_constant_table(std::ostream& out, const std::vector<ConstantEstimate>& estimates);

}  // namespace sobolev
