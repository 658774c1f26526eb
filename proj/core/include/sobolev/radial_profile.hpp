#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sobolev/bubble.hpp"
#include "sobolev/params.hpp"

namespace sobolev {

enum class ProfileKind {
  AnalyticBubble,
  TruncatedBubble,
  BubblePlusPerturbation,
  Sampled,
  Plateau,
  Custom,
};

std::string to_string(ProfileKind kind);

/// Centered ball B_R in R^N; R = +infinity stands for the whole space.
struct DomainBall {
  int N = 3;
  double R = std::numeric_limits<double>::infinity();
  double measure = std::numeric_limits<double>::infinity();

  static DomainBall ball(int N, double R);
  static DomainBall whole_space(int N);
  [[nodiscard]] bool bounded() const { return R < std::numeric_limits<double>::infinity(); }
};

/// An evaluable radial function u(r) together with u'(r).
///
/// value() and derivative() return 0 for r > support_radius(). Breakpoints mark radii
/// where the profile or its derivative is not smooth and are used to split quadrature.
/// Profiles are immutable; copies share their evaluators.
class RadialProfile {
 public:
  using Function = std::function<double(double)>;

  RadialProfile(ProfileKind kind, Function value, Function derivative,
                double support_radius = std::numeric_limits<double>::infinity(),
                std::vector<double> breakpoints = {});

  [[nodiscard]] double value(double r) const {
    return r > support_ ? 0.0 : value_(r);
  }
  [[nodiscard]] double derivative(double r) const {
    return r > support_ ? 0.0 : derivative_(r);
  }
  [[nodiscard]] double support_radius() const { return support_; }
  [[nodiscard]] ProfileKind kind() const { return kind_; }
  [[nodiscard]] std::span<const double> breakpoints() const { return breakpoints_; }

  /// Radius grid of a sampled profile (empty otherwise).
  [[nodiscard]] std::span<const double> grid() const;

  [[nodiscard]] RadialProfile scaled(double alpha) const;

  /// a * u + b * v; the support is the larger of the two.
  friend RadialProfile combine(double a, const RadialProfile& u, double b, const RadialProfile& v,
                               ProfileKind kind);

 private:
  friend RadialProfile sampled_profile(std::vector<double> radii, std::vector<double> values,
                                       std::vector<double> derivatives);

  ProfileKind kind_;
  Function value_;
  Function derivative_;
  double support_;
  std::vector<double> breakpoints_;
  std::shared_ptr<const std::vector<double>> grid_;
};

RadialProfile combine(double a, const RadialProfile& u, double b, const RadialProfile& v,
                      ProfileKind kind = ProfileKind::Custom);

/// c U_{lambda,0} on the whole space.
RadialProfile bubble_profile(const Params& params, const BubbleSpec& spec);

/// (U_lambda - U_lambda(R))_+ supported in B_R, optionally scaled by `scale`.
RadialProfile truncated_bubble(const Params& params, double lambda, double R, double scale = 1.0);

/// height on [0, a], C^2 quintic step down to 0 on [a, b], 0 beyond.
RadialProfile plateau_profile(double height, double a, double b);

/// C^2 bump supported on [a, b] with peak `height` at the midpoint.
RadialProfile bump_profile(double a, double b, double height = 1.0);

/// u = c constant on B_R (value c for r <= R).
RadialProfile constant_profile(double c, double R);

/// Monotone-preserving cubic interpolant through (radii, values). The grid must be
/// strictly increasing; support is the last radius. When derivatives are supplied
/// a cubic Hermite interpolant through them is used instead.
RadialProfile sampled_profile(std::vector<double> radii, std::vector<double> values,
                              std::vector<double> derivatives = {});

/// Two- or three-column CSV with header `# N=<n> p=<p> R=<r>`.
struct ProfileFile {
  int N = 3;
  double p = 2.0;
  double R = std::numeric_limits<double>::infinity();
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> derivatives;  ///< empty when the file has two columns

  [[nodiscard]] RadialProfile profile() const;
};

ProfileFile read_profile_csv(std::istream& in);
ProfileFile read_profile_csv(const std::string& path);
void write_profile_csv(std::ostream& out, const ProfileFile& file);

/// Samples `u` on `radii` into a ProfileFile (derivative column included).
ProfileFile sample_profile(const RadialProfile& u, std::span<const double> radii, int N, double p,
                           double R);

}  // namespace sobolev
