#include "sobolev/radial_profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

// pchip.hpp in Boost 1.74 calls unqualified isnan; math.h puts it in the global namespace.
#include <math.h>

#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include "sobolev/errors.hpp"

namespace sobolev {
namespace {

std::vector<double> merged(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", x);
  return buf;
}

double parse_double(const std::string& token) {
  if (token == "inf" || token == "+inf" || token == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw DomainError("profile csv: cannot parse number '" + token + "'");
  }
  if (used != token.size()) throw DomainError("profile csv: trailing characters in '" + token + "'");
  return v;
}

}  // namespace

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::AnalyticBubble: return "analytic-bubble";
    case ProfileKind::TruncatedBubble: return "truncated-bubble";
    case ProfileKind::BubblePlusPerturbation: return "bubble-plus-perturbation";
    case ProfileKind::Sampled: return "sampled";
    case ProfileKind::Plateau: return "plateau";
    case ProfileKind::Custom: return "custom";
  }
  return "unknown";
}

DomainBall DomainBall::ball(int N, double R) {
  if (!(R > 0.0)) throw DomainError("DomainBall: radius must be positive");
  return DomainBall{N, R, ball_measure(N, R)};
}

DomainBall DomainBall::whole_space(int N) {
  return DomainBall{N, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

RadialProfile::RadialProfile(ProfileKind kind, Function value, Function derivative,
                             double support_radius, std::vector<double> breakpoints)
    : kind_(kind),
      value_(std::move(value)),
      derivative_(std::move(derivative)),
      support_(support_radius),
      breakpoints_(std::move(breakpoints)) {
  if (!(support_ > 0.0)) throw DomainError("RadialProfile: support radius must be positive");
  if (std::isfinite(support_)) breakpoints_.push_back(support_);
  std::erase_if(breakpoints_, [&](double b) { return !(b > 0.0) || b > support_; });
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
}

std::span<const double> RadialProfile::grid() const {
  if (!grid_) return {};
  return *grid_;
}

RadialProfile RadialProfile::scaled(double alpha) const {
  RadialProfile out(
      kind_, [f = value_, alpha](double r) { return alpha * f(r); },
      [f = derivative_, alpha](double r) { return alpha * f(r); }, support_, breakpoints_);
  out.grid_ = grid_;
  return out;
}

RadialProfile combine(double a, const RadialProfile& u, double b, const RadialProfile& v,
                      ProfileKind kind) {
  return RadialProfile(
      kind, [a, u, b, v](double r) { return a * u.value(r) + b * v.value(r); },
      [a, u, b, v](double r) { return a * u.derivative(r) + b * v.derivative(r); },
      std::max(u.support_radius(), v.support_radius()), merged(u.breakpoints(), v.breakpoints()));
}

RadialProfile bubble_profile(const Params& params, const BubbleSpec& spec) {
  if (!(spec.lambda > 0.0)) throw DomainError("bubble: lambda must be positive");
  return RadialProfile(
      ProfileKind::AnalyticBubble, [params, spec](double r) { return bubble_value(params, spec, r); },
      [params, spec](double r) { return bubble_derivative(params, spec, r); },
      std::numeric_limits<double>::infinity(), {1.0 / spec.lambda});
}

RadialProfile truncated_bubble(const Params& params, double lambda, double R, double scale) {
  if (!(lambda > 0.0) || !(R > 0.0) || std::isinf(R)) {
    throw DomainError("truncated_bubble: lambda and R must be positive and finite");
  }
  const BubbleSpec spec{scale, lambda};
  const double floor = bubble_value(params, spec, R);
  return RadialProfile(
      ProfileKind::TruncatedBubble,
      [params, spec, floor](double r) { return bubble_value(params, spec, r) - floor; },
      [params, spec, R](double r) { return r < R ? bubble_derivative(params, spec, r) : 0.0; }, R,
      {1.0 / lambda});
}

RadialProfile plateau_profile(double height, double a, double b) {
  if (!(a >= 0.0) || !(b > a)) throw DomainError("plateau_profile: need 0 <= a < b");
  const double w = b - a;
  return RadialProfile(
      ProfileKind::Plateau,
      [=](double r) {
        if (r <= a) return height;
        const double t = (r - a) / w;
        return height * (1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t));
      },
      [=](double r) {
        if (r <= a) return 0.0;
        const double t = (r - a) / w;
        return -height * 30.0 * t * t * (1.0 - t) * (1.0 - t) / w;
      },
      b, {a});
}

RadialProfile bump_profile(double a, double b, double height) {
  if (!(a >= 0.0) || !(b > a)) throw DomainError("bump_profile: need 0 <= a < b");
  const double w = b - a;
  return RadialProfile(
      ProfileKind::Custom,
      [=](double r) {
        if (r <= a) return 0.0;
        const double t = (r - a) / w;
        const double s = t * (1.0 - t);
        return 64.0 * height * s * s * s;
      },
      [=](double r) {
        if (r <= a) return 0.0;
        const double t = (r - a) / w;
        const double s = t * (1.0 - t);
        return 64.0 * height * 3.0 * s * s * (1.0 - 2.0 * t) / w;
      },
      b, {a, 0.5 * (a + b)});
}

RadialProfile constant_profile(double c, double R) {
  if (!(R > 0.0) || std::isinf(R)) throw DomainError("constant_profile: R must be positive and finite");
  return RadialProfile(
      ProfileKind::Plateau, [c](double) { return c; }, [](double) { return 0.0; }, R);
}

RadialProfile sampled_profile(std::vector<double> radii, std::vector<double> values,
                              std::vector<double> derivatives) {
  if (radii.size() != values.size() || radii.size() < 4) {
    throw DomainError("sampled_profile: need at least 4 (radius, value) pairs of equal length");
  }
  if (!derivatives.empty() && derivatives.size() != radii.size()) {
    throw DomainError("sampled_profile: derivative column length mismatch");
  }
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) throw DomainError("sampled_profile: radii must be strictly increasing");
  }
  if (radii.front() < 0.0) throw DomainError("sampled_profile: radii must be nonnegative");

  auto grid = std::make_shared<const std::vector<double>>(radii);
  const double first = radii.front();
  const double last = radii.back();
  RadialProfile::Function value;
  RadialProfile::Function slope;
  if (derivatives.empty()) {
    using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
    auto interp = std::make_shared<const Pchip>(std::move(radii), std::move(values));
    value = [interp, first, last](double r) { return (*interp)(std::clamp(r, first, last)); };
    slope = [interp, first, last](double r) {
      return r < first ? 0.0 : interp->prime(std::min(r, last));
    };
  } else {
    using Hermite = boost::math::interpolators::cubic_hermite<std::vector<double>>;
    auto interp = std::make_shared<const Hermite>(std::move(radii), std::move(values),
                                                  std::move(derivatives));
    value = [interp, first, last](double r) { return (*interp)(std::clamp(r, first, last)); };
    slope = [interp, first, last](double r) {
      return r < first ? 0.0 : interp->prime(std::min(r, last));
    };
  }
  RadialProfile out(ProfileKind::Sampled, std::move(value), std::move(slope), last);
  out.grid_ = std::move(grid);
  return out;
}

RadialProfile ProfileFile::profile() const { return sampled_profile(radii, values, derivatives); }

ProfileFile read_profile_csv(std::istream& in) {
  ProfileFile file;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line.front() == '#') {
      std::istringstream tokens(line.substr(1));
      std::string token;
      while (tokens >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string val = token.substr(eq + 1);
        if (key == "N") {
          file.N = static_cast<int>(parse_double(val));
          header = true;
        } else if (key == "p") {
          file.p = parse_double(val);
        } else if (key == "R") {
          file.R = parse_double(val);
        }
      }
      continue;
    }
    std::vector<double> cols;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      cell.erase(0, cell.find_first_not_of(" \t"));
      cell.erase(cell.find_last_not_of(" \t") + 1);
      cols.push_back(parse_double(cell));
    }
    if (cols.size() < 2 || cols.size() > 3) {
      throw DomainError("profile csv: expected 2 or 3 columns, got " + std::to_string(cols.size()));
    }
    if (cols.size() == 3 && file.radii.size() != file.derivatives.size()) {
      throw DomainError("profile csv: derivative column present on some rows only");
    }
    file.radii.push_back(cols[0]);
    file.values.push_back(cols[1]);
    if (cols.size() == 3) file.derivatives.push_back(cols[2]);
  }
  if (!header) throw DomainError("profile csv: missing '# N=<n> p=<p> R=<r>' header");
  if (!file.derivatives.empty() && file.derivatives.size() != file.radii.size()) {
    throw DomainError("profile csv: derivative column present on some rows only");
  }
  return file;
}

ProfileFile read_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("profile csv: cannot open '" + path + "'");
  return read_profile_csv(in);
}

void write_profile_csv(std::ostream& out, const ProfileFile& file) {
  char p_buf[40];
  std::snprintf(p_buf, sizeof p_buf, "%.17g", file.p);
  out << "# N=" << file.N << " p=" << p_buf << " R=" << format_double(file.R) << '\n';
  for (std::size_t i = 0; i < file.radii.size(); ++i) {
    out << format_double(file.radii[i]) << ',' << format_double(file.values[i]);
    if (!file.derivatives.empty()) out << ',' << format_double(file.derivatives[i]);
    out << '\n';
  }
}

ProfileFile sample_profile(const RadialProfile& u, std::span<const double> radii, int N, double p,
                           double R) {
  ProfileFile file;
  file.N = N;
  file.p = p;
  file.R = R;
  for (double r : radii) {
    file.radii.push_back(r);
    file.values.push_back(u.value(r));
    file.derivatives.push_back(u.derivative(r));
  }
  return file;
}

}  // namespace sobolev
