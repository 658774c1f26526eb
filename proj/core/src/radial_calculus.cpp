#include "sobolev/radial_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sobolev/errors.hpp"
#include "sobolev/optimize.hpp"
#include "sobolev/quadrature.hpp"

namespace sobolev {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxGridBreakpoints = 20000;

double effective_top(const RadialProfile& u, const DomainBall& dom) {
  return std::min(dom.R, u.support_radius());
}

std::vector<double> quadrature_cuts(const RadialProfile& u, double top) {
  std::vector<double> cuts(u.breakpoints().begin(), u.breakpoints().end());
  const auto grid = u.grid();
  if (!grid.empty() && grid.size() <= kMaxGridBreakpoints) cuts.insert(cuts.end(), grid.begin(), grid.end());
  std::erase_if(cuts, [top](double c) { return !(c > 0.0) || c >= top; });
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

double radial_integral(const RadialProfile& u, const DomainBall& dom, double upper,
                       const std::function<double(double)>& integrand) {
  const double top = std::min(upper, effective_top(u, dom));
  const auto cuts = quadrature_cuts(u, top);
  return sphere_measure(dom.N) * integrate(integrand, 0.0, top, cuts).value;
}

// Dense radii on [0, top]: uniform in r, uniform in r^N, logarithmic near 0, plus breakpoints.
std::vector<double> sample_radii(const RadialProfile& u, double top, int N, std::size_t n) {
  std::vector<double> r;
  r.reserve(n + 64);
  const std::size_t n_lin = n / 2;
  const std::size_t n_vol = n / 4;
  const std::size_t n_log = n - n_lin - n_vol;
  for (std::size_t i = 0; i <= n_lin; ++i) r.push_back(top * static_cast<double>(i) / n_lin);
  for (std::size_t i = 1; i <= n_vol; ++i) {
    r.push_back(top * std::pow(static_cast<double>(i) / n_vol, 1.0 / N));
  }
  for (std::size_t i = 0; i < n_log; ++i) {
    r.push_back(top * std::pow(10.0, -8.0 + 8.0 * static_cast<double>(i) / n_log));
  }
  for (double b : u.breakpoints()) {
    if (b < top) r.push_back(b);
  }
  const auto grid = u.grid();
  if (grid.size() <= kMaxGridBreakpoints) {
    for (double g : grid) {
      if (g <= top) r.push_back(g);
    }
  }
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

bool nonincreasing(std::span<const double> v) {
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  const double slack = 1e-12 * vmax;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1] + slack) return false;
  }
  return true;
}

RadialProfile restricted(const RadialProfile& u, double top) {
  if (top >= u.support_radius()) return u;
  return RadialProfile(
      u.kind(), [u](double r) { return u.value(r); }, [u](double r) { return u.derivative(r); }, top,
      std::vector<double>(u.breakpoints().begin(), u.breakpoints().end()));
}

RadialProfile absolute(const RadialProfile& u) {
  return RadialProfile(
      u.kind(), [u](double r) { return std::abs(u.value(r)); },
      [u](double r) { return u.value(r) < 0.0 ? -u.derivative(r) : u.derivative(r); },
      u.support_radius(), std::vector<double>(u.breakpoints().begin(), u.breakpoints().end()));
}

// Level-set geometry of a sampled radial profile on [0, top].
class LevelScanner {
 public:
  LevelScanner(const RadialProfile& u, int N, double top, std::size_t samples)
      : u_(u), N_(N), top_(top), radii_(sample_radii(u, top, N, samples)) {
    values_.reserve(radii_.size());
    for (double r : radii_) values_.push_back(u.value(r));
  }

  [[nodiscard]] std::span<const double> radii() const { return radii_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }

  struct Level {
    double measure = 0.0;    // |{u > t}| / (|S^{N-1}| / N), i.e. sum of end^N - start^N
    double coarea = 0.0;     // sum over crossings of r^{N-1} / |u'(r)|
    bool flat = false;       // some crossing has u' = 0
  };

  [[nodiscard]] Level level(double t) const {
    Level out;
    const std::size_t n = radii_.size();
    bool inside = values_[0] > t;
    double start = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const bool next = values_[i + 1] > t;
      if (next == inside) continue;
      const double rc = crossing(radii_[i], radii_[i + 1], t, inside);
      const double slope = std::abs(u_.derivative(rc));
      if (slope > 0.0 && std::isfinite(slope)) {
        out.coarea += std::pow(rc, N_ - 1) / slope;
      } else {
        out.flat = true;
      }
      if (inside) {
        out.measure += std::pow(rc, N_) - std::pow(start, N_);
      } else {
        start = rc;
      }
      inside = next;
    }
    if (inside) out.measure += std::pow(radii_.back(), N_) - std::pow(start, N_);
    return out;
  }

  // Maximal intervals of {u > t} in [0, top].
  [[nodiscard]] std::vector<std::pair<double, double>> intervals(double t) const {
    std::vector<std::pair<double, double>> out;
    const std::size_t n = radii_.size();
    bool inside = values_[0] > t;
    double start = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const bool next = values_[i + 1] > t;
      if (next == inside) continue;
      const double rc = crossing(radii_[i], radii_[i + 1], t, inside);
      if (inside) {
        out.emplace_back(start, rc);
      } else {
        start = rc;
      }
      inside = next;
    }
    if (inside) out.emplace_back(start, radii_.back());
    return out;
  }

  [[nodiscard]] double radius_of(const Level& level) const { return std::pow(level.measure, 1.0 / N_); }

  [[nodiscard]] double peak() const {
    const auto it = std::max_element(values_.begin(), values_.end());
    const std::size_t i = static_cast<std::size_t>(it - values_.begin());
    if (i == 0 || i + 1 == values_.size()) return *it;
    const auto best = golden_section_maximize([this](double r) { return u_.value(r); }, radii_[i - 1],
                                              radii_[i + 1], 1e-14 * top_);
    return std::max(*it, best.value);
  }

 private:
  // Bisection for u(r) = t on [a, b]; `above_left` tells which side exceeds t.
  [[nodiscard]] double crossing(double a, double b, double t, bool above_left) const {
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, b); ++it) {
      const double m = 0.5 * (a + b);
      if ((u_.value(m) > t) == above_left) {
        a = m;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  }

  const RadialProfile& u_;
  int N_;
  double top_;
  std::vector<double> radii_;
  std::vector<double> values_;
};

// Fritsch-Carlson limiter on nonincreasing data.
void limit_monotone(std::span<const double> x, std::span<const double> y, std::span<double> d) {
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    const double secant = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
    if (secant == 0.0) {
      d[k] = 0.0;
      d[k + 1] = 0.0;
      continue;
    }
    if (d[k] / secant < 0.0) d[k] = 0.0;
    if (d[k + 1] / secant < 0.0) d[k + 1] = 0.0;
    const double a = d[k] / secant;
    const double b = d[k + 1] / secant;
    const double h = a * a + b * b;
    if (h > 9.0) {
      const double tau = 3.0 / std::sqrt(h);
      d[k] = tau * a * secant;
      d[k + 1] = tau * b * secant;
    }
  }
}

WeakNorm weak_norm_decreasing(const RadialProfile& u, double s, const DomainBall& dom) {
  const int N = dom.N;
  const double exponent = 1.0 / s - 1.0;
  const auto cuts_all = quadrature_cuts(u, kInf);
  const double sphere = sphere_measure(N);
  auto objective_at = [&](double rho) {
    std::vector<double> cuts;
    for (double c : cuts_all) {
      if (c < rho) cuts.push_back(c);
    }
    const double mass =
        sphere * integrate([&](double r) { return u.value(r) * std::pow(r, N - 1); }, 0.0, rho, cuts).value;
    return std::pow(ball_measure(N, rho), exponent) * mass;
  };
  auto objective_log = [&](double log_rho) { return objective_at(std::exp(log_rho)); };

  const double top = effective_top(u, dom);
  if (std::isfinite(top)) {
    constexpr int kScan = 60;
    const double hi = std::log(top);
    const double lo = hi - 6.0 * std::log(10.0);
    std::vector<double> xs(kScan + 1);
    std::vector<double> fs(kScan + 1);
    for (int k = 0; k <= kScan; ++k) {
      xs[k] = lo + (hi - lo) * k / kScan;
      fs[k] = objective_log(xs[k]);
    }
    const auto kbest = static_cast<int>(std::max_element(fs.begin(), fs.end()) - fs.begin());
    WeakNorm out{fs[kbest], false, std::exp(xs[kbest])};
    const double a = xs[std::max(kbest - 1, 0)];
    const double b = xs[std::min(kbest + 1, kScan)];
    const auto refined = golden_section_maximize(objective_log, a, b, 1e-9);
    if (refined.value > out.value) out = {refined.value, false, std::exp(refined.x)};
    return out;
  }

  // Whole space, unbounded support: scan quarter decades from 1e-6 to 1e12.
  constexpr int kPerDecade = 4;
  constexpr int kFirst = -6 * kPerDecade;
  constexpr int kLast = 12 * kPerDecade;
  std::vector<double> xs;
  std::vector<double> fs;
  for (int k = kFirst; k <= kLast; ++k) {
    xs.push_back(std::log(10.0) * k / kPerDecade);
    fs.push_back(objective_log(xs.back()));
  }
  const std::size_t n = fs.size();
  const auto kbest = static_cast<std::size_t>(std::max_element(fs.begin(), fs.end()) - fs.begin());
  if (kbest + kPerDecade < n) {
    const double a = xs[kbest == 0 ? 0 : kbest - 1];
    const double b = xs[std::min(kbest + 1, n - 1)];
    WeakNorm out{fs[kbest], false, std::exp(xs[kbest])};
    const auto refined = golden_section_maximize(objective_log, a, b, 1e-9);
    if (refined.value > out.value) out = {refined.value, false, std::exp(refined.x)};
    return out;
  }

  // The supremum sits at infinity: compare per-decade increments over the last six decades.
  std::vector<double> decade;
  for (std::size_t i = n - 1 - 6 * kPerDecade; i < n; i += kPerDecade) decade.push_back(fs[i]);
  std::vector<double> inc;
  for (std::size_t j = 1; j < decade.size(); ++j) inc.push_back(decade[j] - decade[j - 1]);
  const bool growing = std::all_of(inc.begin(), inc.end(), [](double d) { return d > 0.0; });
  if (growing && inc.back() >= 0.5 * inc.front()) return {kInf, true, kInf};

  double limit = fs.back();
  const double last = inc.back();
  const double prev = inc[inc.size() - 2];
  if (last > 0.0 && prev > 0.0 && last < prev) {
    const double ratio = last / prev;
    limit += last * ratio / (1.0 - ratio);
  }
  return {std::max(limit, fs[kbest]), false, kInf};
}

// Bathtub form for nonnegative u: the best set of each measure is a superlevel set {u > t},
// and the objective |{u > t}|^{1/s - 1} int_{u > t} u is maximized over t.
WeakNorm weak_norm_levels(const RadialProfile& u, double s, const DomainBall& dom) {
  const double top = effective_top(u, dom);
  if (std::isinf(top)) throw DomainError("weak_norm: non-monotone profile needs bounded support or domain");
  const int N = dom.N;
  const double unit = sphere_measure(N) / N;
  const LevelScanner scan(u, N, top, 4000);
  const double vmax = scan.peak();
  if (!(vmax > 0.0)) return {0.0, false, 0.0};
  const auto cuts_all = quadrature_cuts(u, top);
  auto objective = [&](double t) {
    double measure = 0.0;
    double mass = 0.0;
    for (auto [a, b] : scan.intervals(t)) {
      measure += std::pow(b, N) - std::pow(a, N);
      std::vector<double> cuts;
      for (double c : cuts_all) {
        if (c > a && c < b) cuts.push_back(c);
      }
      mass += integrate([&](double r) { return u.value(r) * std::pow(r, N - 1); }, a, b, cuts).value;
    }
    if (!(measure > 0.0)) return 0.0;
    return std::pow(unit * measure, 1.0 / s - 1.0) * sphere_measure(N) * mass;
  };
  // Levels from just below the peak to zero: uniform, then geometric toward 0.
  std::vector<double> levels;
  for (int k = 0; k <= 200; ++k) levels.push_back(vmax * (1.0 - k / 200.0));
  for (int k = 1; k <= 60; ++k) levels.push_back(vmax * 0.005 * std::pow(1e-6, k / 60.0));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<double> fs;
  for (double t : levels) fs.push_back(objective(t));
  const auto kbest = static_cast<std::size_t>(std::max_element(fs.begin(), fs.end()) - fs.begin());
  WeakNorm out{fs[kbest], false, 0.0};
  const double a = levels[kbest == 0 ? 0 : kbest - 1];
  const double b = levels[std::min(kbest + 1, levels.size() - 1)];
  const auto refined = golden_section_maximize(objective, a, b, 1e-12 * vmax);
  if (refined.value > out.value) out.value = refined.value;
  out.radius = std::min(top, std::pow(scan.level(refined.value > fs[kbest] ? refined.x : levels[kbest]).measure, 1.0 / N));
  return out;
}

}  // namespace

double lq_norm(const RadialProfile& u, double q, const DomainBall& dom) {
  if (!(q > 0.0)) throw DomainError("lq_norm: exponent must be positive");
  const int N = dom.N;
  const double integral = radial_integral(u, dom, kInf, [&](double r) {
    return std::pow(std::abs(u.value(r)), q) * std::pow(r, N - 1);
  });
  return std::pow(integral, 1.0 / q);
}

double grad_lp_norm(const RadialProfile& u, double p, const DomainBall& dom) {
  if (!(p >= 1.0)) throw DomainError("grad_lp_norm: exponent must be >= 1");
  const int N = dom.N;
  const double integral = radial_integral(u, dom, kInf, [&](double r) {
    return std::pow(std::abs(u.derivative(r)), p) * std::pow(r, N - 1);
  });
  return std::pow(integral, 1.0 / p);
}

bool is_radially_nonincreasing(const RadialProfile& u, const DomainBall& dom) {
  double top = effective_top(u, dom);
  if (std::isinf(top)) {
    std::vector<double> v;
    for (int k = -8 * 50; k <= 12 * 50; ++k) v.push_back(u.value(std::pow(10.0, k / 50.0)));
    return u.value(0.0) >= v.front() && nonincreasing(v);
  }
  std::vector<double> v;
  for (double r : sample_radii(u, top, dom.N, 4000)) v.push_back(u.value(r));
  return nonincreasing(v);
}

RadialProfile rearrange(const RadialProfile& u, const DomainBall& dom, const RearrangeOptions& options) {
  const double top = effective_top(u, dom);
  if (std::isinf(top)) throw DomainError("rearrange: profile needs bounded support or a bounded domain");
  const int N = dom.N;
  const LevelScanner scan(u, N, top, options.radial_samples);
  const auto values = scan.values();
  const double vmax_sample = *std::max_element(values.begin(), values.end());
  for (double v : values) {
    if (v < -1e-14 * std::max(1.0, vmax_sample)) throw DomainError("rearrange: profile takes negative values");
  }
  if (nonincreasing(values)) return restricted(u, top);

  const double vmax = scan.peak();
  if (!(vmax > 0.0)) throw DomainError("rearrange: profile vanishes identically");

  std::vector<double> levels;
  const std::size_t G = std::max<std::size_t>(options.geometric_levels, 2);
  for (std::size_t k = 0; k < G; ++k) {
    levels.push_back(vmax * std::pow(options.level_floor, static_cast<double>(k) / (G - 1)));
  }
  for (std::size_t k = 1; k <= options.uniform_levels; ++k) {
    levels.push_back(vmax * static_cast<double>(k) / options.uniform_levels);
  }
  // Plateaus of u become flat pieces of u*; add their heights as levels.
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > 0.0 && std::abs(values[i] - values[i - 1]) <= 1e-14 * vmax) levels.push_back(values[i]);
  }
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<double> rho{0.0};
  std::vector<double> height{vmax};
  std::vector<double> slope{0.0};
  auto add_node = [&](double r, double t, double d) {
    if (r <= rho.back() + 1e-13 * top) return;
    rho.push_back(r);
    height.push_back(t);
    slope.push_back(d);
  };
  for (double t : levels) {
    // Nodes at the lower edge of a plateau at height t, then the strict level set.
    const auto at_or_above = scan.level(t - 1e-12 * vmax);
    const auto above = scan.level(t);
    const double r_above = scan.radius_of(above);
    const double r_at = scan.radius_of(at_or_above);
    const double d = (above.flat || above.coarea == 0.0) ? 0.0 : -std::pow(r_above, N - 1) / above.coarea;
    add_node(r_above, t, d);
    if (r_at > r_above + 1e-9 * top) add_node(r_at, t, 0.0);
  }
  const auto positive = scan.level(0.0);
  const double r_pos = scan.radius_of(positive);
  const double d_pos =
      (positive.flat || positive.coarea == 0.0) ? 0.0 : -std::pow(r_pos, N - 1) / positive.coarea;
  add_node(r_pos, 0.0, d_pos);
  if (rho.back() < top) add_node(top, 0.0, 0.0);

  limit_monotone(rho, height, slope);
  return sampled_profile(std::move(rho), std::move(height), std::move(slope));
}

double distribution_function(const RadialProfile& u, double t, const DomainBall& dom) {
  const double top = effective_top(u, dom);
  if (std::isinf(top)) throw DomainError("distribution_function: needs bounded support or domain");
  const LevelScanner scan(u, dom.N, top, 4000);
  return sphere_measure(dom.N) / dom.N * scan.level(t).measure;
}

WeakNorm weak_norm(const RadialProfile& u, double s, const DomainBall& dom) {
  if (!(s > 0.0)) throw DomainError("weak_norm: exponent must be positive");
  if (dom.bounded() && !(s > 1.0)) {
    throw DomainError("weak_norm: the weak L^s norm makes no sense for s <= 1");
  }
  if (is_radially_nonincreasing(u, dom)) {
    const double u0 = u.value(0.0);
    if (u0 >= 0.0) return weak_norm_decreasing(u, s, dom);
  }
  return weak_norm_levels(absolute(u), s, dom);
}

double classical_weak_norm(const RadialProfile& u, double s, const DomainBall& dom) {
  if (!(s > 0.0)) throw DomainError("classical_weak_norm: exponent must be positive");
  const double top = effective_top(u, dom);
  if (std::isinf(top)) throw DomainError("classical_weak_norm: needs bounded support or domain");
  const RadialProfile v = absolute(u);
  const LevelScanner scan(v, dom.N, top, 4000);
  const double vmax = scan.peak();
  const double unit = sphere_measure(dom.N) / dom.N;
  double best = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    const double t = vmax * std::pow(1e-6, k / 2000.0);
    best = std::max(best, t * std::pow(unit * scan.level(t).measure, 1.0 / s));
  }
  return best;
}

InequalitySides weak_norm_holder_bound(const RadialProfile& u, const DomainBall& dom, const Params& params) {
  if (!params.weak_norm_valid) throw HypothesisError("weak_norm_holder_bound: requires p > 2N/(N+1)");
  if (!dom.bounded()) throw DomainError("weak_norm_holder_bound: requires a bounded domain");
  InequalitySides out;
  out.lhs = weak_norm(u, params.p_bar, dom).value;
  out.rhs = lq_norm(u, params.p_star, dom) * std::pow(dom.measure, 1.0 / (params.p * params.p_bar));
  return out;
}

double weak_to_strong_constant(double t, double s) { return std::pow(s / (s - t), 1.0 / t); }

InequalitySides weak_to_strong(const RadialProfile& u, double t, double s, const DomainBall& dom) {
  if (!(s > 1.0)) throw DomainError("weak_to_strong: requires s > 1");
  if (!(t > 0.0) || !(t < s)) throw DomainError("weak_to_strong: requires 0 < t < s");
  if (!dom.bounded()) throw DomainError("weak_to_strong: requires a bounded domain");
  InequalitySides out;
  out.lhs = lq_norm(u, t, dom);
  out.rhs = weak_to_strong_constant(t, s) * std::pow(dom.measure, (s - t) / (s * t)) *
            weak_norm(u, s, dom).value;
  return out;
}

}  // namespace sobolev
