#include "sobolev/pointwise.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <tuple>

#include "sobolev/errors.hpp"
#include "sobolev/optimize.hpp"
#include "sobolev/parallel.hpp"

namespace sobolev {
namespace {

constexpr std::size_t kChunk = 1 << 16;

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sum_norm(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] + y[i]) * (x[i] + y[i]);
  return std::sqrt(s);
}

void require_same_size(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) throw DomainError("pointwise: x and y must have the same positive dimension");
}

// |x|^{e} with |x|^0 = 1, including |x| = 0.
double pow_norm(double n, double e) { return e == 0.0 ? 1.0 : std::pow(n, e); }

// Scalar core of the lower expansion in the invariants |x| = nx, |y| = ny, x.y = xy, |x+y| = m.
double fz_margin(double nx, double ny, double xy, double m, double r, double kappa, double C1) {
  double correction = 0.0;
  if (r != 2.0) {
    double w;  // |omega|^{r-2}
    if (r > 2.0) {
      w = m <= nx ? std::pow(m, r - 1.0) / nx : std::pow(nx, r - 2.0);
    } else {
      w = nx < m ? m / ((2.0 - r) * m + (r - 1.0) * nx) * std::pow(nx, r - 2.0) : std::pow(nx, r - 2.0);
    }
    correction = r * (r - 2.0) * w * (nx - m) * (nx - m);
  }
  const double quad = 0.5 * (1.0 - kappa) * (r * pow_norm(nx, r - 2.0) * ny * ny + correction);
  const double tail = r >= 2.0 ? std::pow(ny, r) : std::min(std::pow(ny, r), std::pow(nx, r - 2.0) * ny * ny);
  return std::pow(m, r) - std::pow(nx, r) - r * pow_norm(nx, r - 2.0) * xy - quad - C1 * tail;
}

// Reduced coordinates: x = (1, 0), y = t (cos theta, sin theta).
struct Reduced {
  double t;
  double theta;
  [[nodiscard]] double m() const { return std::sqrt(std::max(0.0, 1.0 + 2.0 * t * std::cos(theta) + t * t)); }
  [[nodiscard]] VectorSample sample(double exponent, std::optional<double> kappa) const {
    return {{1.0, 0.0}, {t * std::cos(theta), t * std::sin(theta)}, exponent, kappa};
  }
};

double gamma_ratio(double p, const Reduced& z) {
  const double c = std::cos(z.theta);
  return (std::pow(z.m(), p) - 1.0 - p * z.t * c) / std::pow(z.t, p);
}

double c1_ratio(double r, double kappa, const Reduced& z) {
  const double base = fz_margin(1.0, z.t, z.t * std::cos(z.theta), z.m(), r, kappa, 0.0);
  const double denom = r >= 2.0 ? std::pow(z.t, r) : std::min(std::pow(z.t, r), z.t * z.t);
  return base / denom;
}

std::mt19937_64 substream(std::uint64_t seed, std::size_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk)};
  return std::mt19937_64(seq);
}

// Extremum of f over the reduced coordinates: deterministic grid, adversarial corners,
// seeded random draws and a Nelder-Mead polish of the best candidates. `sign` = +1
// maximizes, -1 minimizes.
struct Extremum {
  double value;
  Reduced at;
  std::size_t samples;
};

template <class F>
Extremum reduced_extremum(F f, double sign, const EstimateOptions& options) {
  std::vector<std::pair<double, Reduced>> candidates;
  std::size_t count = 0;
  auto consider = [&](const Reduced& z) {
    const double v = f(z);
    ++count;
    if (std::isfinite(v)) candidates.emplace_back(sign * v, z);
  };
  const double log_lo = std::log(1e-4);
  const double log_hi = std::log(1e4);
  for (std::size_t i = 0; i < options.grid_radial; ++i) {
    const double t = std::exp(log_lo + (log_hi - log_lo) * i / (options.grid_radial - 1));
    for (std::size_t j = 0; j < options.grid_angular; ++j) {
      consider({t, std::numbers::pi * j / (options.grid_angular - 1)});
    }
  }
  // y close to -x and -2x, and |y| much larger than |x|.
  for (double d : {-1e-3, -1e-6, 0.0, 1e-6, 1e-3}) {
    consider({1.0 + d, std::numbers::pi});
    consider({2.0 + d, std::numbers::pi});
    consider({0.5 + d, std::numbers::pi});
  }
  for (double t : {1e5, 1e6}) {
    for (double th : {0.0, 0.5 * std::numbers::pi, std::numbers::pi}) consider({t, th});
  }

  // Random draws, chunked into independent substreams; best per chunk kept.
  const std::size_t chunks = (options.random_samples + kChunk - 1) / kChunk;
  std::vector<std::pair<double, Reduced>> chunk_best(chunks, {-std::numeric_limits<double>::infinity(), {1.0, 0.0}});
  parallel_for(chunks, [&](std::size_t c) {
    auto gen = substream(options.seed, c);
    std::uniform_real_distribution<double> log_t(log_lo, log_hi);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
    const std::size_t n = std::min(kChunk, options.random_samples - c * kChunk);
    for (std::size_t k = 0; k < n; ++k) {
      const double lt = log_t(gen);
      const Reduced z{std::exp(lt), angle(gen)};
      const double v = sign * f(z);
      if (std::isfinite(v) && v > chunk_best[c].first) chunk_best[c] = {v, z};
    }
  });
  count += options.random_samples;
  for (const auto& cb : chunk_best) {
    if (std::isfinite(cb.first)) candidates.push_back(cb);
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::pair<double, Reduced> best = candidates.front();
  const std::size_t polish = std::min<std::size_t>(8, candidates.size());
  for (std::size_t k = 0; k < polish; ++k) {
    const Reduced start = candidates[k].second;
    auto objective = [&](const std::array<double, 2>& x) {
      const double lt = std::clamp(x[0], log_lo - 2.0, log_hi + 2.0);
      const double v = f(Reduced{std::exp(lt), x[1]});
      return std::isfinite(v) ? -sign * v : std::numeric_limits<double>::infinity();
    };
    NelderMeadOptions nm;
    nm.x_tol = 1e-10;
    nm.max_evaluations = 400;
    const auto res = nelder_mead(objective, {std::log(start.t), start.theta}, {0.05, 0.05}, nm);
    count += res.evaluations;
    if (-res.value > best.first) {
      const double lt = std::clamp(res.x[0], log_lo - 2.0, log_hi + 2.0);
      best = {-res.value, Reduced{std::exp(lt), res.x[1]}};
    }
  }
  return {sign * best.first, best.second, count};
}

using CacheKey = std::tuple<std::string, double, double, std::uint64_t, std::size_t, std::size_t, std::size_t>;

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<CacheKey, ConstantEstimate>& cache() {
  static std::map<CacheKey, ConstantEstimate> c;
  return c;
}

// Draws x, y in R^N: mostly independent Gaussian directions with log-uniform lengths, plus
// near-antipodal configurations y ~ -x, y ~ -2x.
struct PairSampler {
  int N;
  std::mt19937_64 gen;
  std::normal_distribution<double> normal{0.0, 1.0};
  std::uniform_real_distribution<double> unit{0.0, 1.0};

  void draw(std::vector<double>& x, std::vector<double>& y) {
    x.resize(N);
    y.resize(N);
    const double sx = std::pow(10.0, -2.0 + 4.0 * unit(gen));
    for (double& v : x) v = sx * normal(gen);
    const double mode = unit(gen);
    if (mode < 0.10) {
      const double k = mode < 0.05 ? -1.0 : -2.0;
      const double eps = std::pow(10.0, -8.0 + 7.0 * unit(gen));
      for (int i = 0; i < N; ++i) y[i] = k * x[i] + eps * sx * normal(gen);
    } else {
      const double sy = sx * std::pow(10.0, -3.0 + 6.0 * unit(gen));
      for (double& v : y) v = sy * normal(gen);
    }
  }
};

template <class Margin>
SweepReport sweep(int N, double exponent, std::optional<double> kappa, std::size_t samples, std::uint64_t seed,
                  double tolerance, Margin margin) {
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<SweepReport> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    PairSampler sampler{N, substream(seed, c)};
    SweepReport& part = parts[c];
    part.worst_margin = std::numeric_limits<double>::infinity();
    std::vector<double> x;
    std::vector<double> y;
    const std::size_t n = std::min(kChunk, samples - c * kChunk);
    for (std::size_t k = 0; k < n; ++k) {
      sampler.draw(x, y);
      const double scale = std::pow(norm(x) + norm(y), exponent);
      const double m = margin(x, y) / scale;
      ++part.samples;
      if (m < -tolerance) ++part.violations;
      if (m < part.worst_margin) {
        part.worst_margin = m;
        part.worst = {x, y, exponent, kappa};
      }
    }
  });
  SweepReport out;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& part : parts) {
    out.samples += part.samples;
    out.violations += part.violations;
    if (part.worst_margin < out.worst_margin) {
      out.worst_margin = part.worst_margin;
      out.worst = part.worst;
    }
  }
  return out;
}

}  // namespace

double check_311(std::span<const double> x, std::span<const double> y, double p) {
  if (!(p >= 2.0)) throw DomainError("check_311: requires p >= 2");
  require_same_size(x, y);
  const double nx = norm(x);
  const double ny = norm(y);
  const double rhs = std::pow(nx, p) + p * pow_norm(nx, p - 2.0) * dot(x, y) +
                     0.5 * p * (p - 1.0) * pow_norm(nx + ny, p - 2.0) * ny * ny;
  return rhs - std::pow(sum_norm(x, y), p);
}

double check_312(std::span<const double> x, std::span<const double> y, double p, double gamma) {
  if (!(p > 1.0) || !(p < 2.0)) throw DomainError("check_312: requires 1 < p < 2");
  require_same_size(x, y);
  const double nx = norm(x);
  if (nx == 0.0) return (gamma - 1.0) * std::pow(norm(y), p);
  const double rhs = std::pow(nx, p) + p * std::pow(nx, p - 2.0) * dot(x, y) + gamma * std::pow(norm(y), p);
  return rhs - std::pow(sum_norm(x, y), p);
}

double fz_quadratic_part(std::span<const double> x, std::span<const double> y, double r) {
  if (!(r > 1.0) || !(r < 2.0)) throw DomainError("fz_quadratic_part: requires 1 < r < 2");
  require_same_size(x, y);
  const double nx = norm(x);
  if (nx == 0.0) throw DomainError("fz_quadratic_part: x = 0 makes |x|^{r-2} singular");
  const double ny = norm(y);
  const double m = sum_norm(x, y);
  const double w = nx < m ? m / ((2.0 - r) * m + (r - 1.0) * nx) * std::pow(nx, r - 2.0) : std::pow(nx, r - 2.0);
  return std::pow(nx, r - 2.0) * ny * ny + (r - 2.0) * w * (nx - m) * (nx - m);
}

double check_fz_lower(std::span<const double> x, std::span<const double> y, double r, double kappa, double C1) {
  if (!(r > 1.0)) throw DomainError("check_fz_lower: requires r > 1");
  if (!(kappa > 0.0) || !(kappa <= 1.0)) throw DomainError("check_fz_lower: requires 0 < kappa <= 1");
  require_same_size(x, y);
  const double nx = norm(x);
  if (nx == 0.0 && r < 2.0) throw DomainError("check_fz_lower: x = 0 makes |x|^{r-2} singular for r < 2");
  return fz_margin(nx, norm(y), dot(x, y), sum_norm(x, y), r, kappa, C1);
}

double check_scalar_33(double a, double b, double r) {
  if (!(r > 1.0)) throw DomainError("check_scalar_33: requires r > 1");
  if (a == 0.0 && r < 2.0) throw DomainError("check_scalar_33: a = 0 makes |a|^{r-2} singular for r < 2");
  return std::pow(std::abs(a + b), r) - std::pow(std::abs(a), r) - r * pow_norm(std::abs(a), r - 2.0) * a * b;
}

ConstantEstimate estimate_gamma_p(double p, const EstimateOptions& options) {
  if (!(p > 1.0) || !(p < 2.0)) throw DomainError("estimate_gamma_p: requires 1 < p < 2");
  const CacheKey key{"gamma_p", p, 0.0, options.seed, options.random_samples, options.grid_radial,
                     options.grid_angular};
  {
    std::lock_guard lock(cache_mutex());
    if (auto it = cache().find(key); it != cache().end()) return it->second;
  }
  const Extremum e = reduced_extremum([p](const Reduced& z) { return gamma_ratio(p, z); }, 1.0, options);
  // x = 0 gives ratio exactly 1.
  const double sup = std::max(e.value, 1.0);
  ConstantEstimate out{"gamma_p", p, std::nullopt, sup * (1.0 + 1e-3), e.samples, e.at.sample(p, std::nullopt)};
  std::lock_guard lock(cache_mutex());
  return cache().emplace(key, out).first->second;
}

ConstantEstimate estimate_C1(double r, double kappa, const EstimateOptions& options) {
  if (!(r > 1.0)) throw DomainError("estimate_C1: requires r > 1");
  if (!(kappa > 0.0) || !(kappa < 1.0)) throw DomainError("estimate_C1: requires 0 < kappa < 1");
  const CacheKey key{"C1", r, kappa, options.seed, options.random_samples, options.grid_radial,
                     options.grid_angular};
  {
    std::lock_guard lock(cache_mutex());
    if (auto it = cache().find(key); it != cache().end()) return it->second;
  }
  const Extremum e = reduced_extremum([r, kappa](const Reduced& z) { return c1_ratio(r, kappa, z); }, -1.0, options);
  if (!(e.value > 0.0)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "estimate_C1: nonpositive infimum %.6e at r=%g kappa=%g", e.value, r, kappa);
    throw EstimationFailure(buf);
  }
  ConstantEstimate out{"C1", r, kappa, e.value * (1.0 - 1e-3), e.samples, e.at.sample(r, kappa)};
  std::lock_guard lock(cache_mutex());
  return cache().emplace(key, out).first->second;
}

SweepReport sweep_311(double p, int N, std::size_t samples, std::uint64_t seed, double tolerance) {
  return sweep(N, p, std::nullopt, samples, seed, tolerance,
               [p](const auto& x, const auto& y) { return check_311(x, y, p); });
}

SweepReport sweep_312(double p, double gamma, int N, std::size_t samples, std::uint64_t seed, double tolerance) {
  return sweep(N, p, std::nullopt, samples, seed, tolerance,
               [p, gamma](const auto& x, const auto& y) { return check_312(x, y, p, gamma); });
}

SweepReport sweep_fz_lower(double r, double kappa, double C1, int N, std::size_t samples, std::uint64_t seed,
                           double tolerance) {
  return sweep(N, r, kappa, samples, seed, tolerance,
               [=](const auto& x, const auto& y) { return check_fz_lower(x, y, r, kappa, C1); });
}

SweepReport sweep_fz_quadratic_part(double r, int N, std::size_t samples, std::uint64_t seed, double tolerance) {
  return sweep(N, r, std::nullopt, samples, seed, tolerance,
               [r](const auto& x, const auto& y) { return fz_quadratic_part(x, y, r); });
}

SweepReport sweep_scalar_33(double r, std::size_t samples, std::uint64_t seed, double tolerance) {
  return sweep(1, r, std::nullopt, samples, seed, tolerance,
               [r](const auto& x, const auto& y) { return check_scalar_33(x[0], y[0], r); });
}

void write_constant_table(std::ostream& out, const std::vector<ConstantEstimate>& estimates) {
  out << "name,r,kappa,value,samples\n";
  char buf[256];
  for (const auto& e : estimates) {
    if (e.kappa) {
      std::snprintf(buf, sizeof buf, "%s,%.17e,%.17e,%.17e,%zu\n", e.name.c_str(), e.exponent, *e.kappa, e.value,
                    e.samples);
    } else {
      std::snprintf(buf, sizeof buf, "%s,%.17e,,%.17e,%zu\n", e.name.c_str(), e.exponent, e.value, e.samples);
    }
    out << buf;
  }
}

}  // namespace sobolev
