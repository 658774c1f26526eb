#pragma once

// Brute-force searches over library profiles: weak norms by bathtub and ball grids, and the
// manifold distance by a (c, log lambda) grid with independent Simpson quadrature.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "oracles.hpp"
#include "sobolev/radial_profile.hpp"

namespace oracle {

using sobolev::DomainBall;
using sobolev::RadialProfile;

// sup over prefixes of shells sorted by value: |D|^{1/s - 1} int_D |u| over the best D of
// each measure (bathtub). Shells are uniform in r, weighted by their exact volume.
inline double bathtub_weak_norm(const RadialProfile& u, const DomainBall& dom, double s, int cells) {
  const double top = std::min(dom.R, u.support_radius());
  const double unit = sphere(dom.N) / dom.N;
  std::vector<std::pair<double, double>> shells(cells);
  for (int i = 0; i < cells; ++i) {
    const double a = top * i / cells;
    const double b = top * (i + 1) / cells;
    shells[i] = {std::abs(u.value(0.5 * (a + b))), unit * (std::pow(b, dom.N) - std::pow(a, dom.N))};
  }
  std::sort(shells.begin(), shells.end(), std::greater<>());
  double sum = 0.0;
  double vol = 0.0;
  double best = 0.0;
  for (const auto& [v, dv] : shells) {
    sum += v * dv;
    vol += dv;
    best = std::max(best, std::pow(vol, 1.0 / s - 1.0) * sum);
  }
  return best;
}

// Same functional restricted to centered balls of 10^4 radii, masses by Simpson.
inline double ball_grid_weak_norm(const RadialProfile& u, const DomainBall& dom, double s) {
  const double top = std::min(dom.R, u.support_radius());
  const int n = 10000;
  double best = 0.0;
  double mass = 0.0;
  double prev = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double rho = top * i / n;
    mass += sphere(dom.N) *
            simpson([&](double r) { return u.value(r) * std::pow(r, dom.N - 1); }, prev, rho, 16);
    prev = rho;
    const double vol = sphere(dom.N) / dom.N * std::pow(rho, dom.N);
    best = std::max(best, std::pow(vol, 1.0 / s - 1.0) * mass);
  }
  return best;
}

struct GridMin {
  double value;
  double c;
  double log_lambda;
};

// Log-r Simpson nodes on [1e-7, 1e30] split at the profile's breakpoints and support edge. The far
// end matters: for (4, 3) the gradient integrand of U decays only like r^{-3/2}.
struct LogGrid {
  std::vector<double> r;  // nudged inside the segment so one-sided limits are used at the edges
  std::vector<double> w;  // includes the Jacobian r and the weight r^{N-1}
};

inline LogGrid log_grid(const RadialProfile& u, int N, int per_segment) {
  std::vector<double> edges{1e-7, 1e7, 1e30};
  for (double b : u.breakpoints()) {
    if (b > 1e-7 && b < 1e7) edges.push_back(b);
  }
  if (std::isfinite(u.support_radius())) edges.push_back(u.support_radius());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  LogGrid g;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double a = std::log(edges[k]);
    const double z = std::log(edges[k + 1]);
    const double h = (z - a) / per_segment;
    for (int i = 0; i <= per_segment; ++i) {
      const double x = std::exp(a + i * h);
      g.r.push_back(i == 0 ? x * (1.0 + 1e-13) : (i == per_segment ? x * (1.0 - 1e-13) : x));
      g.w.push_back((i == 0 || i == per_segment ? 1.0 : (i % 2 ? 4.0 : 2.0)) * h / 3.0 * std::pow(x, N));
    }
  }
  return g;
}

// min over c in [c_lo, c_hi], log lambda in [l_lo, l_hi] (n x n) of ||grad(u - c U_lambda)||_p.
inline GridMin projection_grid_min(const RadialProfile& u, int N, double p, double c_lo, double c_hi, double l_lo,
                                   double l_hi, int n, int per_segment = 4000) {
  const Bubble b(N, p);
  const LogGrid g = log_grid(u, N, per_segment);
  std::vector<double> du(g.r.size());
  for (std::size_t i = 0; i < g.r.size(); ++i) du[i] = u.derivative(g.r[i]);
  GridMin best{INFINITY, 0.0, 0.0};
  std::vector<double> dU(g.r.size());
  for (int j = 0; j < n; ++j) {
    const double ll = l_lo + (l_hi - l_lo) * j / (n - 1);
    for (std::size_t i = 0; i < g.r.size(); ++i) dU[i] = b.derivative(g.r[i], 1.0, std::exp(ll));
    for (int k = 0; k < n; ++k) {
      const double c = c_lo + (c_hi - c_lo) * k / (n - 1);
      double s = 0.0;
      for (std::size_t i = 0; i < g.r.size(); ++i) {
        const double a = std::abs(du[i] - c * dU[i]);
        s += g.w[i] * (p == 2.0 ? a * a : std::pow(a, p));
      }
      const double e = std::pow(sphere(N) * s, 1.0 / p);
      if (e < best.value) best = {e, c, ll};
    }
  }
  return best;
}

// Wide grid followed by two zooms around the best cell.
inline GridMin projection_grid_search(const RadialProfile& u, int N, double p, double c_hi, double l_lo, double l_hi,
                                      int n = 41, int per_segment = 1500) {
  GridMin best = projection_grid_min(u, N, p, 0.0, c_hi, l_lo, l_hi, n, per_segment);
  double dc = c_hi / (n - 1);
  double dl = (l_hi - l_lo) / (n - 1);
  for (int zoom = 0; zoom < 2; ++zoom) {
    best = projection_grid_min(u, N, p, best.c - 2 * dc, best.c + 2 * dc, best.log_lambda - 2 * dl,
                               best.log_lambda + 2 * dl, n, per_segment);
    dc *= 4.0 / (n - 1);
    dl *= 4.0 / (n - 1);
  }
  return best;
}

}  // namespace oracle
