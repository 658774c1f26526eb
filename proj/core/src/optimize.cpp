#include "sobolev/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sobolev {

ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double a, double b,
                                      double tol, std::size_t max_iterations) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  std::size_t evals = 2;
  for (std::size_t i = 0; i < max_iterations && std::abs(b - a) > tol; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  return fc >= fd ? ScalarOptimum{c, fc, evals} : ScalarOptimum{d, fd, evals};
}

NelderMeadResult nelder_mead(const std::function<double(const std::array<double, 2>&)>& f,
                             std::array<double, 2> x0, std::array<double, 2> step,
                             const NelderMeadOptions& options) {
  using Point = std::array<double, 2>;
  std::array<Point, 3> x{x0, x0, x0};
  x[1][0] += step[0];
  x[2][1] += step[1];
  std::array<double, 3> fx{};
  std::size_t evals = 0;
  auto eval = [&](const Point& p) {
    ++evals;
    return f(p);
  };
  for (int i = 0; i < 3; ++i) fx[i] = eval(x[i]);

  auto lerp = [](const Point& a, const Point& b, double t) {
    return Point{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  };

  bool converged = false;
  while (evals < options.max_evaluations) {
    std::array<int, 3> idx{0, 1, 2};
    std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return fx[i] < fx[j]; });
    const std::array<Point, 3> xs{x[idx[0]], x[idx[1]], x[idx[2]]};
    const std::array<double, 3> fs{fx[idx[0]], fx[idx[1]], fx[idx[2]]};
    x = xs;
    fx = fs;

    double diameter = 0.0;
    for (int i = 1; i < 3; ++i) {
      for (int k = 0; k < 2; ++k) diameter = std::max(diameter, std::abs(x[i][k] - x[0][k]));
    }
    if (diameter <= options.x_tol && (options.f_tol <= 0.0 || fx[2] - fx[0] <= options.f_tol)) {
      converged = true;
      break;
    }

    const Point centroid = lerp(x[0], x[1], 0.5);
    const Point reflected = lerp(centroid, x[2], -1.0);
    const double fr = eval(reflected);
    if (fr < fx[0]) {
      const Point expanded = lerp(centroid, x[2], -2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        x[2] = expanded;
        fx[2] = fe;
      } else {
        x[2] = reflected;
        fx[2] = fr;
      }
      continue;
    }
    if (fr < fx[1]) {
      x[2] = reflected;
      fx[2] = fr;
      continue;
    }
    const bool outside = fr < fx[2];
    const Point contracted = outside ? lerp(centroid, reflected, 0.5) : lerp(centroid, x[2], 0.5);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : fx[2])) {
      x[2] = contracted;
      fx[2] = fc;
      continue;
    }
    for (int i = 1; i < 3; ++i) {
      x[i] = lerp(x[0], x[i], 0.5);
      fx[i] = eval(x[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(fx.begin(), fx.end()) - fx.begin());
  return {x[best], fx[best], evals, converged};
}

}  // namespace sobolev
