#include "sobolev/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sobolev/errors.hpp"

namespace sobolev {
namespace {

thread_local QuadratureOptions g_options{};

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

struct RuleValue {
  double value;
  double error;
  double l1;
};

// 21-point Kronrod rule with embedded 10-point Gauss rule on [lo, hi].
template <class G>
RuleValue apply_rule(const G& g, double lo, double hi) {
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  const double f0 = g(mid);
  double kronrod = f0 * wk[0];
  double gauss = 0.0;
  double l1 = std::abs(f0) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fp = g(mid + half * x[i]);
    const double fm = g(mid - half * x[i]);
    kronrod += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 1) gauss += (fp + fm) * wg[i / 2];
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half), l1 * std::abs(half)};
}

struct Piece {
  double lo;
  double hi;
  RuleValue rule;
  std::size_t segment;
};

struct ByError {
  bool operator()(const Piece& a, const Piece& b) const { return a.rule.error < b.rule.error; }
};

}  // namespace

const QuadratureOptions& current_quadrature() { return g_options; }

ScopedQuadrature::ScopedQuadrature(const QuadratureOptions& options) : saved_(g_options) {
  g_options = options;
}

ScopedQuadrature::~ScopedQuadrature() { g_options = saved_; }

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, const QuadratureOptions& options) {
  if (!(b > a)) return {};
  if (std::isinf(a)) throw DomainError("integrate: lower limit must be finite");

  std::vector<double> cuts{a};
  for (double c : breakpoints) {
    if (c > a && c < b && std::isfinite(c)) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const bool infinite = std::isinf(b);
  if (infinite && cuts.back() <= 0.0) cuts.push_back(1.0);
  if (!infinite) cuts.push_back(b);

  // Finite segments are integrated in r; the tail [c, inf) in t with r = c / (1 - t)^4.
  const std::size_t finite_count = cuts.size() - 1;
  const double tail_start = cuts.back();
  std::size_t evaluations = 0;
  auto evaluate = [&](std::size_t segment, double x) {
    if (++evaluations > options.max_evaluations) {
      throw NumericError("integrate: evaluation cap reached", std::numeric_limits<double>::infinity());
    }
    double v;
    if (segment < finite_count) {
      v = f(x);
    } else {
      const double s = 1.0 - x;
      const double s2 = s * s;
      const double r = tail_start / (s2 * s2);
      // Past the overflow point the integrand of a convergent tail has underflowed.
      v = std::isfinite(r) ? f(r) : 0.0;
      if (v != 0.0) v *= 4.0 * r / s;
    }
    if (!std::isfinite(v)) {
      throw NumericError("integrate: non-finite integrand value", std::numeric_limits<double>::infinity());
    }
    return v;
  };

  std::priority_queue<Piece, std::vector<Piece>, ByError> heap;
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  auto push = [&](std::size_t segment, double lo, double hi) {
    const auto g = [&](double x) { return evaluate(segment, x); };
    Piece piece{lo, hi, apply_rule(g, lo, hi), segment};
    value += piece.rule.value;
    error += piece.rule.error;
    l1 += piece.rule.l1;
    heap.push(piece);
  };
  for (std::size_t i = 0; i < finite_count; ++i) push(i, cuts[i], cuts[i + 1]);
  if (infinite) push(finite_count, 0.0, 1.0);

  constexpr double kTiny = std::numeric_limits<double>::min();
  const auto target = [&] { return std::max(options.rel_tol * l1, options.abs_tol) + kTiny; };
  while (error > target()) {
    Piece worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi) ||
        (worst.hi - worst.lo) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) {
      break;
    }
    heap.pop();
    value -= worst.rule.value;
    error -= worst.rule.error;
    l1 -= worst.rule.l1;
    push(worst.segment, worst.lo, mid);
    push(worst.segment, mid, worst.hi);
  }

  // Re-sum to remove drift from the running updates.
  value = error = l1 = 0.0;
  for (auto pieces = std::move(heap); !pieces.empty(); pieces.pop()) {
    value += pieces.top().rule.value;
    error += pieces.top().rule.error;
    l1 += pieces.top().rule.l1;
  }
  if (error > target()) {
    throw NumericError("integrate: tolerance not reached", l1 > 0.0 ? error / l1 : error);
  }
  return {value, error, evaluations};
}

}  // namespace sobolev
