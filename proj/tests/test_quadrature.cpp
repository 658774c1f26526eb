#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "sobolev/errors.hpp"
#include "sobolev/quadrature.hpp"

using namespace sobolev;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(Quadrature, Polynomial) {
  const auto r = integrate([](double x) { return 3.0 * x * x; }, 0.0, 2.0);
  EXPECT_NEAR(r.value, 8.0, 1e-13);
}

TEST(Quadrature, AlgebraicTail) {
  // int_0^inf dx / (1 + x^2) = pi / 2
  const auto r = integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, kInf);
  EXPECT_NEAR(r.value, std::numbers::pi / 2.0, 1e-11);
  // int_1^inf x^{-3} = 1/2
  EXPECT_NEAR(integrate([](double x) { return std::pow(x, -3.0); }, 1.0, kInf).value, 0.5, 1e-11);
}

TEST(Quadrature, KinkAtBreakpoint) {
  const std::array<double, 1> cut{0.3};
  const auto r = integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, cut);
  EXPECT_NEAR(r.value, 0.5 * (0.09 + 0.49), 1e-14);
  EXPECT_LT(r.evaluations, 200u);
}

TEST(Quadrature, EndpointSingularity) {
  const auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(Quadrature, CancellingIntegrandUsesGlobalScale) {
  // sin over a full period: the signed value is 0, accuracy is judged against int |f|.
  const auto r = integrate([](double x) { return std::sin(x); }, 0.0, 2.0 * std::numbers::pi);
  EXPECT_NEAR(r.value, 0.0, 1e-12);
}

TEST(Quadrature, ScopedOptionsNest) {
  EXPECT_DOUBLE_EQ(current_quadrature().rel_tol, 1e-10);
  {
    ScopedQuadrature outer({1e-6, 1000});
    EXPECT_DOUBLE_EQ(current_quadrature().rel_tol, 1e-6);
    {
      ScopedQuadrature inner({1e-12, 1000000});
      EXPECT_DOUBLE_EQ(current_quadrature().rel_tol, 1e-12);
    }
    EXPECT_DOUBLE_EQ(current_quadrature().rel_tol, 1e-6);
  }
  EXPECT_DOUBLE_EQ(current_quadrature().rel_tol, 1e-10);
}

TEST(Quadrature, EvaluationCapRaises) {
  QuadratureOptions tight;
  tight.rel_tol = 1e-15;
  tight.max_evaluations = 100;
  EXPECT_THROW(integrate([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, {}, tight), NumericError);
}

TEST(Quadrature, NonFiniteRaises) {
  EXPECT_THROW(integrate([](double x) { return 1.0 / (x - 0.5) / 0.0; }, 0.0, 1.0), NumericError);
}

TEST(Quadrature, EmptyInterval) { EXPECT_EQ(integrate([](double) { return 1.0; }, 1.0, 1.0).value, 0.0); }
