#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "sobolev/errors.hpp"
#include "sobolev/pointwise.hpp"

using namespace sobolev;

namespace {

using Vec = std::vector<double>;

Vec random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> e(-3.0, 3.0);
  const double scale = std::pow(10.0, e(rng));
  Vec v(n);
  for (auto& a : v) a = scale * g(rng);
  return v;
}

double norm(const Vec& v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

// Householder reflection I - 2 h h^T / |h|^2 applied to v.
Vec reflect(const Vec& h, const Vec& v) {
  double hh = 0.0, hv = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    hh += h[i] * h[i];
    hv += h[i] * v[i];
  }
  Vec out(v);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] -= 2.0 * hv / hh * h[i];
  return out;
}

// sup over a Cartesian grid of y = (a, b), x = (1, 0), of (|x+y|^p - 1 - p y_1) / |y|^p.
double gamma_grid(double p) {
  double best = 0.0;
  const int na = 3201, nb = 601;
  for (int i = 0; i < na; ++i) {
    const double a = -12.0 + 16.0 * i / (na - 1);
    for (int j = 0; j < nb; ++j) {
      const double b = 6.0 * j / (nb - 1);
      const double ny2 = a * a + b * b;
      if (ny2 == 0.0) continue;
      const double m = std::sqrt((1.0 + a) * (1.0 + a) + b * b);
      best = std::max(best, (std::pow(m, p) - 1.0 - p * a) / std::pow(ny2, p / 2.0));
    }
  }
  return best;
}

}  // namespace

TEST(Pointwise, QuadraticIdentitiesAreExact) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 2000; ++k) {
    const Vec x = random_vector(rng, 3);
    const Vec y = random_vector(rng, 3);
    const double scale = std::pow(norm(x) + norm(y), 2.0);
    EXPECT_NEAR(check_311(x, y, 2.0), 0.0, 1e-13 * scale);
    // kappa |y|^2 is all that remains of |x+y|^2 - |x|^2 - 2 x.y - (1 - kappa)|y|^2.
    EXPECT_NEAR(check_fz_lower(x, y, 2.0, 0.3, 0.0), 0.3 * norm(y) * norm(y), 1e-13 * scale);
    const double a = x[0], b = y[0];
    EXPECT_NEAR(check_scalar_33(a, b, 2.0), b * b, 1e-13 * (a * a + b * b));
  }
}

TEST(Pointwise, RotationInvariance) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 500; ++k) {
    const Vec x = random_vector(rng, 3);
    const Vec y = random_vector(rng, 3);
    const Vec h = random_vector(rng, 3);
    const Vec rx = reflect(h, x);
    const Vec ry = reflect(h, y);
    const double s25 = std::pow(norm(x) + norm(y), 2.5);
    const double s15 = std::pow(norm(x) + norm(y), 1.5);
    EXPECT_NEAR(check_311(rx, ry, 2.5), check_311(x, y, 2.5), 1e-12 * s25);
    EXPECT_NEAR(check_312(rx, ry, 1.5, 1.4), check_312(x, y, 1.5, 1.4), 1e-12 * s15);
    EXPECT_NEAR(check_fz_lower(rx, ry, 3.0, 0.5, 0.1), check_fz_lower(x, y, 3.0, 0.5, 0.1),
                1e-12 * std::pow(norm(x) + norm(y), 3.0));
    EXPECT_NEAR(check_fz_lower(rx, ry, 1.5, 0.5, 0.1), check_fz_lower(x, y, 1.5, 0.5, 0.1), 1e-12 * s15);
  }
}

TEST(Pointwise, Homogeneity) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 500; ++k) {
    const Vec x = random_vector(rng, 4);
    const Vec y = random_vector(rng, 4);
    const double alpha = 3.7;
    Vec ax(x), ay(y);
    for (auto& a : ax) a *= alpha;
    for (auto& a : ay) a *= alpha;
    const double s = std::pow(norm(x) + norm(y), 3.0);
    EXPECT_NEAR(check_311(ax, ay, 3.0), std::pow(alpha, 3.0) * check_311(x, y, 3.0), 1e-11 * s * 60.0);
    const double s15 = std::pow(norm(x) + norm(y), 1.5);
    EXPECT_NEAR(check_fz_lower(ax, ay, 1.5, 0.4, 0.05), std::pow(alpha, 1.5) * check_fz_lower(x, y, 1.5, 0.4, 0.05),
                1e-11 * s15 * 10.0);
  }
}

TEST(Pointwise, ScalarInequalityIsTheOneDimensionalExpansion) {
  // With kappa = 1 and C1 = 0 the lower expansion is |a+b|^r - |a|^r - r|a|^{r-2} a b.
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (double r : {1.3, 1.5, 2.0, 2.7, 4.0}) {
    for (int k = 0; k < 500; ++k) {
      const double a = u(rng), b = u(rng);
      EXPECT_NEAR(check_fz_lower(Vec{a}, Vec{b}, r, 1.0, 0.0), check_scalar_33(a, b, r),
                  1e-12 * std::pow(std::abs(a) + std::abs(b), r));
    }
  }
}

TEST(Pointwise, GammaApproachesOneAtTwo) {
  const auto e = estimate_gamma_p(1.999);
  EXPECT_NEAR(e.value, 1.0, 0.01);
  EXPECT_EQ(e.name, "gamma_p");
}

TEST(Pointwise, GammaAgainstCartesianGrid) {
  const double grid = gamma_grid(1.5);
  const auto e = estimate_gamma_p(1.5);
  EXPECT_GE(e.value, grid);
  EXPECT_LE(e.value, grid * 1.01);
  // The estimate is the sampled supremum inflated by 1e-3.
  EXPECT_NEAR(e.value / 1.001, grid, 2e-3 * grid);
}

TEST(Pointwise, C1AtTwoIsKappa) {
  for (double kappa : {0.1, 0.5, 0.9}) {
    const auto e = estimate_C1(2.0, kappa);
    EXPECT_NEAR(e.value, kappa, 0.01 * kappa) << kappa;
    ASSERT_TRUE(e.kappa.has_value());
  }
}

TEST(Pointwise, EstimatesAreCachedAndDeterministic) {
  EstimateOptions small;
  small.random_samples = 20000;
  small.seed = 5;
  const auto a = estimate_C1(3.0, 0.5, small);
  const auto b = estimate_C1(3.0, 0.5, small);
  EXPECT_EQ(a.value, b.value);
  EXPECT_GT(a.value, 0.0);
}

TEST(Pointwise, SweepsFindNoViolations) {
  const std::size_t n = 200000;
  for (double p : {2.0, 2.5, 3.0, 4.5}) EXPECT_EQ(sweep_311(p, 3, n, 7).violations, 0u) << p;
  for (double p : {1.3, 1.5, 1.9}) {
    const double g = estimate_gamma_p(p).value;
    EXPECT_EQ(sweep_312(p, g, 3, n, 7).violations, 0u) << p;
  }
  for (double r : {1.5, 2.0, 3.0}) {
    for (double kappa : {0.1, 0.5, 0.9}) {
      const double c1 = estimate_C1(r, kappa).value;
      EXPECT_EQ(sweep_fz_lower(r, kappa, c1, 3, n, 7).violations, 0u) << r << " " << kappa;
    }
  }
  for (double r : {1.2, 1.5, 1.8}) EXPECT_EQ(sweep_fz_quadratic_part(r, 3, n, 7).violations, 0u);
  for (double r : {1.3, 2.0, 3.5}) EXPECT_EQ(sweep_scalar_33(r, n, 7).violations, 0u);
}

TEST(Pointwise, SweepDetectsAnUndersizedConstant) {
  // gamma = 1 is below the sharp constant for p < 2, so violations must appear.
  const auto rep = sweep_312(1.5, 1.0, 3, 100000, 3);
  EXPECT_GT(rep.violations, 0u);
  EXPECT_LT(rep.worst_margin, 0.0);
}

TEST(Pointwise, SweepsAreSeedDeterministic) {
  const auto a = sweep_311(3.0, 3, 50000, 42);
  const auto b = sweep_311(3.0, 3, 50000, 42);
  EXPECT_EQ(a.worst_margin, b.worst_margin);
  EXPECT_EQ(a.worst.x, b.worst.x);
  EXPECT_EQ(a.worst.y, b.worst.y);
}

TEST(Pointwise, DomainErrors) {
  const Vec x{1.0, 0.0}, y{0.5, 0.5}, zero{0.0, 0.0};
  EXPECT_THROW(check_311(x, y, 1.5), DomainError);
  EXPECT_THROW(check_312(x, y, 2.5, 1.0), DomainError);
  EXPECT_THROW(check_fz_lower(x, y, 1.5, 0.0, 0.1), DomainError);
  EXPECT_THROW(check_fz_lower(zero, y, 1.5, 0.5, 0.1), DomainError);
  EXPECT_THROW(fz_quadratic_part(zero, y, 1.5), DomainError);
  EXPECT_THROW(check_scalar_33(0.0, 1.0, 1.5), DomainError);
  EXPECT_THROW(check_311(x, Vec{1.0}, 3.0), DomainError);
  EXPECT_THROW(estimate_gamma_p(2.0), DomainError);
  EXPECT_THROW(estimate_C1(2.0, 1.0), DomainError);
}

TEST(Pointwise, ConstantTableFormat) {
  std::ostringstream out;
  write_constant_table(out, {estimate_C1(2.0, 0.5)});
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("name,r,kappa,value,samples\n", 0), 0u);
  EXPECT_NE(s.find("C1,2.00000000000000000e+00,5.00000000000000000e-01,"), std::string::npos);
}
