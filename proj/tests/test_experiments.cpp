#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sobolev/bubble.hpp"
#include "sobolev/deficit.hpp"
#include "sobolev/errors.hpp"
#include "sobolev/experiments.hpp"
#include "sobolev/projection.hpp"
#include "sobolev/quadrature.hpp"
#include "sobolev/radial_calculus.hpp"

using namespace sobolev;

namespace {

std::vector<double> eps_values(std::size_t steps) {
  std::vector<double> out;
  for (const auto& pt : perturbation_grid(steps)) out.push_back(pt.eps);
  return out;
}

FamilySpec spec_of(FamilyKind kind, int N, double p, std::vector<FamilyPoint> grid) {
  FamilySpec s;
  s.kind = kind;
  s.params = derive_params(N, p);
  s.grid = std::move(grid);
  return s;
}

}  // namespace

TEST(Family, TruncatedBubbleIsNormalizedAndSupported) {
  const auto spec = spec_of(FamilyKind::TruncatedBubble, 3, 2.0, {{10.0, 1.0, 0.0, 0.5}});
  const auto fam = generate_family(spec);
  ASSERT_EQ(fam.members.size(), 1u);
  const auto& u = fam.members[0].u;
  EXPECT_LE(u.support_radius(), 1.0);
  EXPECT_EQ(u.value(1.0 + 1e-9), 0.0);
  const double s6 = oracle::sphere(3) * oracle::simpson([&](double r) { return std::pow(u.value(r), 6.0) * r * r; },
                                                        0.0, 1.0, 40000);
  EXPECT_NEAR(std::pow(s6, 1.0 / 6.0), 1.0, 1e-8);
}

TEST(Family, PerturbedBubbleAtZeroIsTheBubble) {
  const auto spec = spec_of(FamilyKind::PerturbedBubble, 3, 2.0, {FamilyPoint{}});
  const auto fam = generate_family(spec);
  ASSERT_EQ(fam.members.size(), 1u);
  const oracle::Bubble b(3, 2.0);
  for (double r : {0.0, 0.3, 1.0, 7.0, 100.0}) EXPECT_DOUBLE_EQ(fam.members[0].u.value(r), b(r));
}

TEST(Family, PerturbedBubbleDistance) {
  FamilyPoint pt;
  pt.eps = 1e-2;
  const auto spec = spec_of(FamilyKind::PerturbedBubble, 3, 2.0, {pt});
  const auto fam = generate_family(spec);
  const auto proj = project(fam.members[0].u, spec.params);
  EXPECT_GT(proj.distance, 0.0);
  EXPECT_LE(proj.distance, 2e-2);
}

TEST(Family, RejectionsCarryReasons) {
  FamilyPoint bad;
  bad.lambda = 2.0;  // R left at infinity
  const auto spec = spec_of(FamilyKind::TruncatedBubble, 3, 2.0, {{2.0, 1.0, 0.0, 0.5}, bad});
  const auto fam = generate_family(spec);
  EXPECT_EQ(fam.members.size(), 1u);
  ASSERT_EQ(fam.rejected.size(), 1u);
  EXPECT_EQ(fam.rejected[0].index, 1u);
  EXPECT_NE(fam.rejected[0].reason.find("finite R"), std::string::npos);
  EXPECT_THROW(generate_family(spec_of(FamilyKind::Plateau, 3, 2.0, {})), DomainError);
  EXPECT_THROW(parse_family_kind("spiral"), DomainError);
  EXPECT_EQ(parse_family_kind("plateau"), FamilyKind::Plateau);
}

TEST(Family, SobolevPositivityOnAThousandProfiles) {
  std::size_t count = 0;
  for (auto [N, p] : {std::pair{3, 2.0}, {4, 3.0}, {3, 1.5}, {5, 2.5}}) {
    std::vector<FamilyPoint> trunc, plat;
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        trunc.push_back({std::pow(10.0, -0.5 + 0.3 * i), std::pow(10.0, -1.0 + 0.25 * j), 0.0, 0.5});
        plat.push_back({1.0, std::pow(10.0, -1.0 + 0.25 * j), 0.0, 0.05 + 0.09 * i});
      }
    }
    const auto pert = perturbation_grid(50, 0.5, 1e-4);
    for (const auto& spec : {spec_of(FamilyKind::TruncatedBubble, N, p, trunc),
                             spec_of(FamilyKind::Plateau, N, p, plat),
                             spec_of(FamilyKind::PerturbedBubble, N, p, pert)}) {
      const auto fam = generate_family(spec);
      EXPECT_TRUE(fam.rejected.empty());
      for (const auto& m : fam.members) {
        const auto v = evaluate_deficit(m.u, spec.params, m.dom);
        const double gp = std::pow(grad_lp_norm(m.u, p, m.dom), p);
        EXPECT_GE(v.raw, -1e-10 * gp) << to_string(spec.kind) << " " << N << " " << p << " " << m.index;
        ++count;
      }
    }
  }
  EXPECT_GE(count, 1000u);
}

TEST(Slope, LineFit) {
  const auto f = fit_line({{0.0, 1.0}, {1.0, 3.0}, {2.0, 5.0}});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.residual, 0.0, 1e-14);
  EXPECT_THROW(fit_line({{0.0, 1.0}}), ExperimentError);
  EXPECT_THROW(fit_line({{1.0, 1.0}, {1.0, 2.0}}), ExperimentError);
}

TEST(Sharpness, QuadraticOrderAtPTwo) {
  const auto P = derive_params(3, 2.0);
  const auto f = sharpness_experiment(P, eps_values(9));
  EXPECT_NEAR(f.slope, 2.0, 0.05);
  EXPECT_GE(f.points.size(), 5u);
  for (std::size_t i = 0; i < f.deficits.size(); ++i) {
    EXPECT_LE(f.deficits[i], f.cap_constant * f.caps[i] * (1.0 + 1e-12));
  }
}

TEST(Sharpness, DeficitMatchesTheExpansionOracle) {
  // p = 2: the cross term of |grad(U + eps w)|^2 vanishes, so the deficit is
  // ||grad U||^2 + eps^2 - S^2 ||U + eps w||_6^2, evaluated here by log-r Simpson.
  const auto P = derive_params(3, 2.0);
  const auto w = perturbation_direction(P);
  const oracle::Bubble b(3, 2.0);
  const double S = oracle::talenti(3, 2.0);
  const double grad2 = std::pow(S, 3.0);
  for (double eps : {1e-1, 1e-2}) {
    auto f6 = [&](double r) { return std::pow(b(r) + eps * w.value(r), 6.0) * r * r; };
    const double crit6 = oracle::sphere(3) * (oracle::simpson(f6, 0.0, 1e-3, 200) +
                                              oracle::simpson_log(f6, 1e-3, 0.5, 4000) +
                                              oracle::simpson(f6, 0.5, 2.0, 8000) +
                                              oracle::simpson_log(f6, 2.0, 1e6, 20000));
    const double expected = grad2 + eps * eps - S * S * std::pow(crit6, 1.0 / 3.0);
    const auto u = combine(1.0, bubble_profile(P, {}), eps, w);
    const double got = deficit(u, P, DomainBall::whole_space(3));
    EXPECT_NEAR(got, expected, 1e-6 * expected) << eps;
  }
}

TEST(Sharpness, BracketedOrders) {
  const auto f43 = sharpness_experiment(derive_params(4, 3.0), eps_values(9));
  EXPECT_GE(f43.slope, 1.9);
  EXPECT_LE(f43.slope, 3.1);
  const auto f315 = sharpness_experiment(derive_params(3, 1.5), eps_values(9));
  EXPECT_GE(f315.slope, 1.4);
  EXPECT_LE(f315.slope, 2.1);
}

TEST(Sharpness, GridValidation) {
  const auto P = derive_params(3, 2.0);
  EXPECT_THROW(sharpness_experiment(P, {1e-2, 5e-3}), DomainError);
  EXPECT_THROW(sharpness_experiment(P, {0.5, 1e-3}), DomainError);
  EXPECT_THROW(sharpness_experiment(P, {1e-1, 1e-3}), ExperimentError);
}

TEST(Scan, Thm11TruncatedBubbles) {
  const auto spec = spec_of(FamilyKind::TruncatedBubble, 3, 2.0, truncated_bubble_grid());
  const auto s = constant_scan(Theorem::Thm11, spec);
  EXPECT_EQ(s.admissible, 16u);
  EXPECT_EQ(s.violations, 0u);
  EXPECT_GT(s.extremum, 0.0);
  EXPECT_EQ(s.extremum_by_R.size(), 4u);
  EXPECT_GT(s.R_spread, 0.0);
  // Rows with equal lambda R are rescalings of each other and share the ratio.
  auto ratio_at = [&](double lambda, double R) {
    for (const auto& r : s.rows) {
      if (r.point.lambda == lambda && r.point.R == R) return r.ratio;
    }
    return std::nan("");
  };
  EXPECT_NEAR(ratio_at(10.0, 0.5), ratio_at(5.0, 1.0), 1e-6 * ratio_at(5.0, 1.0));
  EXPECT_NEAR(ratio_at(10.0, 2.0), ratio_at(5.0, 4.0), 1e-6 * ratio_at(5.0, 4.0));
  EXPECT_THROW(constant_scan(Theorem::Thm11, spec_of(FamilyKind::TruncatedBubble, 3, 1.4, truncated_bubble_grid())),
               HypothesisError);
}

TEST(Scan, Cor12AndLemma) {
  const auto spec = spec_of(FamilyKind::TruncatedBubble, 3, 2.0, truncated_bubble_grid());
  const auto c = constant_scan(Theorem::Cor12, spec);
  EXPECT_EQ(c.violations, 0u);
  EXPECT_GT(c.extremum, 0.0);
  EXPECT_DOUBLE_EQ(c.t, 1.5);
  const auto l = constant_scan(Theorem::Lemma21, spec);
  EXPECT_EQ(l.violations, 0u);
  EXPECT_GT(l.admissible, 0u);
  EXPECT_LT(l.admissible, 16u);
  EXPECT_LE(l.c0, l.C0);
  for (const auto& r : l.rows) {
    if (!r.admissible) EXPECT_NE(r.reason.find("small deficit"), std::string::npos);
  }
}

TEST(Scan, Thm13StableUnderToleranceHalving) {
  const auto spec = spec_of(FamilyKind::PerturbedBubble, 3, 2.0, perturbation_grid(5));
  const auto a = constant_scan(Theorem::Thm13, spec);
  QuadratureOptions q = current_quadrature();
  q.rel_tol *= 0.5;
  ScopedQuadrature guard(q);
  const auto b = constant_scan(Theorem::Thm13, spec);
  EXPECT_TRUE(std::isfinite(a.extremum));
  EXPECT_FALSE(a.lower_bound);
  EXPECT_NEAR(b.extremum, a.extremum, 0.05 * a.extremum);
}

TEST(Scan, ManifoldPointsLeaveNothingAdmissible) {
  const auto spec = spec_of(FamilyKind::PerturbedBubble, 3, 2.0, {FamilyPoint{}, FamilyPoint{}});
  try {
    constant_scan(Theorem::Fz19, spec);
    FAIL() << "expected ExperimentError";
  } catch (const ExperimentError& e) {
    EXPECT_NE(std::string(e.what()).find("zero admissible"), std::string::npos);
  }
}

TEST(Scan, CsvIsDeterministicAndComplete) {
  const auto spec = spec_of(FamilyKind::TruncatedBubble, 4, 3.0, truncated_bubble_grid());
  std::ostringstream a, b;
  write_scan_csv(a, constant_scan(Theorem::Thm11, spec));
  write_scan_csv(b, constant_scan(Theorem::Thm11, spec));
  EXPECT_EQ(a.str(), b.str());
  std::istringstream in(a.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("theorem,index,N,p,lambda,R,eps,inner,admissible,grad_p,crit,weak,deficit", 0), 0u);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find("e+"), std::string::npos);
  }
  EXPECT_EQ(rows, 16u);
}
