#include <benchmark/benchmark.h>

#include <cmath>

#include "sobolev/bubble.hpp"
#include "sobolev/deficit.hpp"
#include "sobolev/experiments.hpp"
#include "sobolev/pointwise.hpp"
#include "sobolev/projection.hpp"
#include "sobolev/quadrature.hpp"
#include "sobolev/radial_calculus.hpp"

using namespace sobolev;

namespace {

void BM_IntegrateAlgebraicTail(benchmark::State& state) {
  QuadratureOptions q;
  q.rel_tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  ScopedQuadrature guard(q);
  for (auto _ : state) {
    auto r = integrate([](double x) { return x * x * std::pow(1.0 + x * x, -3.0); }, 0.0, INFINITY);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_IntegrateAlgebraicTail)->Arg(6)->Arg(10)->Arg(13);

void BM_BubbleConstants(benchmark::State& state) {
  const Params P = derive_params(4, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(bubble_constants(P).sharp_constant);
}
BENCHMARK(BM_BubbleConstants);

void BM_GradientNorm(benchmark::State& state) {
  const Params P = derive_params(3, 2.0);
  const RadialProfile u = truncated_bubble(P, 10.0, 1.0);
  const DomainBall dom = DomainBall::ball(3, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(grad_lp_norm(u, 2.0, dom));
}
BENCHMARK(BM_GradientNorm);

void BM_WeakNormMonotone(benchmark::State& state) {
  const Params P = derive_params(3, 2.0);
  const RadialProfile u = truncated_bubble(P, 10.0, 1.0);
  const DomainBall dom = DomainBall::ball(3, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(weak_norm(u, P.p_bar, dom).value);
}
BENCHMARK(BM_WeakNormMonotone);

void BM_WeakNormAnnulus(benchmark::State& state) {
  const DomainBall dom = DomainBall::ball(3, 2.0);
  const RadialProfile u = bump_profile(1.0, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(weak_norm(u, 3.0, dom).value);
}
BENCHMARK(BM_WeakNormAnnulus);

void BM_ProjectPerturbedBubble(benchmark::State& state) {
  const Params P = derive_params(3, state.range(0) / 10.0);
  const RadialProfile w = make_orthogonal_perturbation(perturbation_direction(P), P, {});
  const RadialProfile u = combine(1.0, bubble_profile(P, {}), 1e-2, w, ProfileKind::BubblePlusPerturbation);
  for (auto _ : state) benchmark::DoNotOptimize(project(u, P).distance);
}
BENCHMARK(BM_ProjectPerturbedBubble)->Arg(15)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_ProjectTruncatedBubble(benchmark::State& state) {
  const Params P = derive_params(4, 3.0);
  const RadialProfile u = truncated_bubble(P, 5.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(project(u, P).distance);
}
BENCHMARK(BM_ProjectTruncatedBubble)->Unit(benchmark::kMillisecond);

void BM_DeficitReport(benchmark::State& state) {
  const Params P = derive_params(3, 2.0);
  const RadialProfile u = truncated_bubble(P, 5.0, 1.0);
  const DomainBall dom = DomainBall::ball(3, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(deficit_report(u, P, dom).deficit);
}
BENCHMARK(BM_DeficitReport)->Unit(benchmark::kMillisecond);

void BM_Sweep311(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sweep_311(3.0, 3, static_cast<std::size_t>(state.range(0)), 7).violations);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sweep311)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
