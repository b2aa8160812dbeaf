#include <benchmark/benchmark.h>

#include <cmath>

#include "osgood/euler.hpp"
#include "osgood/fields.hpp"
#include "osgood/flow.hpp"
#include "osgood/modulus.hpp"
#include "osgood/rng.hpp"

namespace {

void BM_R_inverse(benchmark::State& state) {
  const osgood::Modulus phi = osgood::Modulus::log_n(static_cast<int>(state.range(0)));
  const double y = osgood::R_of(phi, 1e-9);
  for (auto _ : state) benchmark::DoNotOptimize(osgood::R_inverse(phi, y));
}
BENCHMARK(BM_R_inverse)->Arg(1)->Arg(2)->Arg(3);

void BM_besov_functional(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  osgood::CounterRng rng(1);
  const osgood::GridField f = osgood::random_band_limited(2, n, 1.0, n / 4, rng);
  const osgood::RadialFn weight = [](double r) { return r; };
  for (auto _ : state) benchmark::DoNotOptimize(osgood::besov_functional(f, weight, 0.5));
}
BENCHMARK(BM_besov_functional)->Arg(32)->Arg(64)->Arg(128);

void BM_transport_solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  osgood::CounterRng rng(2);
  const osgood::GridField theta0 = osgood::random_band_limited(2, n, 1.0, 4, rng);
  const osgood::VelocityField u = osgood::shear_field();
  osgood::TransportOptions opts;
  opts.tol = 1e-8;
  opts.force_cubic = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(osgood::transport_solve(u, theta0, 0.5, opts));
}
BENCHMARK(BM_transport_solve)->Args({32, 1})->Args({32, 0})->Args({64, 1});

void BM_euler_step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  osgood::EulerSolver solver(n);
  osgood::ProfileParams profile;
  const osgood::GridField omega = osgood::make_initial_vorticity(profile, n);
  osgood::EulerState s = solver.make_state(omega, 1e-4);
  for (auto _ : state) solver.step(s);
}
BENCHMARK(BM_euler_step)->Arg(64)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
