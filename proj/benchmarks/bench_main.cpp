#include <benchmark/benchmark.h>

#include "levelshift/constrained_search.hpp"
#include "levelshift/deflation.hpp"
#include "levelshift/ground_engines.hpp"
#include "levelshift/models.hpp"
#include "levelshift/rng.hpp"

using namespace levelshift;

static void BM_Ground(benchmark::State& state, Engine engine) {
  const Index n = state.range(0);
  const HermitianOperator h = random_hermitian(n, 17);
  SolverConfig cfg;
  cfg.engine = engine;
  if (engine == Engine::rq_descent || engine == Engine::shifted_power) cfg.residual_tol = 1e-8;
  for (auto _ : state) benchmark::DoNotOptimize(solve_ground(h, cfg));
}
BENCHMARK_CAPTURE(BM_Ground, exact, Engine::exact)->Arg(64)->Arg(256);
BENCHMARK_CAPTURE(BM_Ground, lanczos, Engine::lanczos)->Arg(64)->Arg(256);
BENCHMARK_CAPTURE(BM_Ground, rq_descent, Engine::rq_descent)->Arg(64)->Arg(256);

static void BM_DeflatedApply(benchmark::State& state) {
  const Index n = state.range(0);
  const HermitianOperator h = random_hermitian(n, 5);
  SolverConfig cfg;
  const GroundResult g = solve_ground(h, cfg);
  const HermitianOperator h1 = build_deflated(h, g.eigenspace, 10.0, 1e-8);
  const StateVector v = random_state(n, 9);
  for (auto _ : state) benchmark::DoNotOptimize(apply(h1, v));
}
BENCHMARK(BM_DeflatedApply)->Arg(64)->Arg(512);

static void BM_FirstExcited(benchmark::State& state) {
  ModelSpec m;
  m.kind = ModelKind::heisenberg;
  m.sites = static_cast<int>(state.range(0));
  m.params = {{"J", 1.0}};
  m.boundary = Boundary::periodic;
  const HermitianOperator h = build(m);
  SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(first_excited(h, cfg));
}
BENCHMARK(BM_FirstExcited)->Arg(8)->Arg(10);

static void BM_EvaluateF(benchmark::State& state) {
  ModelSpec m;
  m.kind = ModelKind::hubbard;
  m.sites = 2;
  m.params = {{"t", 1.0}, {"U", 2.0}};
  SolverConfig cfg;
  cfg.engine = Engine::exact;
  const Eigenspace g = solve_ground(build(m), cfg).eigenspace;
  DensityVector rho;
  rho.occupations = {0.7, 1.3};
  rho.particle_number = 2;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_F(m, g, 5.0, rho));
}
BENCHMARK(BM_EvaluateF);
BENCHMARK_MAIN();
