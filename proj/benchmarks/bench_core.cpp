#include <benchmark/benchmark.h>

#include "sphq/eigensolver.hpp"
#include "sphq/quantize.hpp"
#include "sphq/semiclassics.hpp"
#include "sphq/spin_models.hpp"

using namespace sphq;

static void BM_QuantizeCurieWeissSymbol(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const SpherePolynomial h = SpherePolynomial::parse("-0.5 z^2 - 0.5 x").reduced();
  for (auto _ : state) benchmark::DoNotOptimize(quantize(h, N));
  state.SetComplexityN(N);
}
BENCHMARK(BM_QuantizeCurieWeissSymbol)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

static void BM_QuantizeDegreeSix(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const SpherePolynomial h = SpherePolynomial::parse("x^6 - 2 x^2 y^3 z + y z - 0.3").reduced();
  for (auto _ : state) benchmark::DoNotOptimize(quantize(h, N));
}
BENCHMARK(BM_QuantizeDegreeSix)->Arg(256)->Arg(1024);

static void BM_EighTridiagonal(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const QuantizedOperator H = cw_hamiltonian(N, 1.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(eigh(H));
  state.SetComplexityN(N);
}
BENCHMARK(BM_EighTridiagonal)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oNSquared);

static void BM_EighPentadiagonal(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const QuantizedOperator H = lmg_hamiltonian(N, 1.0, 0.5, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(eigh(H));
}
BENCHMARK(BM_EighPentadiagonal)->Arg(256)->Arg(1024)->Arg(2048);

static void BM_GroundState(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const QuantizedOperator H = cw_hamiltonian(N, 1.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(ground_state(H));
}
BENCHMARK(BM_GroundState)->Arg(256)->Arg(1024);

static void BM_HusimiCapMass(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const DickeVector psi = ground_state(cw_hamiltonian(N, 1.0, 0.5)).vector;
  const SpherePoint c = SpherePoint::from_cartesian({0.5, 0.0, 0.8660254037844386});
  for (auto _ : state) benchmark::DoNotOptimize(cap_mass(psi, c, 0.3));
}
BENCHMARK(BM_HusimiCapMass)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
