// Serial reference kernels against their OpenMP counterparts.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "ergo/dynamics.hpp"
#include "ergo/random.hpp"
#include "ergo/transference.hpp"

using namespace ergo;

namespace {

CyclicSystem<double> gaussian_cycle(std::size_t K) {
  Stream rng(11, {K});
  return sample_cyclic(Family::Gaussian, K, rng);
}

PermutationSystem<double> f64_system(std::size_t atoms) {
  Stream rng(12, {atoms});
  return random_f64_system(rng, atoms, atoms, Family::Gaussian);
}

void BM_CyclicOperatorSerial(benchmark::State& state) {
  const auto sys = gaussian_cycle(static_cast<std::size_t>(state.range(0)));
  const auto op = OscillationOperator::fluc(0.25);
  for (auto _ : state) benchmark::DoNotOptimize(serial::cyclic_operator_values(op, sys));
}

void BM_CyclicOperatorParallel(benchmark::State& state) {
  const auto sys = gaussian_cycle(static_cast<std::size_t>(state.range(0)));
  const auto op = OscillationOperator::fluc(0.25);
  for (auto _ : state) benchmark::DoNotOptimize(cyclic_operator_values(op, sys));
}

void BM_EventMeasureSerial(benchmark::State& state) {
  const auto sys = f64_system(static_cast<std::size_t>(state.range(0)));
  const auto op = OscillationOperator::fluc(0.25);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        serial::event_measure_over_orbit(sys, 256, [&](std::span<const double> x) { return op.at_least(x, 1.0); }));
}

void BM_EventMeasureParallel(benchmark::State& state) {
  const auto sys = f64_system(static_cast<std::size_t>(state.range(0)));
  const auto op = OscillationOperator::fluc(0.25);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        event_measure_over_orbit(sys, 256, [&](std::span<const double> x) { return op.at_least(x, 1.0); }));
}

const std::vector<std::size_t> kSizes{16, 64, 256};

void BM_EstimateConstantSerial(benchmark::State& state) {
  const auto op = OscillationOperator::fluc(0.25);
  for (auto _ : state)
    benchmark::DoNotOptimize(serial::estimate_constant(op, kSizes, Family::Gaussian, state.range(0), 1));
}

void BM_EstimateConstantParallel(benchmark::State& state) {
  const auto op = OscillationOperator::fluc(0.25);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_constant(op, kSizes, Family::Gaussian, state.range(0), 1));
}

}  // namespace

BENCHMARK(BM_CyclicOperatorSerial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CyclicOperatorParallel)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EventMeasureSerial)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EventMeasureParallel)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateConstantSerial)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateConstantParallel)->Arg(20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
