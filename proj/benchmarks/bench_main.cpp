#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "delaystab/certificates.hpp"
#include "delaystab/engine.hpp"
#include "delaystab/model_certificates.hpp"
#include "delaystab/model_config.hpp"
#include "delaystab/seeds.hpp"

using namespace delaystab;

namespace {

const HopfieldSpec& example() {
  static const HopfieldSpec spec = std::get<HopfieldSpec>(parse_model_config(std::string(example_model_json())));
  return spec;
}

void BM_simulate(benchmark::State& state) {
  const SystemDefinition sys = lower_hopfield(example());
  const HistoryState init = default_seeds(2, sys.window_start).front();
  const auto steps = static_cast<Step>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate(sys, init, steps));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_simulate)->Arg(100)->Arg(1000)->Arg(10000);

void BM_poincare_map(benchmark::State& state) {
  const SystemDefinition sys = lower_hopfield(example());
  HistoryState x = default_seeds(2, sys.window_start).front();
  for (auto _ : state) {
    x = poincare_map(sys, x);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_poincare_map);

void BM_find_periodic_orbit(benchmark::State& state) {
  const SystemDefinition sys = lower_hopfield(example());
  for (auto _ : state) benchmark::DoNotOptimize(find_periodic_orbit(sys, 1e-10, 500));
}
BENCHMARK(BM_find_periodic_orbit);

// Tridiagonal M-matrix 2I - shift - shift^T, exact arithmetic.
void BM_certify_m_matrix_exact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Matrix<Rational> m(n, n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = Rational(2);
    if (i + 1 < n) m(i, i + 1) = m(i + 1, i) = Rational(-1, 2);
  }
  for (auto _ : state) benchmark::DoNotOptimize(certify_m_matrix(m));
}
BENCHMARK(BM_certify_m_matrix_exact)->Arg(2)->Arg(8)->Arg(16);

void BM_lambda_numeric(benchmark::State& state) {
  LambdaInputs in;
  in.n_channels = 4;
  in.tau = 2;
  in.window_start = -3;
  in.period = 10;
  in.leak_magnitude = [](std::size_t i, Step m) {
    return 0.25 * std::abs(std::cos(2.0 * std::numbers::pi * static_cast<double>(m % 10) / 10.0)) / (1.0 + i);
  };
  in.lipschitz = [](std::size_t, Step) { return 0.3; };
  const auto n_max = static_cast<Step>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lambda_numeric(in, 0.9, n_max));
}
BENCHMARK(BM_lambda_numeric)->Arg(50)->Arg(200)->Arg(1000);

void BM_certify_example(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(certify_model(example()));
}
BENCHMARK(BM_certify_example);

}  // namespace

BENCHMARK_MAIN();
