#include <benchmark/benchmark.h>

#include "lipkin/circuits.hpp"
#include "lipkin/hull_geometry.hpp"
#include "lipkin/lmg_exact.hpp"
#include "lipkin/qubit_sim.hpp"
#include "lipkin/sweep.hpp"

#include <random>

using namespace lipkin;

static void BM_GroundState(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    lmg::LmgParams p{1.0, 1.2 / (n - 1), n};
    for (auto _ : state) {
        benchmark::DoNotOptimize(lmg::ground_state(p));
    }
}
BENCHMARK(BM_GroundState)->Arg(10)->Arg(100)->Arg(1000);

static void BM_ExactSweep501(benchmark::State& state) {
    sweep::SweepConfig c;
    c.n_particles = static_cast<int>(state.range(0));
    c.epsilon_values = {1.0};
    c.lambda_grid = {-25.0, 25.0, 501, {}};
    c.mode = sweep::Mode::Exact;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep::run_exact_sweep(c));
    }
}
BENCHMARK(BM_ExactSweep501)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_QuickHull(benchmark::State& state) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<hull::Vec3> pts;
    for (int i = 0; i < state.range(0); ++i) pts.push_back({u(rng), u(rng), u(rng)});
    for (auto _ : state) {
        benchmark::DoNotOptimize(hull::quickhull3(pts, {}));
    }
}
BENCHMARK(BM_QuickHull)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_NoisyCircuit(benchmark::State& state) {
    lmg::LmgParams params{1.0, 1.0, 4};
    const auto target = ansatz::exact_coefficients(params);
    const auto angles = ansatz::solve_angles(target);
    const auto circ = ansatz::build_circuit(4, angles, target.flipped);
    sim::NoiseModel nm;
    nm.extra_damping_per_gate = 0.02;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sim::run_circuit(circ, nm));
    }
}
BENCHMARK(BM_NoisyCircuit);

static void BM_SampleCounts(benchmark::State& state) {
    auto st = sim::QuantumState::statevector(4);
    for (int q = 0; q < 4; ++q) st.apply_gate(sim::Gate::h(q));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sim::sample_counts(st, state.range(0), 11));
    }
}
BENCHMARK(BM_SampleCounts)->Arg(1 << 13)->Arg(1 << 14);

BENCHMARK_MAIN();
