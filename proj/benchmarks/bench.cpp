#include <benchmark/benchmark.h>

#include <complex>

#include "sphereqed/bessel.hpp"
#include "sphereqed/dynamics.hpp"
#include "sphereqed/entanglement.hpp"
#include "sphereqed/rates.hpp"
#include "sphereqed/sphere.hpp"

namespace {

using namespace sqed;

void BM_LadderJ(benchmark::State& state) {
    const int l_max = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto lad = bessel::ladder_j(l_max, {66.3, 0.0});
        benchmark::DoNotOptimize(lad);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LadderJ)->RangeMultiplier(4)->Range(128, 8192)->Complexity();

void BM_ReflectionArray(benchmark::State& state) {
    const sphere::PermittivityParams mat;
    const sphere::SphereGeometry geom;
    const int l_max = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto b = sphere::reflection_tm_array(l_max, 1.0501, mat, geom);
        benchmark::DoNotOptimize(b);
    }
}
BENCHMARK(BM_ReflectionArray)->Arg(160)->Arg(2000)->Arg(8000);

void BM_PairDecayRates(benchmark::State& state) {
    const sphere::PermittivityParams mat;
    sphere::SphereGeometry geom;
    geom.atom_distance = state.range(0) / 1000.0;
    geom.second_atom_distance = geom.atom_distance;
    for (auto _ : state) {
        auto rs = rates::pair_decay_rates(1.0498984493, geom, mat);
        benchmark::DoNotOptimize(rs);
    }
}
BENCHMARK(BM_PairDecayRates)->Arg(20)->Arg(150)->Arg(500);

void BM_ResonanceResponse(benchmark::State& state) {
    const sphere::PermittivityParams mat;
    const sphere::SphereGeometry geom;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sphere::resonance_response(120, 1.04989845, mat, geom));
    }
}
BENCHMARK(BM_ResonanceResponse);

void BM_VolterraStep(benchmark::State& state) {
    const auto p = dyn::StrongCouplingParams::from_ratios(0.01, 0.01, 1.0);
    dyn::KernelModel k;
    k.amplitude = -0.25 * p.rabi_pm * p.rabi_pm;
    k.decay = p.delta_omega_C;
    const int n = static_cast<int>(state.range(0));
    const double h = 2.0 * M_PI / p.rabi_pm / 400.0;
    for (auto _ : state) {
        auto traj = dyn::volterra_solve(
            k, [](double) { return dyn::Complex{0.0, 0.0}; }, dyn::TimeGrid{0.0, h, n},
            {1.0, 0.0});
        benchmark::DoNotOptimize(traj);
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_VolterraStep)->Arg(1024)->Arg(8192);

void BM_Concurrence(benchmark::State& state) {
    const auto st = ent::build_mixed_state(0.7, ent::MixSign::plus);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ent::concurrence(st));
    }
}
BENCHMARK(BM_Concurrence);

}  // namespace

BENCHMARK_MAIN();
