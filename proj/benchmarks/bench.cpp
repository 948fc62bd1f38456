// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#include "rbisac/channel.hpp"
#include "rbisac/config.hpp"
#include "rbisac/doa.hpp"
#include "rbisac/field_map.hpp"
#include "rbisac/geometry.hpp"
#include "rbisac/random.hpp"
#include "rbisac/resonance.hpp"

#include <benchmark/benchmark.h>

using namespace rbisac;

namespace {

ScenarioConfig sized(int side) {
    ScenarioConfig c;
    c.m_side = c.n_side = side;
    if (side < 40) c.amp_small_signal_gain_db = 70.0;
    return c;
}

void BM_BuildChannel(benchmark::State& state) {
    const auto c = sized(static_cast<int>(state.range(0)));
    const auto g = build_link_geometry(c);
    for (auto _ : state) benchmark::DoNotOptimize(build_loop_channels(g, c));
}
BENCHMARK(BM_BuildChannel)->Arg(8)->Arg(16)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_ResonanceLoop(benchmark::State& state) {
    const auto c = sized(static_cast<int>(state.range(0)));
    const auto g = build_link_geometry(c);
    const auto ch = build_loop_channels(g, c);
    for (auto _ : state) {
        RandomStream rng(1);
        benchmark::DoNotOptimize(run_to_resonance(g, c, rng, ch));
    }
}
BENCHMARK(BM_ResonanceLoop)->Arg(8)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_MusicTrial(benchmark::State& state) {
    const double lambda = wavelength(31e9);
    SnapshotModel m;
    m.array = ArrayManifold{static_cast<int>(state.range(0)), 0.5 * lambda, lambda};
    m.noise_sigma2 = 1.0;
    m = with_snr_db(m, 0.0);
    m.phase_noise_sigma = 0.3;
    RandomStream rng(2);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_doa(m, rng));
}
BENCHMARK(BM_MusicTrial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_FieldMap(benchmark::State& state) {
    const auto c = sized(40);
    const auto g = build_link_geometry(c);
    const auto s = initialize_loop(g, c);
    MapSpec spec = default_map_spec(g);
    spec.nu = spec.nv = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(compute_field_map(g.bs_tx, s.bs_tx_amplitude, c.f1, spec, db_to_linear(c.g_max_dbi)));
}
BENCHMARK(BM_FieldMap)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
