#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "tlisim/circuit.hpp"
#include "tlisim/config.hpp"
#include "tlisim/metrics.hpp"
#include "tlisim/simulator.hpp"

namespace {

using namespace tlisim;

void BM_NetworkStep(benchmark::State& state) {
    SimConfig cfg;
    const SwitchedNetwork network(cfg);
    CircuitState circuit{.i_la = 5.0, .i_lb = -5.0, .v_cpv = -200.0,
                         .v_dc = 400.0, .t = 0.0};
    for (auto _ : state) {
        network.step(OperatingMode::ActivePositive, 5.5, circuit);
        benchmark::DoNotOptimize(circuit);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NetworkStep);

void BM_ClosedLoopGridCycle(benchmark::State& state) {
    SimConfig cfg;
    cfg.topology = static_cast<TopologyKind>(state.range(0));
    cfg.duration = 0.02;  // one 50 Hz period
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_simulation(cfg));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<int64_t>(cfg.duration / cfg.dt));
}
BENCHMARK(BM_ClosedLoopGridCycle)
    ->DenseRange(0, 3)
    ->Unit(benchmark::kMillisecond);

void BM_LeakageRms(benchmark::State& state) {
    TimeSeries series{.name = "i_cm", .unit = "A", .dt = 1e-6, .samples = {}};
    series.samples.resize(500001);
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
        series.samples[i] =
            0.3 * std::sin(2.0 * std::numbers::pi * 22.8e3 * 1e-6 *
                           static_cast<double>(i));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(rms(series));
    }
}
BENCHMARK(BM_LeakageRms);

void BM_GridThd(benchmark::State& state) {
    TimeSeries series{.name = "i", .unit = "A", .dt = 1e-6, .samples = {}};
    series.samples.resize(200001);
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
        const double t = 1e-6 * static_cast<double>(i);
        series.samples[i] =
            14.0 * std::sin(2.0 * std::numbers::pi * 50.0 * t) +
            0.4 * std::sin(2.0 * std::numbers::pi * 150.0 * t);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(thd(series, 50.0, 40));
    }
    state.SetLabel("harmonics 2..40 over 10 cycles");
}
BENCHMARK(BM_GridThd)->Unit(benchmark::kMillisecond);

void BM_RingSpectrumPeak(benchmark::State& state) {
    SimConfig cfg;
    cfg.topology = TopologyKind::H5Plain;
    cfg.ideal_dc_source = true;
    const SwitchedNetwork network(cfg);
    TimeSeries ring{.name = "v_cpv", .unit = "V", .dt = cfg.dt, .samples = {}};
    CircuitState circuit{.i_la = 0.0, .i_lb = 0.0, .v_cpv = -200.0,
                         .v_dc = 400.0, .t = 0.0};
    for (int i = 0; i < (1 << 16); ++i) {
        network.step(OperatingMode::FreewheelPositive, 0.0, circuit);
        ring.samples.push_back(circuit.v_cpv);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(dominant_frequency(ring, 5e3));
    }
    state.SetLabel("65536-point window");
}
BENCHMARK(BM_RingSpectrumPeak)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
