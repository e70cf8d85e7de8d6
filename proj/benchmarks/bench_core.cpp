#include <chiralpoint/chiralpoint.hpp>

#include <benchmark/benchmark.h>

using namespace chiralpoint;

namespace
{
SystemParams preset(const char* name)
{
    return load_config(std::string(CHIRALPOINT_PRESET_DIR) + "/" + name + ".json").params;
}

void density_point(benchmark::State& st)
{
    const SystemParams p = preset("fig2");
    double w = p.photon.omega_c;
    for (auto _ : st) {
        benchmark::DoNotOptimize(spectral_density_at(p, w));
        w += 1e-9;
    }
}
BENCHMARK(density_point);

void density_grid(benchmark::State& st)
{
    const SystemParams p = preset("fig2");
    const auto grid = cavity_window(p, static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(spectral_density(p, grid));
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(density_grid)->Arg(1001)->Arg(4001);

void phase_optimum(benchmark::State& st)
{
    const SystemParams p = preset("fig2");
    for (auto _ : st) {
        benchmark::DoNotOptimize(optimize_phase(p));
    }
}
BENCHMARK(phase_optimum)->Unit(benchmark::kMillisecond);

void emission(benchmark::State& st)
{
    const SystemParams p = preset("fig4b");
    const auto grid = emission_grid(p);
    for (auto _ : st) {
        benchmark::DoNotOptimize(emission_spectrum(p, grid));
    }
}
BENCHMARK(emission)->Unit(benchmark::kMillisecond);

void dynamics(benchmark::State& st)
{
    const SystemParams p = preset("fig4f");
    std::vector<double> t;
    for (double x : linspace(0.0, 1000.0, 501)) {
        t.push_back(units::fs_to_internal_time(x));
    }
    const auto method = st.range(0) == 0 ? DynamicsMethod::SpectralFT : DynamicsMethod::DirectODE;
    for (auto _ : st) {
        benchmark::DoNotOptimize(qe_dynamics(p, t, method));
    }
}
BENCHMARK(dynamics)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void steady(benchmark::State& st)
{
    const SystemParams p = preset("fig5");
    Drive d;
    d.omega_L = p.photon.omega_c;
    for (auto _ : st) {
        benchmark::DoNotOptimize(power_budget(steady_state(p, d), p));
        d.omega_L += 1e-9;
    }
}
BENCHMARK(steady);

void yield_scan(benchmark::State& st)
{
    const SystemParams p = preset("fig5");
    for (auto _ : st) {
        benchmark::DoNotOptimize(yield_cell(p));
    }
}
BENCHMARK(yield_scan)->Unit(benchmark::kMillisecond);

void scatter_routes(benchmark::State& st)
{
    const SystemParams p = preset("fig7b");
    const auto grid = linspace(-4e-4, 4e-4, 2001);
    const auto route = st.range(0) == 0 ? ScatterRoute::Direct : ScatterRoute::Eigen;
    for (auto _ : st) {
        benchmark::DoNotOptimize(scatter_spectrum(p, grid, route));
    }
}
BENCHMARK(scatter_routes)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void decomposition(benchmark::State& st)
{
    const SystemParams p = preset("fig7c");
    for (auto _ : st) {
        benchmark::DoNotOptimize(decompose_sigma0(p));
    }
}
BENCHMARK(decomposition);
} // namespace

BENCHMARK_MAIN();
