#include <benchmark/benchmark.h>

#include "cvmem/fock.hpp"
#include "cvmem/upload.hpp"
#include "cvmem/wigner.hpp"

using namespace cvmem;

namespace {

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) ? "parallel" : "serial"); }

void BM_SampleGrid(benchmark::State& s)
{
    const auto w = wigner_cat(4.0, 0.5);
    const Grid g{-6, 6, 401, -6, 6, 401};
    for (auto _ : s)
        benchmark::DoNotOptimize(w.sample(g, mode(s)));
    label(s);
}

void BM_PlaneIntegral(benchmark::State& s)
{
    const auto w = wigner_cat(2.0, 0.5);
    for (auto _ : s)
        benchmark::DoNotOptimize(integrate_plane(w.field(), w.support(), 1e-11, mode(s)));
    label(s);
}

void BM_Fidelity(benchmark::State& s)
{
    PostSelectParams p;
    p.kappa = 0.1;
    p.a = 0.5;
    p.B = 0.01;
    p.x0 = 2.0;
    const auto up = closed_form_cat_upload(p, false);
    const auto target = wigner_cat(up.report.x0_prime, p.a / p.d());
    for (auto _ : s)
        benchmark::DoNotOptimize(fidelity(up.w, target, 1e-10, mode(s)));
    label(s);
}

void BM_WignerFromFock(benchmark::State& s)
{
    const auto rho = FockDensity::pure(cat_ket(2.0, 0.5, 82).ket);
    const Grid g{-3, 3, 61, -3, 3, 61};
    for (auto _ : s)
        benchmark::DoNotOptimize(wigner_from_fock(rho, g, mode(s)));
    label(s);
}

void BM_NumericEngineGrid(benchmark::State& s)
{
    const Grid g{-3, 3, 61, -3, 3, 61};
    for (auto _ : s) {
        const auto n = postselect_upload_numeric(wigner_squeezed_photon(1.0), 0.05, 0.01);
        benchmark::DoNotOptimize(n.w.sample(g, mode(s)));
    }
    label(s);
}

} // namespace

BENCHMARK(BM_SampleGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlaneIntegral)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Fidelity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WignerFromFock)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NumericEngineGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
