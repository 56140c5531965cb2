// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "lame_spectra/bloch_numerics.hpp"
#include "lame_spectra/curve.hpp"
#include "lame_spectra/volterra.hpp"

using namespace lame_spectra;

namespace {

const EllipticParams params{cplx(0.0, 1.2), cplx(0.17, 0.0), 1e-14};

void BM_Theta1(benchmark::State& state)
{
    const ThetaEvaluator ev(params);
    cplx x(0.31, 0.27);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ev.theta1(x));
        x += cplx(1e-9, 0.0);
    }
}
BENCHMARK(BM_Theta1);

void BM_BandEdges(benchmark::State& state)
{
    const int ell = int(state.range(0));
    const LameContext ctx(ell, params);
    for (auto _ : state)
        benchmark::DoNotOptimize(band_edges(ctx));
}
BENCHMARK(BM_BandEdges)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

void BM_CurveCoeffs(benchmark::State& state)
{
    const LameContext ctx(int(state.range(0)), params);
    for (auto _ : state)
        benchmark::DoNotOptimize(curve_coeffs(ctx));
}
BENCHMARK(BM_CurveCoeffs)->Arg(2)->Arg(6)->Unit(benchmark::kMicrosecond);

void BM_NumericBandEdges(benchmark::State& state)
{
    const RationalEta re{1, long(state.range(0))};
    const ThetaEvaluator ev(EllipticParams{params.tau, re.value(), params.tol});
    for (auto _ : state)
        benchmark::DoNotOptimize(numeric_band_edges(1, re, cplx(0.123456, 0.0), ev));
}
BENCHMARK(BM_NumericBandEdges)->Arg(31)->Arg(61)->Arg(121)->Unit(benchmark::kMillisecond);

void BM_IntegrateFlow(benchmark::State& state)
{
    const ThetaEvaluator ev(params);
    const auto start = find_locus_config(2, ev);
    if (!start) {
        state.SkipWithError("no on-locus configuration found");
        return;
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate_flow(start->cfg, 0.1, 0.01, ev));
}
BENCHMARK(BM_IntegrateFlow)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
