#include "outage/charlier.hpp"
#include "outage/gilpelaez.hpp"
#include "outage/montecarlo.hpp"
#include "outage/spa.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

using namespace outage;

namespace {

CaseBModel case_b(double num_bs) {
    CaseBModel m;
    m.geom.a = 30.0;
    m.geom.R = 150.0;
    m.geom.alpha = 4.0;
    m.geom.window = 1000.0;
    m.geom.lambda = num_bs / (std::numbers::pi * 1e6);
    m.theta = 10.0;
    return m;
}

CaseAModel binomial(int L) {
    CaseAModel m;
    m.aggregation = CaseAModel::Aggregation::binomial;
    m.L = L;
    m.p = 0.2;
    m.theta = 0.1;
    return m;
}

void BM_GilPelaezCaseA(benchmark::State& st) {
    const auto k = case_a_cgf(binomial(static_cast<int>(st.range(0))));
    for (auto _ : st) benchmark::DoNotOptimize(outage_gp(*k, 0.0).p_out);
}
BENCHMARK(BM_GilPelaezCaseA)->Arg(4)->Arg(40);

void BM_GilPelaezCaseB(benchmark::State& st) {
    const auto k = case_b_cgf(case_b(static_cast<double>(st.range(0))));
    for (auto _ : st) benchmark::DoNotOptimize(outage_gp(*k, 0.0).p_out);
}
BENCHMARK(BM_GilPelaezCaseB)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SpaCaseB(benchmark::State& st) {
    const auto k = case_b_cgf(case_b(200.0));
    const auto base = static_cast<BaseKind>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(outage_spa(*k, 0.0, base).p_out);
    st.SetLabel(to_string(base));
}
BENCHMARK(BM_SpaCaseB)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_CharlierHermite(benchmark::State& st) {
    const auto m = case_b(5000.0);
    const auto kap = omega_cumulants(m.geom, FadingModel::unit(), m.theta, 6);
    for (auto _ : st) benchmark::DoNotOptimize(outage_hermite(kap, 0.0, 6).p_out);
}
BENCHMARK(BM_CharlierHermite);

void BM_CharlierT(benchmark::State& st) {
    const auto m = case_b(1000.0);
    const auto kap = omega_cumulants(m.geom, FadingModel::unit(), m.theta, 16);
    for (auto _ : st) benchmark::DoNotOptimize(outage_krishnamoorthy(kap, 0.0).p_out);
}
BENCHMARK(BM_CharlierT)->Unit(benchmark::kMillisecond);

void BM_MonteCarloCaseB(benchmark::State& st) {
    SimConfig sc;
    sc.trials = 20000;
    sc.workers = 1;
    sc.model = case_b(static_cast<double>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(simulate(sc).p_hat);
    st.SetItemsProcessed(st.iterations() * sc.trials);
}
BENCHMARK(BM_MonteCarloCaseB)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
