#include <benchmark/benchmark.h>

#include <cmath>

#include "nlwlab/modulation.hpp"
#include "nlwlab/physical.hpp"
#include "nlwlab/profiles.hpp"
#include "nlwlab/quadrature.hpp"
#include "nlwlab/selfsimilar.hpp"
#include "nlwlab/toda.hpp"

using namespace nlwlab;

static void BM_rhs_w(benchmark::State& state) {
    const Params P(3.0);
    const XiGrid g = XiGrid::symmetric(12.0, static_cast<int>(state.range(0)));
    const WState w(soliton_sum({-3.0, 3.0}, {1, -1}, g, P), Field(g));
    for (auto _ : state) benchmark::DoNotOptimize(rhs_w(w, P));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_rhs_w)->Arg(1025)->Arg(2049)->Arg(4097)->Arg(8193)->Complexity();

static void BM_projection(benchmark::State& state) {
    const Params P(3.0);
    const XiGrid g = XiGrid::symmetric(12.0, static_cast<int>(state.range(0)));
    const WState q(soliton(0.5, g, P), soliton(-0.5, g, P));
    for (auto _ : state) {
        const ProjectorBasis b = make_basis(0.2, g, P);
        benchmark::DoNotOptimize(project(q, b, 1, P));
    }
}
BENCHMARK(BM_projection)->Arg(1025)->Arg(4097);

static void BM_modulation(benchmark::State& state) {
    const Params P(3.0);
    const XiGrid g = XiGrid::symmetric(20.0, 2049);
    const WState w(soliton_sum({-4.0, 5.0}, {1, -1}, g, P), Field(g));
    for (auto _ : state) benchmark::DoNotOptimize(solve_modulation(w, 2, {-4.2, 5.2}, {1, -1}, P));
}
BENCHMARK(BM_modulation)->Unit(benchmark::kMillisecond);

static void BM_toda(benchmark::State& state) {
    TodaState st;
    st.s = 1.0;
    const int k = static_cast<int>(state.range(0));
    for (int i = 0; i < k; ++i) {
        st.zeta.push_back(i - 0.5 * (k - 1));
        st.signs.push_back(i % 2 ? -1 : 1);
    }
    for (auto _ : state) benchmark::DoNotOptimize(integrate_toda(st, 1e4));
}
BENCHMARK(BM_toda)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

static void BM_step_u(benchmark::State& state) {
    const Params P(3.0);
    const int n = static_cast<int>(state.range(0));
    USnapshot s;
    s.line = XLine{-1.0, 2.0 / n, n, true};
    for (int i = 0; i < n; ++i) {
        s.u.push_back(4.0 * std::sin(M_PI * s.line.x(i)));
        s.ut.push_back(0.0);
    }
    const double dt = 0.5 * s.line.dx;
    for (auto _ : state) {
        step_u(s, dt, P);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_step_u)->Arg(1024)->Arg(4096);

static void BM_c1_triple(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(c1_triple(2.5));
}
BENCHMARK(BM_c1_triple);
BENCHMARK_MAIN();
