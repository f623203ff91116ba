#include <benchmark/benchmark.h>

#include <random>

#include "prism/delta.hpp"
#include "prism/nygaard.hpp"
#include "prism/syntomic.hpp"
#include "prism/witt.hpp"

using namespace prism;

namespace {

QrspPresentation setup(int n, int M) {
    auto P = make_breuil_kisin(3, M, 60, {-3, 1});
    std::vector<i64> r(static_cast<std::size_t>(n) + 1, 0);
    r.back() = 1;
    return make_presentation(P, {r});
}

void BM_HowellForm(benchmark::State& state) {
    const Modulus m(3, 6);
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    ZModMatrix a(m, n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) a.at(r, c) = rng() % m.q;
    for (auto _ : state) benchmark::DoNotOptimize(howell_form(a));
}
BENCHMARK(BM_HowellForm)->Arg(16)->Arg(64)->Arg(128);

void BM_DeltaEval(benchmark::State& state) {
    const Modulus m(3, 4);
    const int Z = static_cast<int>(state.range(0));
    std::mt19937_64 rng(2);
    TruncSeries f(m, Z);
    for (int k = 0; k < Z; ++k) f[k] = rng() % m.q;
    for (auto _ : state) benchmark::DoNotOptimize(delta_eval(f));
}
BENCHMARK(BM_DeltaEval)->Arg(30)->Arg(120);

void BM_WittMul(benchmark::State& state) {
    const CoeffRing C{Modulus(3, 4), 1};
    const int L = static_cast<int>(state.range(0));
    std::vector<TruncSeries> a, b;
    for (int k = 0; k < L; ++k) {
        a.push_back(C.scalar(k + 2));
        b.push_back(C.scalar(3 * k + 1));
    }
    WittVector x(C, a), y(C, b);
    for (auto _ : state) benchmark::DoNotOptimize(witt_mul(x, y));
}
BENCHMARK(BM_WittMul)->DenseRange(2, 4);

void BM_Envelope(benchmark::State& state) {
    auto pres = setup(static_cast<int>(state.range(0)), 4);
    EnvelopeBounds b;
    for (auto _ : state) benchmark::DoNotOptimize(build_envelope(pres, b));
}
BENCHMARK(BM_Envelope)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Nygaard(benchmark::State& state) {
    auto pres = setup(static_cast<int>(state.range(0)), 4);
    for (auto _ : state) {
        auto env = build_envelope(pres, nygaard_bounds(pres, 9, 2), false);
        benchmark::DoNotOptimize(nygaard_filtration(build_frobenius_twist(env, 2), 9));
    }
}
BENCHMARK(BM_Nygaard)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Syntomic(benchmark::State& state) {
    auto pres = setup(static_cast<int>(state.range(0)), 4);
    const int i = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(syntomic(pres, i, 4));
}
BENCHMARK(BM_Syntomic)->Args({1, 0})->Args({1, 1})->Args({2, 1})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
