#include "scenrisk/scenrisk.hpp"

#include <benchmark/benchmark.h>

using namespace scenrisk;

namespace {

AdaptedProcess seeded_process(const TreePtr& t, std::uint64_t seed) {
    Rng rng(seed);
    auto x = AdaptedProcess::constant(t, 0.0);
    for (NodeIndex n = 0; n < t->node_count(); ++n) x[n] = rng.uniform(-1.0, 1.0);
    return x;
}

StaticRV seeded_payoff(const TreePtr& t, std::uint64_t seed) {
    Rng rng(seed);
    auto y = StaticRV::constant(t, 0.0);
    for (LeafIndex l = 0; l < t->leaf_count(); ++l) y[l] = rng.uniform(-1.0, 1.0);
    return y;
}

void BM_RhoEvalWorstCase(benchmark::State& state) {
    const auto t = ScenarioTree::uniform_binomial(static_cast<int>(state.range(0)));
    const auto spec = worst_case_spec(t);
    const auto x = seeded_process(t, 1);
    for (auto _ : state) benchmark::DoNotOptimize(rho_eval(spec, x).value);
    state.SetComplexityN(static_cast<std::int64_t>(t->leaf_count() * t->node_count()));
}
BENCHMARK(BM_RhoEvalWorstCase)->DenseRange(2, 10, 2)->Complexity();

void BM_OptionalProjection(benchmark::State& state) {
    const auto t = ScenarioTree::uniform_binomial(static_cast<int>(state.range(0)));
    const auto y = seeded_payoff(t, 2);
    for (auto _ : state) benchmark::DoNotOptimize(optional_projection_static(y)[t->root()]);
    state.SetComplexityN(static_cast<std::int64_t>(t->node_count()));
}
BENCHMARK(BM_OptionalProjection)->DenseRange(4, 16, 4)->Complexity();

void BM_DualProjection(benchmark::State& state) {
    const auto t = ScenarioTree::uniform_binomial(static_cast<int>(state.range(0)));
    const auto spec = worst_case_spec(t);
    const auto raw = RawBiMeasure::embed(spec[0].measure);
    for (auto _ : state) benchmark::DoNotOptimize(dual_projection(raw).op(t->root()));
}
BENCHMARK(BM_DualProjection)->DenseRange(4, 12, 4);

void BM_ConjugateLp(benchmark::State& state) {
    const auto t = ScenarioTree::uniform_binomial(static_cast<int>(state.range(0)));
    const auto spec = worst_case_spec(t);
    // midpoint of the first two generators sits inside the hull
    const auto& a = spec[0].measure;
    const auto& b = spec[1].measure;
    std::vector<double> pr(t->node_count()), op(t->node_count());
    for (NodeIndex n = 0; n < t->node_count(); ++n) {
        pr[n] = 0.5 * (a.pr(n) + b.pr(n));
        op[n] = 0.5 * (a.op(n) + b.op(n));
    }
    const BiMeasure mid(t, pr, op);
    for (auto _ : state) benchmark::DoNotOptimize(conjugate_value(spec, mid).value);
}
BENCHMARK(BM_ConjugateLp)->DenseRange(1, 4, 1)->Unit(benchmark::kMicrosecond);

void BM_Avar(benchmark::State& state) {
    const auto t = ScenarioTree::uniform_binomial(static_cast<int>(state.range(0)));
    const auto y = seeded_payoff(t, 3);
    for (auto _ : state) benchmark::DoNotOptimize(avar(y, QuantileLevel(0.1)));
}
BENCHMARK(BM_Avar)->DenseRange(4, 16, 4);

void BM_LebesgueProbeAvar(benchmark::State& state) {
    std::vector<int> depths;
    for (int d = 1; d <= state.range(0); ++d) depths.push_back(d);
    for (auto _ : state) benchmark::DoNotOptimize(lebesgue_probe(avar_schedule(depths, QuantileLevel(0.1))).verdict);
}
BENCHMARK(BM_LebesgueProbeAvar)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
