#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "umdam/experiment.hpp"
#include "umdam/layout.hpp"
#include "umdam/mapping.hpp"
#include "umdam/timing.hpp"

using namespace umdam;

namespace {

std::vector<std::uint64_t> random_addresses(const AddressMapper& m, std::size_t n) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::uint64_t> d(0, m.capacity() - 1);
    std::vector<std::uint64_t> out(n);
    for (auto& a : out) a = d(rng);
    return out;
}

void BM_Encode(benchmark::State& state) {
    const AddressMapper m(MappingScheme::of(static_cast<SchemeKind>(state.range(0))), DramConfig{});
    const auto addrs = random_addresses(m, 4096);
    std::size_t k = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(m.encode(addrs[k++ & 4095]));
    }
}
BENCHMARK(BM_Encode)->Arg(0)->Arg(1)->Arg(2);

void BM_EncodeDecode(benchmark::State& state) {
    const AddressMapper m(MappingScheme::umdam(), DramConfig{});
    const auto addrs = random_addresses(m, 4096);
    std::size_t k = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(m.decode(m.encode(addrs[k++ & 4095])));
    }
}
BENCHMARK(BM_EncodeDecode);

void BM_ElementAddress(benchmark::State& state) {
    const LayoutPlan p = plan_layout(DramConfig{}, 4096, 16384, 0);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> di(0, 4095), dj(0, 16383);
    for (auto _ : state) {
        benchmark::DoNotOptimize(p.element_address(di(rng), dj(rng)));
    }
}
BENCHMARK(BM_ElementAddress);

void BM_ReplayStream(benchmark::State& state) {
    const DramConfig c;
    const auto bytes = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(replay_npu_stream(c, MappingScheme::umdam(), 0, bytes));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_ReplayStream)->Arg(1 << 20)->Arg(16 << 20)->Unit(benchmark::kMillisecond);

void BM_Relayout(benchmark::State& state) {
    const DramConfig c;
    const auto n = static_cast<std::uint64_t>(state.range(0));
    const PimOptimizedLayout from(c, n, n, 0);
    const LayoutPlan to = plan_npu_layout(c, n, n, total_capacity_bytes(c) / 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(replay_relayout(from, to, c.timing));
    }
}
BENCHMARK(BM_Relayout)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_RunScenario(benchmark::State& state) {
    const Simulator sim{SystemConfig{}};
    Scenario s;
    s.model = "opt-125m";
    s.prefill_len = 128;
    s.decode_len = 128;
    s.variant = Variant::Baseline;
    (void)sim.run(s);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sim.run(s));
    }
}
BENCHMARK(BM_RunScenario)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
