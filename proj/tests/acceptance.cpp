// Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>

#include "oracles.hpp"
#include "umdam/experiment.hpp"
#include "umdam/layout.hpp"
#include "umdam/mapping.hpp"
#include "umdam/timing.hpp"

using namespace umdam;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const Simulator& simulator() {
    static const Simulator s{SystemConfig{}};
    return s;
}

const std::map<std::string, std::string>& criterion_titles() {
    static const std::map<std::string, std::string> titles = {
        {"C1_MappingBijectivity", "1 mapping bijectivity"},
        {"C2_BitArithmetic", "2 bit-arithmetic anchor"},
        {"C3_ColumnLocality", "3 column locality"},
        {"C4_InterleavingPreservation", "4 interleaving preservation"},
        {"C5_NoDuplication", "5 no duplication / footprint"},
        {"C6_TtftTrend", "6 TTFT trend"},
        {"C7_TtltTrend", "7 TTLT trend"},
        {"C8_TimingOracle", "8 timing-oracle consistency"},
        {"C9_PlacementOracle", "9 placement oracle"},
    };
    return titles;
}

class CriterionPrinter : public testing::EmptyTestEventListener {
  public:
    void OnTestEnd(const testing::TestInfo& info) override {
        const auto it = criterion_titles().find(info.name());
        const std::string title = it == criterion_titles().end() ? info.name() : it->second;
        const bool ok = info.result()->Passed();
        std::cout << "[criterion " << title << "] " << (ok ? "PASS" : "FAIL") << std::endl;
    }
};

}  // namespace

TEST(Acceptance, C1_MappingBijectivity) {
    DramConfig c;
    c.channels = 2;
    c.ranks_per_channel = 1;
    c.banks_per_rank = 4;
    c.rows_per_bank = 16;
    c.row_size_bytes = 512;
    const auto t0 = Clock::now();
    std::uint64_t failures = 0;
    for (const auto kind : {SchemeKind::Umdam, SchemeKind::Conventional, SchemeKind::PimOpt}) {
        const AddressMapper m(MappingScheme::of(kind), c);
        std::set<std::uint64_t> packed;
        const auto w = oracle::widths(c);
        for (std::uint64_t a = 0; a < m.capacity(); ++a) {
            const DramCoord x = m.encode(a);
            if (m.decode(x) != a) ++failures;
            // Pack the coordinate by field (independent of the scheme) to check injectivity.
            std::uint64_t key = x.row;
            key = (key << w.col_m) | x.col_m;
            key = (key << w.bank) | x.bank;
            key = (key << w.rank) | x.rank;
            key = (key << w.channel) | x.channel;
            key = (key << w.col_l) | x.col_l;
            key = (key << w.offset) | x.offset;
            packed.insert(key);
        }
        failures += m.capacity() - packed.size();
        std::cout << "  " << scheme_name(kind) << ": " << m.capacity() << " addresses\n";
    }
    const double elapsed = seconds_since(t0);
    std::cout << "  failures " << failures << ", " << elapsed << " s\n";
    EXPECT_EQ(failures, 0u);
    EXPECT_LT(elapsed, 10.0);
}

TEST(Acceptance, C2_BitArithmetic) {
    const BitFields b = derive_bitfields(lpddr5_table1());
    std::cout << "  offset " << b.offset << ", col_L " << b.col_l << ", col_M " << b.col_m << '\n';
    EXPECT_EQ(b.offset, 5u);
    EXPECT_EQ(b.col_l, 3u);
    EXPECT_EQ(b.col_m, 3u);
    EXPECT_EQ(b.column(), 6u);
}

TEST(Acceptance, C3_ColumnLocality) {
    const DramConfig c;
    for (const auto& m : builtin_models()) {
        const std::uint64_t d = m.embedding_dim;
        for (const auto& [K, N] : {std::pair{d, 4 * d}, std::pair{4 * d, d}}) {
            VerifyOptions opts;
            opts.samples = 100000;
            const PlanReport r = verify_plan(plan_layout(c, K, N, 0), opts);
            std::cout << "  " << m.name << " " << K << "x" << N << ": " << r.elements_checked << " elements, "
                      << r.locality_violations << " locality violations, " << r.collisions << " collisions\n";
            EXPECT_GE(r.elements_checked, 100000u);
            EXPECT_EQ(r.locality_violations, 0u);
            EXPECT_EQ(r.collisions, 0u);
        }
    }
    // The largest matrix named explicitly.
    const PlanReport big = verify_plan(plan_layout(c, 7168, 28672, 0));
    EXPECT_GE(big.elements_checked, 100000u);
    EXPECT_TRUE(big.ok());

    // Exhaustive, with columns checked against the placement oracle.
    const LayoutPlan p = plan_layout(c, 256, 128, 0);
    const PlanReport r = verify_plan(p);
    EXPECT_TRUE(r.exhaustive);
    EXPECT_EQ(r.elements_checked, 256u * 128u);
    EXPECT_EQ(r.locality_violations, 0u);
    EXPECT_EQ(r.collisions, 0u);
    const auto ref = oracle::place_matrix(c, 256, 128, 0);
    std::set<std::uint64_t> addrs;
    for (std::uint64_t j = 0; j < 128; ++j) {
        std::set<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> homes;
        for (std::uint64_t i = 0; i < 256; ++i) {
            const auto& x = ref.at(i, j);
            homes.insert({x.channel, x.rank, x.bank});
            addrs.insert(oracle::umdam_linear(c, p.element_address(i, j)));
        }
        EXPECT_EQ(homes.size(), 1u) << "column " << j;
    }
    EXPECT_EQ(addrs.size(), 256u * 128u);
}

TEST(Acceptance, C4_InterleavingPreservation) {
    const DramConfig c;
    const auto t0 = Clock::now();
    for (const std::uint64_t bytes : {std::uint64_t{1} << 20, std::uint64_t{4} << 20, std::uint64_t{16} << 20}) {
        const double u = replay_npu_stream(c, MappingScheme::umdam(), 0, bytes).effective_bw_bytes_per_s;
        const double v = replay_npu_stream(c, MappingScheme::conventional(), 0, bytes).effective_bw_bytes_per_s;
        const double p = replay_npu_stream(c, MappingScheme::pim_opt(), 0, bytes).effective_bw_bytes_per_s;
        std::cout << "  " << (bytes >> 20) << " MiB: umdam " << u / 1e9 << " GB/s, conventional " << v / 1e9
                  << " GB/s, pim_opt " << p / 1e9 << " GB/s (ratio " << p / u << ")\n";
        EXPECT_GE(u / v, 0.95);
        EXPECT_LE(u / v, 1.05);
        EXPECT_LE(p / u, 0.25 + 0.05);
    }
    const double elapsed = seconds_since(t0);
    EXPECT_LT(elapsed, 60.0);
}

TEST(Acceptance, C5_NoDuplication) {
    const DramConfig c;
    const Simulator& sim = simulator();
    for (const auto& m : builtin_models()) {
        const Workload w = expand(m, 128, 0);
        for (const auto& wm : w.weights) {
            const LayoutPlan p = plan_layout(c, wm.K, wm.N, 0);
            const std::uint64_t single = p.padded_rows() * p.padded_cols() * c.element_size_bytes;
            EXPECT_EQ(p.footprint_bytes(), single);
            const std::uint64_t last =
                p.element_linear(p.padded_rows() - 1, p.padded_cols() - 1) + c.element_size_bytes;
            std::uint64_t hi = last;
            for (std::uint64_t i : {std::uint64_t{0}, p.padded_rows() - 1}) {
                for (std::uint64_t j : {std::uint64_t{0}, p.padded_cols() - 1}) {
                    hi = std::max(hi, p.element_linear(i, j) + c.element_size_bytes);
                }
            }
            EXPECT_EQ(hi - p.base(), single) << m.name << " " << wm.layer;
        }
    }
    for (const char* name : {"opt-125m", "opt-1.3b"}) {
        Scenario s;
        s.model = name;
        s.prefill_len = 128;
        s.decode_len = 0;
        s.variant = Variant::Baseline;
        const SimReport b = sim.run(s);
        s.variant = Variant::Umdam;
        const SimReport u = sim.run(s);
        std::cout << "  " << name << ": footprint " << b.weight_footprint_bytes << " B, baseline relayout traffic "
                  << b.relayout_traffic_bytes << " B, umdam " << u.relayout_traffic_bytes << " B\n";
        EXPECT_EQ(b.relayout_traffic_bytes, 2 * b.weight_footprint_bytes);
        EXPECT_EQ(u.relayout_traffic_bytes, 0u);
        EXPECT_EQ(u.weight_footprint_bytes, b.weight_footprint_bytes);
    }
}

TEST(Acceptance, C6_TtftTrend) {
    const auto t0 = Clock::now();
    const FigureGrid g = figure_grid(3);
    const auto rows = sweep(simulator(), g.models, g.prefill_lens, g.decode_lens);
    const double elapsed = seconds_since(t0);
    const ReportSummary s = summarize(rows);
    std::cout << std::fixed << std::setprecision(3);
    std::cout << "  TTFT speedup by model and prefill length (reference 2.8 - 3.0)\n";
    for (const auto& [model, series] : s.ttft_series) {
        std::cout << "    " << std::left << std::setw(10) << model << std::right;
        for (const auto& [p, v] : series) std::cout << "  P=" << p << " " << v;
        std::cout << '\n';
    }
    std::map<std::uint64_t, std::pair<double, double>> spread;
    for (const auto& r : rows) {
        EXPECT_GE(r.ttft_speedup, 2.0) << r.model << " P=" << r.prefill_len;
        EXPECT_LE(r.ttft_speedup, 4.0) << r.model << " P=" << r.prefill_len;
        auto [it, fresh] = spread.emplace(r.prefill_len, std::pair{r.ttft_speedup, r.ttft_speedup});
        if (!fresh) {
            it->second.first = std::min(it->second.first, r.ttft_speedup);
            it->second.second = std::max(it->second.second, r.ttft_speedup);
        }
    }
    for (const auto& [p, mm] : spread) {
        std::cout << "    P=" << p << " cross-model max/min " << mm.second / mm.first << '\n';
        EXPECT_LE(mm.second / mm.first, 1.25);
    }
    std::cout << "  grid runtime " << elapsed << " s\n";
    std::cout.unsetf(std::ios::floatfield);
    EXPECT_EQ(rows.size(), 16u);
    EXPECT_LT(elapsed, 300.0);
}

TEST(Acceptance, C7_TtltTrend) {
    const FigureGrid g = figure_grid(4);
    const auto rows = sweep(simulator(), g.models, g.prefill_lens, g.decode_lens);
    std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, double>>> by_p;
    double max_speedup = 0;
    double longest = 0;
    const std::uint64_t min_p = g.prefill_lens.front();
    const std::uint64_t max_d = g.decode_lens.back();
    for (const auto& r : rows) {
        by_p[r.prefill_len].push_back({r.decode_len, r.ttlt_speedup});
        max_speedup = std::max(max_speedup, r.ttlt_speedup);
        if (r.prefill_len == min_p && r.decode_len == max_d) longest = r.ttlt_speedup;
    }
    std::cout << std::fixed << std::setprecision(3);
    for (auto& [p, series] : by_p) {
        std::sort(series.begin(), series.end());
        std::cout << "    P=" << p;
        for (const auto& [d, v] : series) std::cout << "  D=" << d << " " << v;
        std::cout << '\n';
        for (std::size_t k = 1; k < series.size(); ++k) {
            EXPECT_LE(series[k].second, series[k - 1].second) << "P=" << p << " D=" << series[k].first;
        }
    }
    std::cout << "  TTLT speedup at P=" << min_p << ", D=" << max_d << ": " << longest
              << " (required >= 1.10; reference 1.14)\n";
    std::cout << "  maximum TTLT speedup " << max_speedup << " (reference 2.18)\n";
    std::cout.unsetf(std::ios::floatfield);
    EXPECT_GE(longest, 1.10);
}

TEST(Acceptance, C8_TimingOracle) {
    const DramConfig c;
    const TimingParams& t = c.timing;

    const std::vector<MemRequest> single = {MemRequest{DramCoord{}, AccessKind::Read, 32, 0}};
    const ReplayResult one = replay(c, t, single);
    std::cout << "  single closed-bank read: " << one.total_cycles << " cycles (expected "
              << oracle::closed_bank_read_cycles(t) << ")\n";
    EXPECT_EQ(one.total_cycles, oracle::closed_bank_read_cycles(t));
    EXPECT_EQ(one.total_cycles, t.n_rcd + t.n_cl + t.n_bl);

    // Every bank of every channel, each a single open row, read column by
    // column: after the first touch of each bank every burst is a row hit.
    std::vector<MemRequest> stream;
    std::uint64_t seq = 0;
    for (std::uint64_t col = 0; col < c.bursts_per_row(); ++col) {
        for (std::uint64_t bank = 0; bank < c.banks_per_rank; ++bank) {
            for (std::uint64_t ch = 0; ch < c.channels; ++ch) {
                DramCoord x;
                x.channel = ch;
                x.bank = bank;
                x.row = 5;
                x.col_l = col % 8;
                x.col_m = col / 8;
                stream.push_back(MemRequest{x, AccessKind::Read, 32, seq++});
            }
        }
    }
    const ReplayResult r = replay(c, t, stream);
    const std::uint64_t bursts = stream.size();
    const double envelope = static_cast<double>(bursts) * t.n_ccd / static_cast<double>(c.channels);
    const std::uint64_t closed = oracle::row_hit_stream_cycles(t, bursts, c.channels);
    std::cout << "  row-hit stream: " << r.total_cycles << " cycles, closed form " << closed << ", envelope "
              << envelope << ", hit rate " << r.row_hit_rate << '\n';
    EXPECT_NEAR(static_cast<double>(r.total_cycles) / static_cast<double>(closed), 1.0, 0.01);
    EXPECT_NEAR(static_cast<double>(r.total_cycles) / envelope, 1.0, 0.01);
}

TEST(Acceptance, C9_PlacementOracle) {
    std::mt19937_64 rng(20240601);
    auto pick = [&rng](std::initializer_list<std::uint64_t> xs) {
        std::uniform_int_distribution<std::size_t> d(0, xs.size() - 1);
        return *(xs.begin() + d(rng));
    };
    std::uint64_t mismatches = 0;
    std::uint64_t checked = 0;
    for (int cfg_no = 0; cfg_no < 20; ++cfg_no) {
        DramConfig c;
        c.channels = pick({1, 2, 4, 8});
        c.ranks_per_channel = pick({1, 2});
        c.banks_per_rank = pick({2, 4, 8, 16});
        c.row_size_bytes = pick({512, 1024, 2048, 4096});
        c.burst_size_bytes = pick({16, 32, 64});
        c.element_size_bytes = pick({1, 2, 4});
        std::vector<std::uint64_t> grans;
        for (std::uint64_t g = c.burst_size_bytes; g <= std::min<std::uint64_t>(c.row_size_bytes, 1024); g *= 2) {
            grans.push_back(g);
        }
        c.interleave_granularity_bytes = grans[std::uniform_int_distribution<std::size_t>(0, grans.size() - 1)(rng)];
        c.rows_per_bank = std::uint64_t{1} << 14;

        const std::uint64_t K = std::uniform_int_distribution<std::uint64_t>(1, 700)(rng);
        const std::uint64_t N = std::uniform_int_distribution<std::uint64_t>(1, 400)(rng);
        const std::uint64_t tile_bytes = c.interleave_granularity_bytes * c.total_banks();
        const std::uint64_t base = std::uniform_int_distribution<std::uint64_t>(0, 9)(rng) * tile_bytes;

        const LayoutPlan plan = plan_layout(c, K, N, base);
        const oracle::Placement ref = oracle::place_matrix(c, K, N, base);
        std::uniform_int_distribution<std::uint64_t> pi(0, K - 1);
        std::uniform_int_distribution<std::uint64_t> pj(0, N - 1);
        for (int k = 0; k < 10000; ++k) {
            const std::uint64_t i = pi(rng);
            const std::uint64_t j = pj(rng);
            ++checked;
            if (!(plan.element_address(i, j) == ref.at(i, j))) ++mismatches;
        }
    }
    std::cout << "  " << checked << " points over 20 configurations, " << mismatches << " mismatches\n";
    EXPECT_EQ(mismatches, 0u);
}

int main(int argc, char** argv) {
    testing::InitGoogleTest(&argc, argv);
    testing::UnitTest::GetInstance()->listeners().Append(new CriterionPrinter);
    return RUN_ALL_TESTS();
}
