#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "umdam/errors.hpp"
#include "umdam/mapping.hpp"

using namespace umdam;

namespace {

DramConfig tiny() {
    DramConfig c;
    c.channels = 2;
    c.ranks_per_channel = 1;
    c.banks_per_rank = 2;
    c.rows_per_bank = 4;
    c.row_size_bytes = 512;
    c.interleave_granularity_bytes = 128;
    return c;
}

}  // namespace

TEST(Mapping, UmdamExamples) {
    const DramConfig c;
    const auto s = MappingScheme::umdam();
    EXPECT_EQ(encode(s, c, 0), DramCoord{});

    DramCoord ch1;
    ch1.channel = 1;
    EXPECT_EQ(encode(s, c, 256), ch1);

    DramCoord bank1;
    bank1.bank = 1;
    EXPECT_EQ(encode(s, c, 1024), bank1);

    DramCoord ch3;
    ch3.channel = 3;
    EXPECT_EQ(decode(s, c, ch3), 768u);
    EXPECT_EQ(decode(s, c, DramCoord{}), 0u);
}

TEST(Mapping, UmdamMatchesMixedRadixOracle) {
    const DramConfig c;
    const AddressMapper m(MappingScheme::umdam(), c);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> addr(0, m.capacity() - 1);
    for (int k = 0; k < 10000; ++k) {
        const std::uint64_t a = addr(rng);
        EXPECT_EQ(oracle::umdam_linear(c, m.encode(a)), a);
    }
}

TEST(Mapping, RandomRoundTripAllSchemes) {
    const DramConfig c;
    std::mt19937_64 rng(7);
    for (const auto kind : {SchemeKind::Umdam, SchemeKind::Conventional, SchemeKind::PimOpt}) {
        const AddressMapper m(MappingScheme::of(kind), c);
        std::uniform_int_distribution<std::uint64_t> addr(0, m.capacity() - 1);
        for (int k = 0; k < 10000; ++k) {
            const std::uint64_t a = addr(rng);
            ASSERT_EQ(m.decode(m.encode(a)), a) << scheme_name(kind);
        }
    }
}

TEST(Mapping, ExhaustiveBijectionOnTinyConfig) {
    const DramConfig c = tiny();
    for (const auto kind : {SchemeKind::Umdam, SchemeKind::Conventional, SchemeKind::PimOpt}) {
        const AddressMapper m(MappingScheme::of(kind), c);
        std::set<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t,
                            std::uint64_t, std::uint64_t>>
            seen;
        for (std::uint64_t a = 0; a < m.capacity(); ++a) {
            const DramCoord x = m.encode(a);
            EXPECT_EQ(m.decode(x), a);
            seen.insert({x.row, x.col_m, x.bank, x.rank, x.channel, x.col_l, x.offset});
        }
        EXPECT_EQ(seen.size(), m.capacity()) << scheme_name(kind);
    }
}

TEST(Mapping, ChannelSwitchPeriod) {
    const DramConfig c;
    EXPECT_EQ(channel_switch_period(MappingScheme::umdam(), c), 256u);
    EXPECT_EQ(channel_switch_period(MappingScheme::conventional(), c), 32u);
    EXPECT_EQ(channel_switch_period(MappingScheme::pim_opt(), c), total_capacity_bytes(c) / 4);

    DramConfig single = c;
    single.channels = 1;
    EXPECT_EQ(channel_switch_period(MappingScheme::umdam(), single), total_capacity_bytes(single));
}

TEST(Mapping, UmdamSequentialChannelsRotateEvery256Bytes) {
    const DramConfig c;
    const AddressMapper m(MappingScheme::umdam(), c);
    for (std::uint64_t a = 0; a < (1u << 16); a += 32) {
        EXPECT_EQ(m.encode(a).channel, (a / 256) % 4);
    }
}

TEST(Mapping, HighBitsKeepTheBankUnderUmdam) {
    const DramConfig c;
    const AddressMapper m(MappingScheme::umdam(), c);
    const unsigned above_bank = m.lsb(Field::Bank) + m.width(Field::Bank);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::uint64_t> addr(0, m.capacity() - 1);
    for (int k = 0; k < 1000; ++k) {
        const std::uint64_t a = addr(rng);
        const std::uint64_t b = a ^ (addr(rng) >> above_bank << above_bank);
        const DramCoord x = m.encode(a);
        const DramCoord y = m.encode(b);
        EXPECT_EQ(x.channel, y.channel);
        EXPECT_EQ(x.rank, y.rank);
        EXPECT_EQ(x.bank, y.bank);
    }
}

TEST(Mapping, FieldOrderLsbFirst) {
    const DramConfig c;
    const AddressMapper u(MappingScheme::umdam(), c);
    EXPECT_EQ(u.lsb(Field::Offset), 0u);
    EXPECT_EQ(u.lsb(Field::ColL), 5u);
    EXPECT_EQ(u.lsb(Field::Channel), 8u);
    EXPECT_EQ(u.lsb(Field::Bank), 10u);
    EXPECT_EQ(u.lsb(Field::ColM), 14u);
    EXPECT_EQ(u.lsb(Field::Row), 17u);

    const AddressMapper p(MappingScheme::pim_opt(), c);
    EXPECT_EQ(p.lsb(Field::Channel), 30u);
    EXPECT_EQ(p.lsb(Field::Bank), 26u);
    EXPECT_EQ(p.lsb(Field::Row), 11u);
}

TEST(Mapping, OutOfRangeAddressCarriesValue) {
    const DramConfig c;
    const AddressMapper m(MappingScheme::umdam(), c);
    try {
        (void)m.encode(m.capacity());
        FAIL() << "expected AddressError";
    } catch (const AddressError& e) {
        EXPECT_EQ(e.value(), m.capacity());
    }
}

TEST(Mapping, FieldOverflowOnDecode) {
    const DramConfig c;
    DramCoord x;
    x.channel = 4;
    EXPECT_THROW((void)decode(MappingScheme::umdam(), c, x), AddressError);
    x = DramCoord{};
    x.rank = 1;  // zero-width field
    EXPECT_THROW((void)decode(MappingScheme::conventional(), c, x), AddressError);
}

TEST(Mapping, SchemeNames) {
    EXPECT_EQ(parse_scheme("umdam"), SchemeKind::Umdam);
    EXPECT_EQ(parse_scheme("conventional"), SchemeKind::Conventional);
    EXPECT_EQ(parse_scheme("pim_opt"), SchemeKind::PimOpt);
    EXPECT_EQ(parse_scheme("pim-opt"), SchemeKind::PimOpt);
    EXPECT_THROW((void)parse_scheme("xor"), ArgumentError);
    EXPECT_THROW(MappingScheme("bad", {Field::Row, Field::Row, Field::Bank, Field::Rank, Field::Channel,
                                       Field::ColL, Field::Offset}),
                 ArgumentError);
}

TEST(Mapping, CoordPrints) {
    DramCoord x;
    x.bank = 3;
    std::ostringstream os;
    os << x;
    EXPECT_NE(os.str().find("bank=3"), std::string::npos);
}
