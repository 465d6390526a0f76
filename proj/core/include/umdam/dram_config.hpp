#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace umdam {

/// LPDDR timing parameters, in memory clock cycles unless noted.
struct TimingParams {
    double t_ck_ns = 1.25;    ///< clock period
    std::uint32_t n_bl = 4;   ///< data-bus occupancy of one burst
    std::uint32_t n_cl = 20;  ///< read latency (RD to data)
    std::uint32_t n_ccd = 4;  ///< column-to-column spacing
    std::uint32_t n_rc = 30;  ///< ACT to ACT, same bank
    std::uint32_t n_wr = 28;  ///< write recovery (end of write data to PRE)
    std::uint32_t n_ras = 34; ///< ACT to PRE, same bank
    std::uint32_t n_rp_pb = 15;
    std::uint32_t n_rcd = 15;

    bool operator==(const TimingParams&) const = default;
};

/// DRAM geometry for one package. Every count and size is a power of two.
struct DramConfig {
    std::uint64_t channels = 4;
    std::uint64_t ranks_per_channel = 1;
    std::uint64_t banks_per_rank = 16;
    std::uint64_t row_size_bytes = 2048;
    std::uint64_t burst_size_bytes = 32;
    std::uint64_t interleave_granularity_bytes = 256;
    std::uint64_t rows_per_bank = std::uint64_t{1} << 15;
    std::uint64_t element_size_bytes = 2;
    double peak_external_bw_bytes_per_s = 51.2e9;
    double pim_internal_bw_bytes_per_s = 512e9;
    TimingParams timing{};

    std::uint64_t total_banks() const { return channels * ranks_per_channel * banks_per_rank; }
    std::uint64_t bursts_per_row() const { return row_size_bytes / burst_size_bytes; }
    double per_channel_bw_bytes_per_s() const {
        return peak_external_bw_bytes_per_s / static_cast<double>(channels);
    }

    bool operator==(const DramConfig&) const = default;
};

/// The LPDDR5-PIM package used throughout the evaluation (4 ch x 1 rank x 16 banks, 2 KB rows).
DramConfig lpddr5_table1();

/// Address fields, MSB-agnostic. Column is split into a high part (ColM) and a
/// low part (ColL) so that schemes can place them independently.
enum class Field : std::uint8_t { Row, ColM, Bank, Rank, Channel, ColL, Offset };

inline constexpr std::array<Field, 7> kAllFields = {Field::Row,     Field::ColM, Field::Bank,  Field::Rank,
                                                    Field::Channel, Field::ColL, Field::Offset};

std::string_view field_name(Field f);

/// Widths (in bits) of every address field.
struct BitFields {
    unsigned row = 0;
    unsigned col_m = 0;
    unsigned bank = 0;
    unsigned rank = 0;
    unsigned channel = 0;
    unsigned col_l = 0;
    unsigned offset = 0;

    unsigned width(Field f) const;
    unsigned total() const { return row + col_m + bank + rank + channel + col_l + offset; }
    unsigned column() const { return col_m + col_l; }

    bool operator==(const BitFields&) const = default;
};

/// Throws ConfigError naming the first offending field.
void validate(const DramConfig& cfg);

/// Field widths derived from the geometry. Validates cfg first.
BitFields derive_bitfields(const DramConfig& cfg);

/// channels x ranks x banks x rows x row size; ConfigError on 64-bit overflow.
std::uint64_t total_capacity_bytes(const DramConfig& cfg);

constexpr bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

constexpr unsigned log2_exact(std::uint64_t v) {
    unsigned n = 0;
    while (v > 1) {
        v >>= 1;
        ++n;
    }
    return n;
}

}  // namespace umdam
