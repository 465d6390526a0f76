#include "umdam/dram_config.hpp"

#include <string>

#include "umdam/errors.hpp"

namespace umdam {

DramConfig lpddr5_table1() { return DramConfig{}; }

std::string_view field_name(Field f) {
    switch (f) {
        case Field::Row: return "row";
        case Field::ColM: return "col_M";
        case Field::Bank: return "bank";
        case Field::Rank: return "rank";
        case Field::Channel: return "channel";
        case Field::ColL: return "col_L";
        case Field::Offset: return "offset";
    }
    return "?";
}

unsigned BitFields::width(Field f) const {
    switch (f) {
        case Field::Row: return row;
        case Field::ColM: return col_m;
        case Field::Bank: return bank;
        case Field::Rank: return rank;
        case Field::Channel: return channel;
        case Field::ColL: return col_l;
        case Field::Offset: return offset;
    }
    return 0;
}

namespace {

void require_pow2(std::uint64_t v, const char* name) {
    if (!is_pow2(v)) {
        throw ConfigError(std::string("DRAM config: ") + name + " = " + std::to_string(v) +
                          " is not a power of two");
    }
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw ConfigError("DRAM config: total capacity overflows a 64-bit address");
    }
    return out;
}

}  // namespace

void validate(const DramConfig& cfg) {
    require_pow2(cfg.channels, "channels");
    require_pow2(cfg.ranks_per_channel, "ranks_per_channel");
    require_pow2(cfg.banks_per_rank, "banks_per_rank");
    require_pow2(cfg.row_size_bytes, "row_size_bytes");
    require_pow2(cfg.burst_size_bytes, "burst_size_bytes");
    require_pow2(cfg.interleave_granularity_bytes, "interleave_granularity_bytes");
    require_pow2(cfg.rows_per_bank, "rows_per_bank");
    require_pow2(cfg.element_size_bytes, "element_size_bytes");

    if (cfg.burst_size_bytes > cfg.interleave_granularity_bytes) {
        throw ConfigError("DRAM config: burst_size_bytes exceeds interleave_granularity_bytes");
    }
    if (cfg.interleave_granularity_bytes > cfg.row_size_bytes) {
        throw ConfigError("DRAM config: interleave_granularity_bytes exceeds row_size_bytes");
    }
    if (cfg.element_size_bytes > cfg.burst_size_bytes) {
        throw ConfigError("DRAM config: element_size_bytes exceeds burst_size_bytes");
    }
    if (!(cfg.peak_external_bw_bytes_per_s > 0)) {
        throw ConfigError("DRAM config: peak_external_bw_bytes_per_s must be positive");
    }
    if (!(cfg.pim_internal_bw_bytes_per_s > 0)) {
        throw ConfigError("DRAM config: pim_internal_bw_bytes_per_s must be positive");
    }
    if (!(cfg.timing.t_ck_ns > 0)) {
        throw ConfigError("DRAM config: timing.t_ck_ns must be positive");
    }
    if (cfg.timing.n_rc < 1) {
        throw ConfigError("DRAM config: timing.n_rc must be at least 1");
    }
    if (cfg.timing.n_bl < 1) {
        throw ConfigError("DRAM config: timing.n_bl must be at least 1");
    }
    (void)total_capacity_bytes(cfg);
}

std::uint64_t total_capacity_bytes(const DramConfig& cfg) {
    std::uint64_t cap = checked_mul(cfg.channels, cfg.ranks_per_channel);
    cap = checked_mul(cap, cfg.banks_per_rank);
    cap = checked_mul(cap, cfg.rows_per_bank);
    cap = checked_mul(cap, cfg.row_size_bytes);
    return cap;
}

BitFields derive_bitfields(const DramConfig& cfg) {
    validate(cfg);
    BitFields bf;
    bf.offset = log2_exact(cfg.burst_size_bytes);
    bf.col_l = log2_exact(cfg.interleave_granularity_bytes / cfg.burst_size_bytes);
    bf.col_m = log2_exact(cfg.row_size_bytes / cfg.burst_size_bytes) - bf.col_l;
    bf.channel = log2_exact(cfg.channels);
    bf.rank = log2_exact(cfg.ranks_per_channel);
    bf.bank = log2_exact(cfg.banks_per_rank);
    bf.row = log2_exact(cfg.rows_per_bank);
    return bf;
}

}  // namespace umdam
