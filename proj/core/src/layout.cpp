#include "umdam/layout.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <unordered_map>

#include "umdam/errors.hpp"

namespace umdam {

namespace {

std::uint64_t round_up(std::uint64_t v, std::uint64_t multiple) { return (v + multiple - 1) / multiple * multiple; }

void require_dims(std::uint64_t K, std::uint64_t N) {
    if (K == 0 || N == 0) {
        throw ArgumentError("matrix dimensions must be non-zero (got " + std::to_string(K) + " x " +
                            std::to_string(N) + ")");
    }
}

std::uint64_t tile_height(const DramConfig& cfg) {
    return cfg.interleave_granularity_bytes / cfg.element_size_bytes;
}

// Validates before dividing by any geometry field.
std::uint64_t pad_rows(const DramConfig& cfg, std::uint64_t K) {
    validate(cfg);
    require_dims(K, 1);
    return round_up(K, tile_height(cfg));
}

std::uint64_t pad_cols(const DramConfig& cfg, std::uint64_t N) {
    validate(cfg);
    require_dims(1, N);
    return round_up(N, cfg.total_banks());
}

}  // namespace

TileGeometry tile_geometry(const DramConfig& cfg, std::uint64_t K, std::uint64_t N) {
    validate(cfg);
    require_dims(K, N);
    TileGeometry g;
    g.tile_height_elems = tile_height(cfg);
    g.tile_width_elems = cfg.total_banks();
    g.num_tile_rows = (K + g.tile_height_elems - 1) / g.tile_height_elems;
    g.num_tile_cols = (N + g.tile_width_elems - 1) / g.tile_width_elems;
    return g;
}

std::uint64_t lane_index(const DramConfig& cfg, const ColumnHome& home) {
    return home.channel + cfg.channels * (home.rank + cfg.ranks_per_channel * home.bank);
}

ColumnHome lane_home(const DramConfig& cfg, std::uint64_t lane) {
    ColumnHome h;
    h.channel = lane % cfg.channels;
    h.rank = (lane / cfg.channels) % cfg.ranks_per_channel;
    h.bank = lane / (cfg.channels * cfg.ranks_per_channel);
    return h;
}

MatrixLayout::MatrixLayout(const DramConfig& cfg, MappingScheme scheme, std::uint64_t K, std::uint64_t N,
                           std::uint64_t K_pad, std::uint64_t N_pad)
    : cfg_(cfg), mapper_(std::move(scheme), cfg), K_(K), N_(N), K_pad_(K_pad), N_pad_(N_pad) {}

// ---------------------------------------------------------------------------
// LayoutPlan

LayoutPlan::LayoutPlan(const DramConfig& cfg, std::uint64_t K, std::uint64_t N, std::uint64_t base,
                       SchemeKind scheme)
    : MatrixLayout(cfg, MappingScheme::of(scheme), K, N, pad_rows(cfg, K), pad_cols(cfg, N)),
      scheme_kind_(scheme),
      umdam_mapper_(MappingScheme::umdam(), cfg),
      geom_(tile_geometry(cfg, K, N)),
      base_(base),
      base_tile_(0),
      tile_bytes_(cfg.interleave_granularity_bytes * cfg.total_banks()) {
    if (base % tile_bytes_ != 0) {
        throw ArgumentError("layout base address " + std::to_string(base) + " is not aligned to the " +
                            std::to_string(tile_bytes_) + "-byte tile size");
    }
    base_tile_ = base / tile_bytes_;
    const std::uint64_t cap = mapper_.capacity();
    const std::uint64_t footprint = footprint_bytes();
    if (footprint / K_pad_ / cfg.element_size_bytes != N_pad_ || base > cap || footprint > cap - base) {
        throw CapacityError("layout of " + std::to_string(K) + " x " + std::to_string(N) + " at base " +
                            std::to_string(base) + " needs " + std::to_string(footprint) +
                            " bytes; capacity is " + std::to_string(cap));
    }
}

std::string_view LayoutPlan::kind() const {
    return scheme_kind_ == SchemeKind::Umdam ? "umdam" : "npu_tiled";
}

DramCoord LayoutPlan::umdam_coord(std::uint64_t i, std::uint64_t j) const {
    const auto& bits = umdam_mapper_.bits();
    const std::uint64_t th = geom_.tile_height_elems;
    const std::uint64_t tw = geom_.tile_width_elems;

    const std::uint64_t tile_row = i / th;
    const std::uint64_t local_row = i % th;
    const std::uint64_t tile_col = j / tw;
    const std::uint64_t local_col = j % tw;

    DramCoord c;
    // (col_L, offset) from the byte offset of the element inside its granule.
    const std::uint64_t byte = local_row * cfg_.element_size_bytes;
    c.offset = byte & (cfg_.burst_size_bytes - 1);
    c.col_l = byte >> bits.offset;
    // (bank, rank, channel) from the column inside the tile, channel fastest.
    c.channel = local_col % cfg_.channels;
    c.rank = (local_col / cfg_.channels) % cfg_.ranks_per_channel;
    c.bank = local_col / (cfg_.channels * cfg_.ranks_per_channel);
    // (row, col_M) from the tile index, col_M as the low part.
    const std::uint64_t t = base_tile_ + tile_linear_index(tile_row, tile_col);
    c.col_m = t & ((std::uint64_t{1} << bits.col_m) - 1);
    c.row = t >> bits.col_m;
    return c;
}

DramCoord LayoutPlan::element_address(std::uint64_t i, std::uint64_t j) const {
    if (i >= K_ || j >= N_) {
        throw ArgumentError("element (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") is outside the " + std::to_string(K_) + " x " + std::to_string(N_) + " matrix");
    }
    return umdam_coord(i, j);
}

std::uint64_t LayoutPlan::element_linear(std::uint64_t i, std::uint64_t j) const {
    return umdam_mapper_.decode_unchecked(umdam_coord(i, j));
}

DramCoord LayoutPlan::element_coord(std::uint64_t i, std::uint64_t j) const {
    if (scheme_kind_ == SchemeKind::Umdam) return umdam_coord(i, j);
    return mapper_.encode_unchecked(element_linear(i, j));
}

ColumnHome LayoutPlan::column_home(std::uint64_t j) const {
    if (!column_local()) {
        throw ArgumentError("columns of a " + std::string(kind()) + " layout are not bank-local");
    }
    if (j >= N_) {
        throw ArgumentError("column " + std::to_string(j) + " is outside a matrix with " + std::to_string(N_) +
                            " columns");
    }
    const auto c = umdam_coord(0, j);
    return {c.channel, c.rank, c.bank};
}

void LayoutPlan::for_each_burst(const BurstVisitor& visit) const {
    const std::uint64_t th = geom_.tile_height_elems;
    const std::uint64_t tw = geom_.tile_width_elems;
    const std::uint64_t burst = cfg_.burst_size_bytes;
    const std::uint64_t elems_per_burst = burst / cfg_.element_size_bytes;
    const std::uint64_t bursts_per_granule = cfg_.interleave_granularity_bytes / burst;
    const std::uint64_t ntiles = geom_.num_tiles();

    std::uint64_t addr = base_;
    for (std::uint64_t t = 0; t < ntiles; ++t) {
        const std::uint64_t tile_col = t / geom_.num_tile_rows;
        const std::uint64_t tile_row = t % geom_.num_tile_rows;
        for (std::uint64_t lc = 0; lc < tw; ++lc) {
            const std::uint64_t j = tile_col * tw + lc;
            for (std::uint64_t b = 0; b < bursts_per_granule; ++b) {
                visit(tile_row * th + b * elems_per_burst, j, addr);
                addr += burst;
            }
        }
    }
}

LayoutPlan plan_layout(const DramConfig& cfg, std::uint64_t K, std::uint64_t N, std::uint64_t base) {
    return LayoutPlan(cfg, K, N, base, SchemeKind::Umdam);
}

LayoutPlan plan_npu_layout(const DramConfig& cfg, std::uint64_t K, std::uint64_t N, std::uint64_t base) {
    return LayoutPlan(cfg, K, N, base, SchemeKind::Conventional);
}

ColumnHome column_home(const LayoutPlan& plan, std::uint64_t j) { return plan.column_home(j); }

// ---------------------------------------------------------------------------
// PimOptimizedLayout

PimOptimizedLayout::PimOptimizedLayout(const DramConfig& cfg, std::uint64_t K, std::uint64_t N,
                                       std::uint64_t bank_offset)
    : MatrixLayout(cfg, MappingScheme::pim_opt(), K, N, pad_rows(cfg, K), pad_cols(cfg, N)),
      lanes_(cfg.total_banks()),
      bank_offset_(bank_offset) {
    if (bank_offset % cfg.burst_size_bytes != 0) {
        throw ArgumentError("bank offset " + std::to_string(bank_offset) + " is not burst aligned");
    }
    const std::uint64_t bank_bytes = cfg.rows_per_bank * cfg.row_size_bytes;
    const std::uint64_t need = bytes_per_bank();
    if (need / column_bytes() != N_pad_ / lanes_ || bank_offset > bank_bytes || need > bank_bytes - bank_offset) {
        throw CapacityError("PIM-optimized layout of " + std::to_string(K) + " x " + std::to_string(N) +
                            " needs " + std::to_string(need) + " bytes per bank at offset " +
                            std::to_string(bank_offset) + "; a bank holds " + std::to_string(bank_bytes));
    }
}

std::uint64_t PimOptimizedLayout::element_linear(std::uint64_t i, std::uint64_t j) const {
    const ColumnHome home = lane_home(cfg_, j % lanes_);
    const std::uint64_t in_bank = bank_offset_ + (j / lanes_) * column_bytes() + i * cfg_.element_size_bytes;
    const auto& bits = mapper_.bits();

    DramCoord c;
    c.channel = home.channel;
    c.rank = home.rank;
    c.bank = home.bank;
    c.row = in_bank / cfg_.row_size_bytes;
    const std::uint64_t in_row = in_bank % cfg_.row_size_bytes;
    c.offset = in_row & (cfg_.burst_size_bytes - 1);
    const std::uint64_t column = in_row >> bits.offset;
    c.col_l = column & ((std::uint64_t{1} << bits.col_l) - 1);
    c.col_m = column >> bits.col_l;
    return mapper_.decode_unchecked(c);
}

ColumnHome PimOptimizedLayout::column_home(std::uint64_t j) const {
    if (j >= N_) {
        throw ArgumentError("column " + std::to_string(j) + " is outside a matrix with " + std::to_string(N_) +
                            " columns");
    }
    return lane_home(cfg_, j % lanes_);
}

void PimOptimizedLayout::for_each_burst(const BurstVisitor& visit) const {
    const std::uint64_t burst = cfg_.burst_size_bytes;
    const std::uint64_t elems_per_burst = burst / cfg_.element_size_bytes;
    const std::uint64_t slots = N_pad_ / lanes_;
    const std::uint64_t bursts_per_col = column_bytes() / burst;

    // pim_opt puts channel, rank, bank in the top bits: ascending addresses
    // walk channel-major, then rank, then bank.
    for (std::uint64_t ch = 0; ch < cfg_.channels; ++ch) {
        for (std::uint64_t ra = 0; ra < cfg_.ranks_per_channel; ++ra) {
            for (std::uint64_t ba = 0; ba < cfg_.banks_per_rank; ++ba) {
                const std::uint64_t lane = lane_index(cfg_, {ch, ra, ba});
                for (std::uint64_t m = 0; m < slots; ++m) {
                    const std::uint64_t j = m * lanes_ + lane;
                    std::uint64_t addr = element_linear(0, j);
                    for (std::uint64_t b = 0; b < bursts_per_col; ++b) {
                        visit(b * elems_per_burst, j, addr);
                        addr += burst;
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// PIM column reads

std::vector<ColumnGranule> pim_column_plan(const LayoutPlan& plan, std::uint64_t j) {
    (void)plan.column_home(j);  // range and locality check
    const auto& g = plan.geometry();
    const std::uint64_t elem = plan.config().element_size_bytes;
    std::vector<ColumnGranule> out;
    out.reserve(g.num_tile_rows);
    for (std::uint64_t tr = 0; tr < g.num_tile_rows; ++tr) {
        const std::uint64_t i0 = tr * g.tile_height_elems;
        const std::uint64_t rows = std::min(g.tile_height_elems, plan.rows() - i0);
        ColumnGranule gr;
        gr.coord = plan.umdam_coord(i0, j);
        gr.linear = plan.element_linear(i0, j);
        gr.bytes = rows * elem;
        out.push_back(gr);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Verification

namespace {

struct Triple {
    std::uint64_t ch, ra, ba;
    bool operator==(const Triple&) const = default;
};

Triple triple_of(const DramCoord& c) { return {c.channel, c.rank, c.bank}; }

std::uint64_t count_duplicates(std::vector<std::uint64_t>& addrs) {
    std::sort(addrs.begin(), addrs.end());
    std::uint64_t dups = 0;
    for (std::size_t k = 1; k < addrs.size(); ++k) {
        if (addrs[k] == addrs[k - 1]) ++dups;
    }
    return dups;
}

void check_tile(const LayoutPlan& plan, std::uint64_t t, PlanReport& rep) {
    const auto& g = plan.geometry();
    const auto& cfg = plan.config();
    const std::uint64_t tile_col = t / g.num_tile_rows;
    const std::uint64_t tile_row = t % g.num_tile_rows;

    std::vector<std::uint64_t> addrs;
    addrs.reserve(g.tile_height_elems * g.tile_width_elems);
    for (std::uint64_t lc = 0; lc < g.tile_width_elems; ++lc) {
        for (std::uint64_t lr = 0; lr < g.tile_height_elems; ++lr) {
            addrs.push_back(plan.element_linear(tile_row * g.tile_height_elems + lr,
                                                tile_col * g.tile_width_elems + lc));
        }
    }
    std::sort(addrs.begin(), addrs.end());
    bool contiguous = addrs.front() % plan.tile_bytes() == 0;
    for (std::size_t k = 1; k < addrs.size() && contiguous; ++k) {
        contiguous = addrs[k] == addrs[k - 1] + cfg.element_size_bytes;
    }
    ++rep.tiles_checked;
    if (!contiguous) {
        ++rep.noncontiguous_tiles;
        return;
    }

    // Sequential reads of the tile should change channel every interleave granule.
    const std::uint64_t start = addrs.front();
    const std::uint64_t granules = plan.tile_bytes() / cfg.interleave_granularity_bytes;
    const auto& m = plan.mapper();
    for (std::uint64_t k = 0; k < granules; ++k) {
        const std::uint64_t a = start + k * cfg.interleave_granularity_bytes;
        const std::uint64_t expect = k % cfg.channels;
        if (m.encode(a).channel != expect ||
            m.encode(a + cfg.interleave_granularity_bytes - 1).channel != expect) {
            ++rep.channel_rotation_violations;
        }
    }
}

}  // namespace

PlanReport verify_element_map(const LayoutPlan& plan, const ElementCoordFn& coord_of, const VerifyOptions& opts) {
    PlanReport rep;
    const std::uint64_t K = plan.rows();
    const std::uint64_t N = plan.cols();
    const AddressMapper umdam(MappingScheme::umdam(), plan.config());
    std::vector<std::uint64_t> addrs;

    auto check_column = [&](std::uint64_t j, const std::vector<std::uint64_t>& rows) {
        bool violated = false;
        Triple ref{};
        bool have_ref = false;
        for (const std::uint64_t i : rows) {
            const DramCoord c = coord_of(i, j);
            addrs.push_back(umdam.decode(c));
            const Triple tr = triple_of(c);
            if (!have_ref) {
                ref = tr;
                have_ref = true;
            } else if (!(tr == ref)) {
                violated = true;
            }
        }
        rep.elements_checked += rows.size();
        ++rep.columns_checked;
        if (violated) ++rep.locality_violations;
    };

    std::mt19937_64 rng(opts.seed);
    if (K * N <= opts.exhaustive_limit) {
        rep.exhaustive = true;
        addrs.reserve(K * N);
        std::vector<std::uint64_t> rows(K);
        for (std::uint64_t i = 0; i < K; ++i) rows[i] = i;
        for (std::uint64_t j = 0; j < N; ++j) check_column(j, rows);
        rep.collisions = count_duplicates(addrs);
        for (std::uint64_t t = 0; t < plan.geometry().num_tiles(); ++t) check_tile(plan, t, rep);
        return rep;
    }

    const std::uint64_t ncols = std::min(N, std::max<std::uint64_t>(1, opts.sample_columns));
    const std::uint64_t per_col = std::min(K, (opts.samples + ncols - 1) / ncols);
    std::uniform_int_distribution<std::uint64_t> pick_col(0, N - 1);
    std::uniform_int_distribution<std::uint64_t> pick_row(0, K - 1);

    // Distinct columns; distinct rows per column so collisions are real.
    std::vector<std::uint64_t> cols;
    if (ncols == N) {
        cols.resize(N);
        for (std::uint64_t j = 0; j < N; ++j) cols[j] = j;
    } else {
        std::unordered_map<std::uint64_t, bool> seen;
        while (cols.size() < ncols) {
            const auto j = pick_col(rng);
            if (seen.emplace(j, true).second) cols.push_back(j);
        }
    }
    addrs.reserve(ncols * per_col);
    for (const std::uint64_t j : cols) {
        std::vector<std::uint64_t> rows;
        if (per_col == K) {
            rows.resize(K);
            for (std::uint64_t i = 0; i < K; ++i) rows[i] = i;
        } else {
            std::unordered_map<std::uint64_t, bool> seen;
            rows.push_back(0);
            rows.push_back(K - 1);
            seen.emplace(0, true);
            seen.emplace(K - 1, true);
            while (rows.size() < per_col) {
                const auto i = pick_row(rng);
                if (seen.emplace(i, true).second) rows.push_back(i);
            }
        }
        check_column(j, rows);
    }
    rep.collisions = count_duplicates(addrs);

    const std::uint64_t ntiles = plan.geometry().num_tiles();
    std::uniform_int_distribution<std::uint64_t> pick_tile(0, ntiles - 1);
    check_tile(plan, 0, rep);
    check_tile(plan, ntiles - 1, rep);
    for (std::uint64_t k = 0; k < opts.tile_samples; ++k) check_tile(plan, pick_tile(rng), rep);
    return rep;
}

PlanReport verify_plan(const LayoutPlan& plan, const VerifyOptions& opts) {
    return verify_element_map(
        plan, [&plan](std::uint64_t i, std::uint64_t j) { return plan.umdam_coord(i, j); }, opts);
}

}  // namespace umdam
