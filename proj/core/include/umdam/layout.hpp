#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "umdam/dram_config.hpp"
#include "umdam/mapping.hpp"

namespace umdam {

/// Tile shape for a K x N weight matrix. Tile height spans one interleave
/// granule of elements; tile width spans every bank in the package.
struct TileGeometry {
    std::uint64_t tile_height_elems = 0;
    std::uint64_t tile_width_elems = 0;
    std::uint64_t num_tile_rows = 0;
    std::uint64_t num_tile_cols = 0;

    std::uint64_t num_tiles() const { return num_tile_rows * num_tile_cols; }
    bool operator==(const TileGeometry&) const = default;
};

TileGeometry tile_geometry(const DramConfig& cfg, std::uint64_t K, std::uint64_t N);

/// The (channel, rank, bank) triple a matrix column lives in; one PIM lane.
struct ColumnHome {
    std::uint64_t channel = 0;
    std::uint64_t rank = 0;
    std::uint64_t bank = 0;

    bool operator==(const ColumnHome&) const = default;
};

/// Lane index with channel least significant, then rank, then bank.
std::uint64_t lane_index(const DramConfig& cfg, const ColumnHome& home);
ColumnHome lane_home(const DramConfig& cfg, std::uint64_t lane);

/// Placement of a K x N weight matrix (K = reduction dim, N = output columns)
/// in physical memory. Dimensions are padded up to the tile grid; padded
/// elements occupy storage but carry no data.
class MatrixLayout {
  public:
    using BurstVisitor = std::function<void(std::uint64_t row0, std::uint64_t col, std::uint64_t addr)>;

    virtual ~MatrixLayout() = default;

    virtual std::string_view kind() const = 0;

    const DramConfig& config() const { return cfg_; }
    const AddressMapper& mapper() const { return mapper_; }
    std::uint64_t rows() const { return K_; }
    std::uint64_t cols() const { return N_; }
    std::uint64_t padded_rows() const { return K_pad_; }
    std::uint64_t padded_cols() const { return N_pad_; }
    std::uint64_t footprint_bytes() const { return K_pad_ * N_pad_ * cfg_.element_size_bytes; }

    /// Linear physical address of element (i, j). Accepts padded indices.
    virtual std::uint64_t element_linear(std::uint64_t i, std::uint64_t j) const = 0;

    virtual DramCoord element_coord(std::uint64_t i, std::uint64_t j) const {
        return mapper_.encode_unchecked(element_linear(i, j));
    }

    /// True when every column resides in a single bank.
    virtual bool column_local() const = 0;

    /// Throws ArgumentError if the layout is not column local or j >= cols().
    virtual ColumnHome column_home(std::uint64_t j) const = 0;

    /// Visits every burst of the padded matrix in ascending physical address
    /// order. A burst is burst_size / element_size consecutive rows of one column.
    virtual void for_each_burst(const BurstVisitor& visit) const = 0;

  protected:
    MatrixLayout(const DramConfig& cfg, MappingScheme scheme, std::uint64_t K, std::uint64_t N,
                 std::uint64_t K_pad, std::uint64_t N_pad);

    DramConfig cfg_;
    AddressMapper mapper_;
    std::uint64_t K_;
    std::uint64_t N_;
    std::uint64_t K_pad_;
    std::uint64_t N_pad_;
};

/// Tile-based column-major layout: the UMDAM placement, and (under the
/// conventional mapping) the NPU-side tiled layout used by the baseline.
///
/// Under UMDAM, a tile's columns land one per bank, tiles walk down each tile
/// column first, and the tile's linear index fills (row, col_M). Each matrix
/// column therefore stays in one bank while a tile stays one contiguous
/// physical range that interleaves across channels.
class LayoutPlan final : public MatrixLayout {
  public:
    /// base must be a multiple of the tile size in bytes.
    LayoutPlan(const DramConfig& cfg, std::uint64_t K, std::uint64_t N, std::uint64_t base,
               SchemeKind scheme = SchemeKind::Umdam);

    std::string_view kind() const override;
    SchemeKind scheme_kind() const { return scheme_kind_; }

    const TileGeometry& geometry() const { return geom_; }
    std::uint64_t base() const { return base_; }
    std::uint64_t tile_bytes() const { return tile_bytes_; }

    /// Tiles are numbered down each tile column: tile_col * num_tile_rows + tile_row.
    std::uint64_t tile_linear_index(std::uint64_t tile_row, std::uint64_t tile_col) const {
        return tile_col * geom_.num_tile_rows + tile_row;
    }

    /// UMDAM coordinate of element (i, j); argument error outside K x N.
    DramCoord element_address(std::uint64_t i, std::uint64_t j) const;

    /// UMDAM-format coordinate for padded indices, no range check.
    DramCoord umdam_coord(std::uint64_t i, std::uint64_t j) const;

    std::uint64_t element_linear(std::uint64_t i, std::uint64_t j) const override;
    DramCoord element_coord(std::uint64_t i, std::uint64_t j) const override;
    bool column_local() const override { return scheme_kind_ == SchemeKind::Umdam; }
    ColumnHome column_home(std::uint64_t j) const override;
    void for_each_burst(const BurstVisitor& visit) const override;

  private:
    SchemeKind scheme_kind_;
    AddressMapper umdam_mapper_;
    TileGeometry geom_;
    std::uint64_t base_;
    std::uint64_t base_tile_;
    std::uint64_t tile_bytes_;
};

/// UMDAM plan for a K x N matrix at physical address base.
LayoutPlan plan_layout(const DramConfig& cfg, std::uint64_t K, std::uint64_t N, std::uint64_t base);

/// The same tile arrangement addressed through the conventional mapping.
LayoutPlan plan_npu_layout(const DramConfig& cfg, std::uint64_t K, std::uint64_t N, std::uint64_t base);

/// Baseline PIM-optimized placement under the pim_opt mapping. Column j is
/// assigned to lane j mod total_banks and stored contiguously inside that
/// bank, starting at bank_offset bytes into the bank.
class PimOptimizedLayout final : public MatrixLayout {
  public:
    PimOptimizedLayout(const DramConfig& cfg, std::uint64_t K, std::uint64_t N, std::uint64_t bank_offset);

    std::string_view kind() const override { return "pim_opt"; }

    std::uint64_t bank_offset() const { return bank_offset_; }
    std::uint64_t column_bytes() const { return K_pad_ * cfg_.element_size_bytes; }
    std::uint64_t bytes_per_bank() const { return column_bytes() * (N_pad_ / lanes_); }

    std::uint64_t element_linear(std::uint64_t i, std::uint64_t j) const override;
    bool column_local() const override { return true; }
    ColumnHome column_home(std::uint64_t j) const override;
    void for_each_burst(const BurstVisitor& visit) const override;

  private:
    std::uint64_t lanes_;
    std::uint64_t bank_offset_;
};

/// One granule a PIM lane streams for a column: interleave_granularity bytes
/// (less for a short final tile row) at a single (row, col_M) slot.
struct ColumnGranule {
    DramCoord coord;
    std::uint64_t linear = 0;
    std::uint64_t bytes = 0;
};

/// The reads PIM lane column_home(j) performs to consume column j, ascending tile row.
std::vector<ColumnGranule> pim_column_plan(const LayoutPlan& plan, std::uint64_t j);

ColumnHome column_home(const LayoutPlan& plan, std::uint64_t j);

struct VerifyOptions {
    /// Matrices with at most this many logical elements are checked exhaustively.
    std::uint64_t exhaustive_limit = std::uint64_t{1} << 22;
    /// Minimum sampled elements otherwise.
    std::uint64_t samples = 100000;
    std::uint64_t sample_columns = 1024;
    std::uint64_t tile_samples = 16;
    std::uint64_t seed = 0x5eed;
};

struct PlanReport {
    bool exhaustive = false;
    std::uint64_t elements_checked = 0;
    std::uint64_t columns_checked = 0;
    std::uint64_t locality_violations = 0;  ///< columns touching more than one bank
    std::uint64_t collisions = 0;           ///< repeated linear addresses among checked elements
    std::uint64_t tiles_checked = 0;
    std::uint64_t noncontiguous_tiles = 0;
    std::uint64_t channel_rotation_violations = 0;

    bool ok() const {
        return locality_violations == 0 && collisions == 0 && noncontiguous_tiles == 0 &&
               channel_rotation_violations == 0;
    }
};

using ElementCoordFn = std::function<DramCoord(std::uint64_t i, std::uint64_t j)>;

PlanReport verify_plan(const LayoutPlan& plan, const VerifyOptions& opts = {});

/// Same checks, with element coordinates supplied by coord_of (fault injection).
PlanReport verify_element_map(const LayoutPlan& plan, const ElementCoordFn& coord_of,
                              const VerifyOptions& opts = {});

}  // namespace umdam
