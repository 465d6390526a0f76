#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "umdam/dram_config.hpp"

namespace umdam {

/// One burst-aligned byte region of DRAM, named field by field.
struct DramCoord {
    std::uint64_t row = 0;
    std::uint64_t col_m = 0;
    std::uint64_t bank = 0;
    std::uint64_t rank = 0;
    std::uint64_t channel = 0;
    std::uint64_t col_l = 0;
    std::uint64_t offset = 0;

    std::uint64_t get(Field f) const;
    void set(Field f, std::uint64_t v);

    bool operator==(const DramCoord&) const = default;
};

std::ostream& operator<<(std::ostream& os, const DramCoord& c);

enum class SchemeKind : std::uint8_t { Umdam, Conventional, PimOpt };

std::string_view scheme_name(SchemeKind kind);

/// Parses "umdam", "conventional" or "pim_opt" (also accepts "pim-opt").
SchemeKind parse_scheme(std::string_view name);

/// An ordering of address fields, MSB first. The undivided column of the
/// conventional and PIM-optimized schemes is expressed as ColM directly above ColL.
class MappingScheme {
  public:
    MappingScheme(std::string name, std::array<Field, 7> msb_to_lsb);

    static MappingScheme umdam();
    static MappingScheme conventional();
    static MappingScheme pim_opt();
    static MappingScheme of(SchemeKind kind);

    const std::string& name() const { return name_; }
    const std::array<Field, 7>& order() const { return order_; }

  private:
    std::string name_;
    std::array<Field, 7> order_;
};

/// A MappingScheme bound to a concrete DramConfig: precomputed field positions.
/// Encode and decode are pure bit slicing, so the mapper is freely shareable.
class AddressMapper {
  public:
    AddressMapper(MappingScheme scheme, const DramConfig& cfg);

    const MappingScheme& scheme() const { return scheme_; }
    const BitFields& bits() const { return bits_; }
    std::uint64_t capacity() const { return capacity_; }

    unsigned lsb(Field f) const { return lsb_[index(f)]; }
    unsigned width(Field f) const { return width_[index(f)]; }

    /// Throws AddressError for addr >= capacity.
    DramCoord encode(std::uint64_t addr) const;

    /// Throws AddressError when any field exceeds its width.
    std::uint64_t decode(const DramCoord& coord) const;

    /// Smallest stride at which the channel field changes along a sequential
    /// stream. A zero-width channel field never changes: returns capacity.
    std::uint64_t channel_switch_period() const;

    /// Unchecked variants for hot loops whose inputs are known in range.
    DramCoord encode_unchecked(std::uint64_t addr) const {
        DramCoord c;
        for (std::size_t i = 0; i < 7; ++i) {
            c.set(kAllFields[i], (addr >> lsb_[i]) & mask_[i]);
        }
        return c;
    }
    std::uint64_t decode_unchecked(const DramCoord& c) const {
        std::uint64_t a = 0;
        for (std::size_t i = 0; i < 7; ++i) {
            a |= c.get(kAllFields[i]) << lsb_[i];
        }
        return a;
    }

  private:
    static constexpr std::size_t index(Field f) { return static_cast<std::size_t>(f); }

    MappingScheme scheme_;
    BitFields bits_;
    std::uint64_t capacity_;
    std::array<unsigned, 7> lsb_{};
    std::array<unsigned, 7> width_{};
    std::array<std::uint64_t, 7> mask_{};
};

DramCoord encode(const MappingScheme& scheme, const DramConfig& cfg, std::uint64_t addr);
std::uint64_t decode(const MappingScheme& scheme, const DramConfig& cfg, const DramCoord& coord);
std::uint64_t channel_switch_period(const MappingScheme& scheme, const DramConfig& cfg);

}  // namespace umdam
