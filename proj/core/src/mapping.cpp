#include "umdam/mapping.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "umdam/errors.hpp"

namespace umdam {

std::uint64_t DramCoord::get(Field f) const {
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

void DramCoord::set(Field f, std::uint64_t v) {
    switch (f) {
        case Field::Row: row = v; break;
        case Field::ColM: col_m = v; break;
        case Field::Bank: bank = v; break;
        case Field::Rank: rank = v; break;
        case Field::Channel: channel = v; break;
        case Field::ColL: col_l = v; break;
        case Field::Offset: offset = v; break;
    }
}

std::ostream& operator<<(std::ostream& os, const DramCoord& c) {
    return os << "{row=" << c.row << " col_M=" << c.col_m << " bank=" << c.bank << " rank=" << c.rank
              << " channel=" << c.channel << " col_L=" << c.col_l << " offset=" << c.offset << "}";
}

std::string_view scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::Umdam: return "umdam";
        case SchemeKind::Conventional: return "conventional";
        case SchemeKind::PimOpt: return "pim_opt";
    }
    return "?";
}

SchemeKind parse_scheme(std::string_view name) {
    if (name == "umdam") return SchemeKind::Umdam;
    if (name == "conventional") return SchemeKind::Conventional;
    if (name == "pim_opt" || name == "pim-opt") return SchemeKind::PimOpt;
    throw ArgumentError("unknown mapping scheme '" + std::string(name) +
                        "' (expected umdam, conventional or pim_opt)");
}

MappingScheme::MappingScheme(std::string name, std::array<Field, 7> msb_to_lsb)
    : name_(std::move(name)), order_(msb_to_lsb) {
    auto sorted = order_;
    std::sort(sorted.begin(), sorted.end());
    auto expected = kAllFields;
    std::sort(expected.begin(), expected.end());
    if (sorted != expected) {
        throw ArgumentError("mapping scheme '" + name_ + "': field order is not a permutation");
    }
}

MappingScheme MappingScheme::umdam() {
    return {"umdam",
            {Field::Row, Field::ColM, Field::Bank, Field::Rank, Field::Channel, Field::ColL, Field::Offset}};
}

MappingScheme MappingScheme::conventional() {
    return {"conventional",
            {Field::Row, Field::ColM, Field::ColL, Field::Bank, Field::Rank, Field::Channel, Field::Offset}};
}

MappingScheme MappingScheme::pim_opt() {
    return {"pim_opt",
            {Field::Channel, Field::Rank, Field::Bank, Field::Row, Field::ColM, Field::ColL, Field::Offset}};
}

MappingScheme MappingScheme::of(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::Umdam: return umdam();
        case SchemeKind::Conventional: return conventional();
        case SchemeKind::PimOpt: return pim_opt();
    }
    return umdam();
}

AddressMapper::AddressMapper(MappingScheme scheme, const DramConfig& cfg)
    : scheme_(std::move(scheme)), bits_(derive_bitfields(cfg)), capacity_(total_capacity_bytes(cfg)) {
    unsigned pos = 0;
    const auto& order = scheme_.order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto i = index(*it);
        width_[i] = bits_.width(*it);
        lsb_[i] = pos;
        mask_[i] = width_[i] == 0 ? 0 : ((std::uint64_t{1} << width_[i]) - 1);
        pos += width_[i];
    }
}

DramCoord AddressMapper::encode(std::uint64_t addr) const {
    if (addr >= capacity_) {
        std::ostringstream os;
        os << "address 0x" << std::hex << addr << " is beyond capacity 0x" << capacity_;
        throw AddressError(os.str(), addr);
    }
    return encode_unchecked(addr);
}

std::uint64_t AddressMapper::decode(const DramCoord& coord) const {
    for (std::size_t i = 0; i < 7; ++i) {
        const auto v = coord.get(kAllFields[i]);
        if ((v & ~mask_[i]) != 0) {
            throw AddressError("coordinate field " + std::string(field_name(kAllFields[i])) + " = " +
                                   std::to_string(v) + " exceeds its " + std::to_string(width_[i]) +
                                   "-bit width",
                               v);
        }
    }
    return decode_unchecked(coord);
}

std::uint64_t AddressMapper::channel_switch_period() const {
    if (width(Field::Channel) == 0) return capacity_;
    return std::uint64_t{1} << lsb(Field::Channel);
}

DramCoord encode(const MappingScheme& scheme, const DramConfig& cfg, std::uint64_t addr) {
    return AddressMapper(scheme, cfg).encode(addr);
}

std::uint64_t decode(const MappingScheme& scheme, const DramConfig& cfg, const DramCoord& coord) {
    return AddressMapper(scheme, cfg).decode(coord);
}

std::uint64_t channel_switch_period(const MappingScheme& scheme, const DramConfig& cfg) {
    return AddressMapper(scheme, cfg).channel_switch_period();
}

}  // namespace umdam
