#include "umdam/timing.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "umdam/errors.hpp"

namespace umdam {

namespace {

constexpr std::int64_t kNever = -(std::int64_t{1} << 40);

}  // namespace

Replayer::Replayer(const DramConfig& cfg, const TimingParams& timing, ReplayOptions opts)
    : cfg_(cfg), t_(timing), bits_(derive_bitfields(cfg)), opts_(opts) {
    if (opts_.queue_depth == 0) throw ArgumentError("replay queue depth must be at least 1");
    banks_.assign(cfg.total_banks(), BankState{0, false, kNever, kNever, kNever});
    channels_.assign(cfg.channels, ChannelState{kNever, 0, 0});
    window_.assign(opts_.queue_depth, 0);
}

void Replayer::check(const MemRequest& req) const {
    const auto fail = [&](const std::string& why) {
        throw ReplayError("request #" + std::to_string(req.seq) + ": " + why, req.seq);
    };
    if (req.bytes < cfg_.burst_size_bytes || req.bytes % cfg_.burst_size_bytes != 0) {
        fail("size " + std::to_string(req.bytes) + " is not a whole number of " +
             std::to_string(cfg_.burst_size_bytes) + "-byte bursts");
    }
    for (const Field f : kAllFields) {
        const unsigned w = bits_.width(f);
        if ((req.coord.get(f) >> w) != 0) {
            fail("field " + std::string(field_name(f)) + " = " + std::to_string(req.coord.get(f)) +
                 " exceeds its " + std::to_string(w) + "-bit width");
        }
    }
    if (req.coord.offset != 0) fail("coordinate is not burst aligned");
    const std::uint64_t column = (req.coord.col_m << bits_.col_l) | req.coord.col_l;
    if (column + req.bytes / cfg_.burst_size_bytes > cfg_.bursts_per_row()) {
        fail("burst run crosses the end of the DRAM row");
    }
}

void Replayer::push(const MemRequest& req) {
    check(req);

    const std::uint64_t n = pushed_++;
    const Cycle start = window_[n % opts_.queue_depth];
    const DramCoord& c = req.coord;
    ChannelState& ch = channels_[c.channel];
    BankState& bank = banks_[(c.channel * cfg_.ranks_per_channel + c.rank) * cfg_.banks_per_rank + c.bank];
    const std::uint64_t bursts = req.bytes / cfg_.burst_size_bytes;

    if (bank.open && bank.open_row == c.row) {
        ++row_hits_;
    } else {
        Cycle act = start;
        if (bank.open) act = std::max(start, bank.earliest_precharge) + t_.n_rp_pb;
        act = std::max(act, bank.last_activate + static_cast<Cycle>(t_.n_rc));
        bank.open = true;
        bank.open_row = c.row;
        bank.last_activate = act;
        bank.earliest_column = act + t_.n_rcd;
        bank.earliest_precharge = act + t_.n_ras;
    }
    row_hits_ += bursts - 1;

    Cycle data_end = 0;
    for (std::uint64_t k = 0; k < bursts; ++k) {
        const Cycle col = std::max({start, bank.earliest_column, ch.last_column + static_cast<Cycle>(t_.n_ccd),
                                    ch.bus_free});
        data_end = col + t_.n_bl;
        ch.last_column = col;
        ch.bus_free = data_end;
        const Cycle pre_ok = req.kind == AccessKind::Write ? data_end + t_.n_wr : data_end;
        bank.earliest_precharge = std::max(bank.earliest_precharge, pre_ok);
    }

    const Cycle done = data_end + (req.kind == AccessKind::Read ? t_.n_cl : 0);
    window_[n % opts_.queue_depth] = done;
    end_ = std::max(end_, done);
    ch.bytes += req.bytes;
    total_bytes_ += req.bytes;
    bursts_ += bursts;
}

ReplayResult Replayer::result() const {
    ReplayResult r;
    r.total_cycles = static_cast<std::uint64_t>(end_);
    r.total_bytes = total_bytes_;
    r.requests = pushed_;
    r.bursts = bursts_;
    r.row_hits = row_hits_;
    r.seconds = static_cast<double>(r.total_cycles) * t_.t_ck_ns * 1e-9;
    r.effective_bw_bytes_per_s = r.seconds > 0 ? static_cast<double>(r.total_bytes) / r.seconds : 0.0;
    r.row_hit_rate = bursts_ > 0 ? static_cast<double>(row_hits_) / static_cast<double>(bursts_) : 0.0;
    r.per_channel_bytes.reserve(channels_.size());
    for (const auto& ch : channels_) r.per_channel_bytes.push_back(ch.bytes);
    return r;
}

ReplayResult replay(const DramConfig& cfg, const TimingParams& timing, std::span<const MemRequest> stream,
                    ReplayOptions opts) {
    Replayer r(cfg, timing, opts);
    for (const auto& req : stream) r.push(req);
    return r.result();
}

// ---------------------------------------------------------------------------
// Stream generators

std::uint64_t stream_chunk_bytes(const AddressMapper& mapper, const DramConfig& cfg) {
    // Only Offset, then ColL, then ColM (skipping empty fields) keep a
    // sequential run inside one row with consecutive column indices.
    constexpr Field expected[] = {Field::Offset, Field::ColL, Field::ColM};
    const auto& order = mapper.scheme().order();
    unsigned run = 0;
    std::size_t next = 0;
    for (auto it = order.rbegin(); it != order.rend() && next < 3; ++it) {
        const unsigned w = mapper.width(*it);
        if (w == 0) {
            if (*it == expected[next]) ++next;
            continue;
        }
        if (*it != expected[next]) break;
        run += w;
        ++next;
    }
    const std::uint64_t chunk = std::min<std::uint64_t>(std::uint64_t{1} << run, cfg.interleave_granularity_bytes);
    if (chunk < cfg.burst_size_bytes) {
        throw ArgumentError("scheme '" + mapper.scheme().name() + "' does not keep a burst inside one row");
    }
    return chunk;
}

void for_each_npu_request(const DramConfig& cfg, const MappingScheme& scheme, std::uint64_t base,
                          std::uint64_t bytes, const RequestSink& sink) {
    const AddressMapper mapper(scheme, cfg);
    const std::uint64_t burst = cfg.burst_size_bytes;
    if (base % burst != 0) {
        throw ArgumentError("stream base " + std::to_string(base) + " is not burst aligned");
    }
    bytes = (bytes + burst - 1) / burst * burst;
    if (base > mapper.capacity() || bytes > mapper.capacity() - base) {
        throw AddressError("stream [" + std::to_string(base) + ", +" + std::to_string(bytes) +
                               ") exceeds DRAM capacity",
                           base + bytes);
    }
    const std::uint64_t chunk = stream_chunk_bytes(mapper, cfg);
    std::uint64_t seq = 0;
    for (std::uint64_t a = base, end = base + bytes; a < end;) {
        const std::uint64_t n = std::min(chunk - a % chunk, end - a);
        sink(MemRequest{mapper.encode_unchecked(a), AccessKind::Read, n, seq++});
        a += n;
    }
}

std::vector<MemRequest> npu_stream(const DramConfig& cfg, const MappingScheme& scheme, std::uint64_t base,
                                   std::uint64_t bytes) {
    std::vector<MemRequest> out;
    for_each_npu_request(cfg, scheme, base, bytes, [&](const MemRequest& r) { out.push_back(r); });
    return out;
}

bool same_placement(const MatrixLayout& a, const MatrixLayout& b) {
    if (a.kind() != b.kind() || !(a.config() == b.config()) || a.rows() != b.rows() || a.cols() != b.cols() ||
        a.padded_rows() != b.padded_rows() || a.padded_cols() != b.padded_cols()) {
        return false;
    }
    const std::uint64_t ilast = a.padded_rows() - 1;
    const std::uint64_t jlast = a.padded_cols() - 1;
    return a.element_linear(0, 0) == b.element_linear(0, 0) &&
           a.element_linear(ilast, jlast) == b.element_linear(ilast, jlast) &&
           a.element_linear(ilast, 0) == b.element_linear(ilast, 0) &&
           a.element_linear(0, jlast) == b.element_linear(0, jlast);
}

void for_each_relayout_request(const MatrixLayout& from, const MatrixLayout& to, const RequestSink& sink,
                               std::uint64_t staging_bytes) {
    if (from.rows() != to.rows() || from.cols() != to.cols() || from.padded_rows() != to.padded_rows() ||
        from.padded_cols() != to.padded_cols()) {
        throw ArgumentError("relayout between mismatched matrices: " + std::to_string(from.rows()) + " x " +
                            std::to_string(from.cols()) + " vs " + std::to_string(to.rows()) + " x " +
                            std::to_string(to.cols()));
    }
    if (!(from.config() == to.config())) {
        throw ArgumentError("relayout between layouts on different DRAM configurations");
    }
    if (same_placement(from, to)) return;

    const std::uint64_t burst = to.config().burst_size_bytes;
    const AddressMapper& src = from.mapper();
    const AddressMapper& dst = to.mapper();
    const std::uint64_t batch = std::max<std::uint64_t>(1, staging_bytes / burst);

    // Gather a buffer's worth of source bursts, then stream it out.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> staged;  // (source, destination)
    staged.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(batch, std::uint64_t{1} << 20)));
    std::uint64_t seq = 0;
    const auto flush = [&] {
        for (const auto& [s, d] : staged) sink(MemRequest{src.encode_unchecked(s), AccessKind::Read, burst, seq++});
        for (const auto& [s, d] : staged) sink(MemRequest{dst.encode_unchecked(d), AccessKind::Write, burst, seq++});
        staged.clear();
    };
    to.for_each_burst([&](std::uint64_t i0, std::uint64_t j, std::uint64_t addr) {
        staged.emplace_back(from.element_linear(i0, j), addr);
        if (staged.size() == batch) flush();
    });
    flush();
}

std::vector<MemRequest> relayout_stream(const MatrixLayout& from, const MatrixLayout& to,
                                        std::uint64_t staging_bytes) {
    std::vector<MemRequest> out;
    for_each_relayout_request(from, to, [&](const MemRequest& r) { out.push_back(r); }, staging_bytes);
    return out;
}

ReplayResult replay_relayout(const MatrixLayout& from, const MatrixLayout& to, const TimingParams& timing,
                             ReplayOptions opts, std::uint64_t staging_bytes) {
    Replayer r(to.config(), timing, opts);
    for_each_relayout_request(from, to, [&](const MemRequest& req) { r.push(req); }, staging_bytes);
    return r.result();
}

ReplayResult replay_npu_stream(const DramConfig& cfg, const MappingScheme& scheme, std::uint64_t base,
                               std::uint64_t bytes, ReplayOptions opts) {
    Replayer r(cfg, cfg.timing, opts);
    for_each_npu_request(cfg, scheme, base, bytes, [&](const MemRequest& req) { r.push(req); });
    return r.result();
}

}  // namespace umdam
