#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "umdam/dram_config.hpp"
#include "umdam/layout.hpp"
#include "umdam/mapping.hpp"

namespace umdam {

enum class AccessKind : std::uint8_t { Read, Write };

/// A run of bursts within one (channel, rank, bank, row), starting at coord.
struct MemRequest {
    DramCoord coord;
    AccessKind kind = AccessKind::Read;
    std::uint64_t bytes = 0;
    std::uint64_t seq = 0;
};

struct ReplayOptions {
    /// Requests in flight across the whole controller; request n cannot start
    /// before request n - queue_depth has completed.
    std::uint64_t queue_depth = 64;
};

struct ReplayResult {
    std::uint64_t total_cycles = 0;
    std::uint64_t total_bytes = 0;
    std::uint64_t requests = 0;
    std::uint64_t bursts = 0;
    std::uint64_t row_hits = 0;
    double seconds = 0.0;
    double effective_bw_bytes_per_s = 0.0;
    double row_hit_rate = 0.0;
    std::vector<std::uint64_t> per_channel_bytes;

    bool operator==(const ReplayResult&) const = default;
};

/// Open-page, in-order DRAM timing model.
///
/// Each bank tracks its open row and the earliest cycle it may accept ACT, a
/// column command, or PRE. A row miss costs PRE (n_RPpb, no earlier than
/// n_RAS after ACT and n_WR after write data) plus ACT (n_RCD, no earlier
/// than n_RC after the previous ACT). Column commands on a channel are spaced
/// by n_CCD and each burst holds the data bus for n_BL cycles. Read latency
/// n_CL is paid once, at the tail of the stream. Channels share nothing but
/// the request window.
class Replayer {
  public:
    Replayer(const DramConfig& cfg, const TimingParams& timing, ReplayOptions opts = {});

    /// Throws ReplayError (carrying req.seq) for invalid requests.
    void push(const MemRequest& req);

    ReplayResult result() const;

  private:
    using Cycle = std::int64_t;

    struct BankState {
        std::uint64_t open_row = 0;
        bool open = false;
        Cycle last_activate;
        Cycle earliest_column;
        Cycle earliest_precharge;
    };

    struct ChannelState {
        Cycle last_column;
        Cycle bus_free = 0;
        std::uint64_t bytes = 0;
    };

    void check(const MemRequest& req) const;

    DramConfig cfg_;
    TimingParams t_;
    BitFields bits_;
    ReplayOptions opts_;
    std::vector<BankState> banks_;
    std::vector<ChannelState> channels_;
    std::vector<Cycle> window_;
    std::uint64_t pushed_ = 0;
    std::uint64_t total_bytes_ = 0;
    std::uint64_t bursts_ = 0;
    std::uint64_t row_hits_ = 0;
    Cycle end_ = 0;
};

ReplayResult replay(const DramConfig& cfg, const TimingParams& timing, std::span<const MemRequest> stream,
                    ReplayOptions opts = {});

using RequestSink = std::function<void(const MemRequest&)>;

/// Largest aligned run, at most one interleave granule, that stays inside one
/// DRAM row under the scheme.
std::uint64_t stream_chunk_bytes(const AddressMapper& mapper, const DramConfig& cfg);

/// Sequential reads of [base, base + bytes), chunked by stream_chunk_bytes.
/// base must be burst aligned; bytes is rounded up to whole bursts.
void for_each_npu_request(const DramConfig& cfg, const MappingScheme& scheme, std::uint64_t base,
                          std::uint64_t bytes, const RequestSink& sink);

std::vector<MemRequest> npu_stream(const DramConfig& cfg, const MappingScheme& scheme, std::uint64_t base,
                                   std::uint64_t bytes);

/// True when both layouts place every element at the same physical address.
bool same_placement(const MatrixLayout& a, const MatrixLayout& b);

/// On-chip staging buffer a relayout copies through (the NPU's 8 MB buffer).
inline constexpr std::uint64_t kDefaultStagingBytes = std::uint64_t{8} << 20;

/// Copy traffic that moves a matrix from one layout to another, walking the
/// destination in ascending address order. Destination bursts are taken a
/// staging buffer at a time: first one read per burst at the source, then
/// one write per burst at the destination. staging_bytes <= burst size
/// alternates read and write burst by burst. Empty when the placements are
/// identical.
void for_each_relayout_request(const MatrixLayout& from, const MatrixLayout& to, const RequestSink& sink,
                               std::uint64_t staging_bytes = kDefaultStagingBytes);

std::vector<MemRequest> relayout_stream(const MatrixLayout& from, const MatrixLayout& to,
                                        std::uint64_t staging_bytes = kDefaultStagingBytes);

/// Replays a relayout without materializing the stream.
ReplayResult replay_relayout(const MatrixLayout& from, const MatrixLayout& to, const TimingParams& timing,
                             ReplayOptions opts = {}, std::uint64_t staging_bytes = kDefaultStagingBytes);

/// Replays a sequential NPU read stream without materializing it.
ReplayResult replay_npu_stream(const DramConfig& cfg, const MappingScheme& scheme, std::uint64_t base,
                               std::uint64_t bytes, ReplayOptions opts = {});

}  // namespace umdam
