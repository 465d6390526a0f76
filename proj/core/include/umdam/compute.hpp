#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "umdam/dram_config.hpp"
#include "umdam/layout.hpp"
#include "umdam/mapping.hpp"

namespace umdam {

/// Dual Ascend-310B-class NPU: 16 TFLOPS aggregate, 8 MB on-chip buffer.
struct NpuSpec {
    double peak_flops = 16e12;
    std::uint64_t onchip_buffer_bytes = std::uint64_t{8} << 20;
    std::uint64_t l1_bytes = std::uint64_t{1} << 20;
    /// Sustained sequential read bandwidth per mapping scheme, bytes/s.
    std::map<SchemeKind, double> achievable_dram_bw;

    /// ConfigError if the scheme was never calibrated.
    double dram_bw(SchemeKind scheme) const;
};

/// AiM-style near-bank PIM: one MAC lane per bank.
struct PimSpec {
    double peak_flops = 512e9;
    double internal_bw_bytes_per_s = 512e9;
    std::uint64_t lanes = 64;

    double lane_bw() const { return internal_bw_bytes_per_s / static_cast<double>(lanes); }
};

PimSpec pim_spec_for(const DramConfig& cfg, double peak_flops = 512e9);

/// Measures sequential read bandwidth for every scheme with a stream of
/// `stream_bytes` replayed through the timing model.
NpuSpec calibrate_npu(const DramConfig& cfg, NpuSpec spec = {}, std::uint64_t stream_bytes = std::uint64_t{8} << 20);

/// Roofline: max(2MKN / peak_flops, one pass over the K x N weights at the
/// scheme's calibrated bandwidth).
double npu_gemm_time(const NpuSpec& spec, std::uint64_t M, std::uint64_t K, std::uint64_t N, SchemeKind scheme,
                     std::uint64_t element_size_bytes);

double npu_gemm_time(const NpuSpec& spec, std::uint64_t M, std::uint64_t K, std::uint64_t N, double dram_bw,
                     std::uint64_t element_size_bytes);

/// Bytes each PIM lane must stream for the layout's logical columns.
std::vector<std::uint64_t> lane_bytes(const MatrixLayout& layout);

/// Slowest lane at lane_bw, but never faster than 2KN / peak_flops.
double pim_gemv_time(const PimSpec& spec, std::span<const std::uint64_t> per_lane_bytes, std::uint64_t K,
                     std::uint64_t N);

/// GEMV over a column-local layout; ArgumentError otherwise.
double pim_gemv_time(const PimSpec& spec, const MatrixLayout& layout);

/// GEMV against data spread evenly over every lane (the KV cache).
double pim_balanced_gemv_time(const PimSpec& spec, std::uint64_t K, std::uint64_t N,
                              std::uint64_t element_size_bytes);

}  // namespace umdam
