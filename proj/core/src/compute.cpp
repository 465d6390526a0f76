#include "umdam/compute.hpp"

#include <algorithm>
#include <string>

#include "umdam/errors.hpp"
#include "umdam/timing.hpp"

namespace umdam {

double NpuSpec::dram_bw(SchemeKind scheme) const {
    const auto it = achievable_dram_bw.find(scheme);
    if (it == achievable_dram_bw.end() || !(it->second > 0)) {
        throw ConfigError("NPU bandwidth for scheme " + std::string(scheme_name(scheme)) + " is not calibrated");
    }
    return it->second;
}

PimSpec pim_spec_for(const DramConfig& cfg, double peak_flops) {
    PimSpec s;
    s.peak_flops = peak_flops;
    s.internal_bw_bytes_per_s = cfg.pim_internal_bw_bytes_per_s;
    s.lanes = cfg.total_banks();
    return s;
}

NpuSpec calibrate_npu(const DramConfig& cfg, NpuSpec spec, std::uint64_t stream_bytes) {
    for (const SchemeKind k : {SchemeKind::Umdam, SchemeKind::Conventional, SchemeKind::PimOpt}) {
        spec.achievable_dram_bw[k] =
            replay_npu_stream(cfg, MappingScheme::of(k), 0, stream_bytes).effective_bw_bytes_per_s;
    }
    return spec;
}

double npu_gemm_time(const NpuSpec& spec, std::uint64_t M, std::uint64_t K, std::uint64_t N, double dram_bw,
                     std::uint64_t element_size_bytes) {
    if (M == 0 || K == 0 || N == 0) throw ArgumentError("GEMM dimensions must be non-zero");
    const double flops = 2.0 * static_cast<double>(M) * static_cast<double>(K) * static_cast<double>(N);
    const double weight_bytes =
        static_cast<double>(K) * static_cast<double>(N) * static_cast<double>(element_size_bytes);
    return std::max(flops / spec.peak_flops, weight_bytes / dram_bw);
}

double npu_gemm_time(const NpuSpec& spec, std::uint64_t M, std::uint64_t K, std::uint64_t N, SchemeKind scheme,
                     std::uint64_t element_size_bytes) {
    return npu_gemm_time(spec, M, K, N, spec.dram_bw(scheme), element_size_bytes);
}

std::vector<std::uint64_t> lane_bytes(const MatrixLayout& layout) {
    const auto& cfg = layout.config();
    std::vector<std::uint64_t> out(cfg.total_banks(), 0);
    const std::uint64_t column = layout.rows() * cfg.element_size_bytes;
    for (std::uint64_t j = 0; j < layout.cols(); ++j) {
        out[lane_index(cfg, layout.column_home(j))] += column;
    }
    return out;
}

double pim_gemv_time(const PimSpec& spec, std::span<const std::uint64_t> per_lane_bytes, std::uint64_t K,
                     std::uint64_t N) {
    std::uint64_t worst = 0;
    for (const auto b : per_lane_bytes) worst = std::max(worst, b);
    const double bw_time = static_cast<double>(worst) / spec.lane_bw();
    const double compute = 2.0 * static_cast<double>(K) * static_cast<double>(N) / spec.peak_flops;
    return std::max(bw_time, compute);
}

double pim_gemv_time(const PimSpec& spec, const MatrixLayout& layout) {
    if (!layout.column_local()) {
        throw ArgumentError("PIM GEMV needs a column-local layout, got " + std::string(layout.kind()));
    }
    const auto lanes = lane_bytes(layout);
    return pim_gemv_time(spec, lanes, layout.rows(), layout.cols());
}

double pim_balanced_gemv_time(const PimSpec& spec, std::uint64_t K, std::uint64_t N,
                              std::uint64_t element_size_bytes) {
    const double bytes = static_cast<double>(K) * static_cast<double>(N) * static_cast<double>(element_size_bytes);
    const double compute = 2.0 * static_cast<double>(K) * static_cast<double>(N) / spec.peak_flops;
    return std::max(bytes / spec.internal_bw_bytes_per_s, compute);
}

}  // namespace umdam
