#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "umdam/compute.hpp"
#include "umdam/dram_config.hpp"
#include "umdam/workload.hpp"

namespace umdam {

/// Everything a simulation run needs besides the workload.
struct SystemConfig {
    DramConfig dram{};
    NpuSpec npu{};
    double pim_peak_flops = 512e9;

    PimSpec pim() const { return pim_spec_for(dram, pim_peak_flops); }
};

/// JSON layout: DramConfig fields at top level, plus optional "timing",
/// "npu" ({peak_flops, onchip_buffer_bytes, l1_bytes}) and "pim"
/// ({peak_flops}) objects. Omitted fields keep the LPDDR5 defaults; unknown
/// keys and ill-typed values raise ConfigError.
SystemConfig parse_system_config(std::string_view json_text);
SystemConfig load_system_config(const std::filesystem::path& path);

std::string to_json(const SystemConfig& cfg);

/// {"name", "embedding_dim", "head_dim", "num_heads", "num_blocks"}; validated.
ModelSpec parse_model(std::string_view json_text);
ModelSpec load_model(const std::filesystem::path& path);

/// Built-in name, or a path to a model JSON file.
ModelSpec resolve_model(std::string_view name_or_path);

}  // namespace umdam
