#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace umdam {

/// Decoder-only transformer shape (OPT family).
struct ModelSpec {
    std::string name;
    std::uint64_t embedding_dim = 0;
    std::uint64_t head_dim = 0;
    std::uint64_t num_heads = 0;
    std::uint64_t num_blocks = 0;

    bool operator==(const ModelSpec&) const = default;
};

/// ConfigError unless embedding_dim == head_dim * num_heads and all fields are non-zero.
void validate(const ModelSpec& model);

/// opt-125m, opt-1.3b, opt-6.7b, opt-30b.
const std::vector<ModelSpec>& builtin_models();

/// ArgumentError for unknown names.
const ModelSpec& find_model(std::string_view name);

enum class OpKind : std::uint8_t { Gemm, Gemv };
enum class Engine : std::uint8_t { Npu, Pim };

std::string_view op_kind_name(OpKind k);
std::string_view engine_name(Engine e);

/// One matrix operation: (M x K) * (K x N). Weight ops name a weight matrix;
/// KV-cache ops (kv == true) do not.
struct PhaseOp {
    OpKind kind = OpKind::Gemm;
    std::uint64_t M = 0;
    std::uint64_t K = 0;
    std::uint64_t N = 0;
    Engine engine = Engine::Npu;
    std::int64_t block = -1;  ///< -1 for ops outside the transformer blocks
    std::string layer;
    bool kv = false;

    double flops() const { return 2.0 * static_cast<double>(M) * static_cast<double>(K) * static_cast<double>(N); }
};

/// A distinct weight shape and how many copies the model holds.
struct WeightMatrix {
    std::string layer;
    std::uint64_t K = 0;
    std::uint64_t N = 0;
    std::uint64_t count = 0;
};

struct WorkloadOptions {
    bool include_attention = true;
    bool include_lm_head = false;
    std::uint64_t vocab_size = 50272;
};

class Workload {
  public:
    std::uint64_t prefill_len = 0;
    std::uint64_t decode_len = 0;
    std::uint64_t element_size_bytes = 2;
    std::uint64_t embedding_dim = 0;
    std::uint64_t num_blocks = 0;
    WorkloadOptions options;

    std::vector<PhaseOp> prefill_ops;
    /// Weight GEMVs issued at every decode step (identical across steps).
    std::vector<PhaseOp> decode_weight_ops;
    std::vector<WeightMatrix> weights;
    std::uint64_t weight_footprint_bytes = 0;

    /// All ops of decode step `step` (1-based, step <= decode_len): weight GEMVs
    /// followed by attention GEMVs over a context of prefill_len + step tokens.
    std::vector<PhaseOp> decode_step_ops(std::uint64_t step) const;

    /// KV-cache GEMVs of one decode step.
    std::vector<PhaseOp> decode_attention_ops(std::uint64_t step) const;
};

/// Expands a model into its prefill GEMMs (M = prefill_len, NPU) and decode
/// GEMVs (M = 1, PIM). Per block: qkv (d x 3d), out_proj (d x d), fc1 (d x 4d),
/// fc2 (4d x d). Embedding tables are excluded; the LM head is opt-in.
Workload expand(const ModelSpec& model, std::uint64_t prefill_len, std::uint64_t decode_len,
                const WorkloadOptions& opts = {}, std::uint64_t element_size_bytes = 2);

}  // namespace umdam
