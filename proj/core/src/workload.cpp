#include "umdam/workload.hpp"

#include <string>

#include "umdam/errors.hpp"

namespace umdam {

void validate(const ModelSpec& model) {
    if (model.embedding_dim == 0 || model.head_dim == 0 || model.num_heads == 0 || model.num_blocks == 0) {
        throw ConfigError("model '" + model.name + "': dimensions must be non-zero");
    }
    if (model.embedding_dim != model.head_dim * model.num_heads) {
        throw ConfigError("model '" + model.name + "': embedding_dim " + std::to_string(model.embedding_dim) +
                          " != head_dim * num_heads (" + std::to_string(model.head_dim) + " * " +
                          std::to_string(model.num_heads) + ")");
    }
}

const std::vector<ModelSpec>& builtin_models() {
    static const std::vector<ModelSpec> models = {
        {"opt-125m", 768, 64, 12, 12},
        {"opt-1.3b", 2048, 64, 32, 24},
        {"opt-6.7b", 4096, 128, 32, 32},
        {"opt-30b", 7168, 128, 56, 48},
    };
    return models;
}

const ModelSpec& find_model(std::string_view name) {
    for (const auto& m : builtin_models()) {
        if (m.name == name) return m;
    }
    throw ArgumentError("unknown model '" + std::string(name) +
                        "' (expected opt-125m, opt-1.3b, opt-6.7b or opt-30b)");
}

std::string_view op_kind_name(OpKind k) { return k == OpKind::Gemm ? "gemm" : "gemv"; }

std::string_view engine_name(Engine e) { return e == Engine::Npu ? "npu" : "pim"; }

std::vector<PhaseOp> Workload::decode_attention_ops(std::uint64_t step) const {
    std::vector<PhaseOp> ops;
    if (!options.include_attention) return ops;
    const std::uint64_t ctx = prefill_len + step;
    const std::uint64_t d = embedding_dim;
    ops.reserve(2 * num_blocks);
    for (std::uint64_t b = 0; b < num_blocks; ++b) {
        const auto blk = static_cast<std::int64_t>(b);
        ops.push_back({OpKind::Gemv, 1, d, ctx, Engine::Pim, blk, "attn_score", true});
        ops.push_back({OpKind::Gemv, 1, ctx, d, Engine::Pim, blk, "attn_context", true});
    }
    return ops;
}

std::vector<PhaseOp> Workload::decode_step_ops(std::uint64_t step) const {
    if (step == 0 || step > decode_len) {
        throw ArgumentError("decode step " + std::to_string(step) + " is outside 1.." + std::to_string(decode_len));
    }
    std::vector<PhaseOp> ops = decode_weight_ops;
    auto attn = decode_attention_ops(step);
    ops.insert(ops.end(), attn.begin(), attn.end());
    return ops;
}

Workload expand(const ModelSpec& model, std::uint64_t prefill_len, std::uint64_t decode_len,
                const WorkloadOptions& opts, std::uint64_t element_size_bytes) {
    validate(model);
    if (prefill_len == 0) throw ArgumentError("prefill length must be at least 1");

    Workload w;
    w.prefill_len = prefill_len;
    w.decode_len = decode_len;
    w.element_size_bytes = element_size_bytes;
    w.embedding_dim = model.embedding_dim;
    w.num_blocks = model.num_blocks;
    w.options = opts;

    const std::uint64_t d = model.embedding_dim;
    struct Shape {
        const char* layer;
        std::uint64_t K, N;
    };
    const Shape shapes[] = {{"qkv", d, 3 * d}, {"out_proj", d, d}, {"fc1", d, 4 * d}, {"fc2", 4 * d, d}};

    for (const auto& s : shapes) w.weights.push_back({s.layer, s.K, s.N, model.num_blocks});
    if (opts.include_lm_head) w.weights.push_back({"lm_head", d, opts.vocab_size, 1});

    for (std::uint64_t b = 0; b < model.num_blocks; ++b) {
        const auto blk = static_cast<std::int64_t>(b);
        for (const auto& s : shapes) {
            w.prefill_ops.push_back({OpKind::Gemm, prefill_len, s.K, s.N, Engine::Npu, blk, s.layer, false});
            if (decode_len > 0) {
                w.decode_weight_ops.push_back({OpKind::Gemv, 1, s.K, s.N, Engine::Pim, blk, s.layer, false});
            }
        }
    }
    if (opts.include_lm_head) {
        // Only the last prompt position needs logits.
        w.prefill_ops.push_back({OpKind::Gemm, 1, d, opts.vocab_size, Engine::Npu, -1, "lm_head", false});
        if (decode_len > 0) {
            w.decode_weight_ops.push_back({OpKind::Gemv, 1, d, opts.vocab_size, Engine::Pim, -1, "lm_head", false});
        }
    }

    for (const auto& m : w.weights) w.weight_footprint_bytes += m.K * m.N * m.count * element_size_bytes;
    return w;
}

}  // namespace umdam
