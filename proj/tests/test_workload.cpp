#include <gtest/gtest.h>

#include <cmath>

#include "umdam/errors.hpp"
#include "umdam/workload.hpp"

using namespace umdam;

TEST(Workload, BuiltinModels) {
    ASSERT_EQ(builtin_models().size(), 4u);
    const ModelSpec& m = find_model("opt-6.7b");
    EXPECT_EQ(m.embedding_dim, 4096u);
    EXPECT_EQ(m.num_heads, 32u);
    EXPECT_EQ(m.num_blocks, 32u);
    EXPECT_THROW((void)find_model("opt-175b"), ArgumentError);
}

TEST(Workload, FootprintFormula) {
    const Workload w = expand(find_model("opt-125m"), 128, 0);
    EXPECT_EQ(w.weight_footprint_bytes, 12ull * 768 * 768 * 12 * 2);
    EXPECT_NEAR(static_cast<double>(w.weight_footprint_bytes) / (1 << 20), 162.0, 0.1);
}

TEST(Workload, FootprintTracksNominalParameterCounts) {
    const std::pair<const char*, double> nominal[] = {{"opt-1.3b", 1.3e9}, {"opt-6.7b", 6.7e9}, {"opt-30b", 30e9}};
    for (const auto& [name, params] : nominal) {
        const ModelSpec& m = find_model(name);
        const double weights = 12.0 * m.embedding_dim * m.embedding_dim * m.num_blocks;
        EXPECT_NEAR(weights / params, 1.0, 0.15) << name;
    }
    const ModelSpec& m = find_model("opt-1.3b");
    EXPECT_NEAR(12.0 * m.embedding_dim * m.embedding_dim * m.num_blocks, 1.21e9, 0.01e9);

    // The smallest model is a third embeddings: 12 d^2 L alone is 85M of 125M,
    // and adding the token and position tables recovers the nominal count.
    const ModelSpec& s = find_model("opt-125m");
    const double blocks = 12.0 * s.embedding_dim * s.embedding_dim * s.num_blocks;
    EXPECT_GT(std::abs(blocks / 125e6 - 1.0), 0.15);
    EXPECT_NEAR((blocks + (50272.0 + 2050.0) * s.embedding_dim) / 125e6, 1.0, 0.01);
}

TEST(Workload, OpsPerBlock) {
    const Workload w = expand(find_model("opt-30b"), 64, 8);
    EXPECT_EQ(w.prefill_ops.size(), 4u * 48);
    EXPECT_EQ(w.decode_weight_ops.size(), 4u * 48);
    EXPECT_EQ(w.weights.size(), 4u);
    const std::uint64_t d = 7168;
    EXPECT_EQ(w.weights[0].K, d);
    EXPECT_EQ(w.weights[0].N, 3 * d);
    EXPECT_EQ(w.weights[2].N, 4 * d);
    EXPECT_EQ(w.weights[3].K, 4 * d);
    for (const auto& op : w.prefill_ops) {
        EXPECT_EQ(op.kind, OpKind::Gemm);
        EXPECT_EQ(op.engine, Engine::Npu);
        EXPECT_EQ(op.M, 64u);
    }
    for (const auto& op : w.decode_weight_ops) {
        EXPECT_EQ(op.kind, OpKind::Gemv);
        EXPECT_EQ(op.engine, Engine::Pim);
        EXPECT_EQ(op.M, 1u);
        EXPECT_FALSE(op.kv);
    }
}

TEST(Workload, DecodeStepsAndAttention) {
    const Workload w = expand(find_model("opt-125m"), 100, 4);
    const auto s1 = w.decode_step_ops(1);
    EXPECT_EQ(s1.size(), 4u * 12 + 2u * 12);
    const auto a1 = w.decode_attention_ops(1);
    const auto a4 = w.decode_attention_ops(4);
    ASSERT_EQ(a1.size(), 24u);
    EXPECT_EQ(a1[0].layer, "attn_score");
    EXPECT_EQ(a1[0].K, 768u);
    EXPECT_EQ(a1[0].N, 101u);
    EXPECT_EQ(a1[1].K, 101u);
    EXPECT_EQ(a1[1].N, 768u);
    EXPECT_TRUE(a1[0].kv);
    EXPECT_DOUBLE_EQ(a4[0].flops() - a1[0].flops(), 2.0 * 768 * 3);
    EXPECT_THROW((void)w.decode_step_ops(0), ArgumentError);
    EXPECT_THROW((void)w.decode_step_ops(5), ArgumentError);

    // Weight FLOPs per step do not depend on the step.
    double f1 = 0;
    for (const auto& op : w.decode_weight_ops) f1 += op.flops();
    EXPECT_DOUBLE_EQ(f1, 2.0 * 12 * 768 * 768 * 12);
}

TEST(Workload, NoAttentionAndNoDecode) {
    WorkloadOptions o;
    o.include_attention = false;
    const Workload w = expand(find_model("opt-125m"), 16, 2, o);
    EXPECT_TRUE(w.decode_attention_ops(1).empty());
    EXPECT_EQ(w.decode_step_ops(2).size(), 48u);
    EXPECT_TRUE(expand(find_model("opt-125m"), 16, 0).decode_weight_ops.empty());
    EXPECT_THROW(expand(find_model("opt-125m"), 0, 1), ArgumentError);
}

TEST(Workload, LmHeadKnob) {
    WorkloadOptions o;
    o.include_lm_head = true;
    const Workload w = expand(find_model("opt-125m"), 16, 2, o);
    ASSERT_EQ(w.weights.size(), 5u);
    EXPECT_EQ(w.weights.back().N, 50272u);
    EXPECT_EQ(w.weights.back().count, 1u);
    EXPECT_EQ(w.weight_footprint_bytes, 12ull * 768 * 768 * 12 * 2 + 768ull * 50272 * 2);
    EXPECT_EQ(w.prefill_ops.back().M, 1u);
    EXPECT_EQ(w.decode_weight_ops.back().layer, "lm_head");
}

TEST(Workload, ValidatesModels) {
    ModelSpec m{"odd", 1000, 64, 16, 2};
    EXPECT_THROW(validate(m), ConfigError);
    m = {"zero", 0, 0, 0, 0};
    EXPECT_THROW(validate(m), ConfigError);
}
