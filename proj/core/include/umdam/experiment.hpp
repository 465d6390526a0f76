#pragma once

#include <cstdint>
#include <filesystem>
#include <future>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "umdam/config_io.hpp"
#include "umdam/workload.hpp"

namespace umdam {

enum class Variant : std::uint8_t { Baseline, Umdam };

/// When the baseline copies weights between its PIM and NPU layouts.
enum class RelayoutPolicy : std::uint8_t { BothTransitions, PrefillOnly, None };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view s);
std::string_view relayout_policy_name(RelayoutPolicy p);
/// Accepts "both", "both-transitions", "prefill-only", "none".
RelayoutPolicy parse_relayout_policy(std::string_view s);

struct Scenario {
    Variant variant = Variant::Umdam;
    std::string model = "opt-6.7b";  ///< built-in name or model JSON path
    std::uint64_t prefill_len = 512;
    std::uint64_t decode_len = 128;
    bool include_attention = true;
    bool include_lm_head = false;
    RelayoutPolicy relayout = RelayoutPolicy::BothTransitions;
};

struct OpTime {
    std::string phase;  ///< "prefill" or "decode"
    std::string layer;
    std::string engine;
    std::uint64_t count = 0;
    double seconds = 0.0;
};

struct SimReport {
    std::string variant;
    std::string model;
    std::uint64_t prefill_len = 0;
    std::uint64_t decode_len = 0;
    std::string relayout_policy;
    bool include_attention = true;

    double relayout_to_npu_s = 0.0;
    double prefill_s = 0.0;
    double relayout_to_pim_s = 0.0;
    double decode_s = 0.0;
    double ttft_s = 0.0;
    double ttlt_s = 0.0;

    std::uint64_t weight_footprint_bytes = 0;
    /// Bytes moved by one full relayout of every weight (read + write).
    std::uint64_t relayout_traffic_bytes = 0;

    std::vector<OpTime> breakdown;
    std::map<std::string, double> calibration_bw;  ///< scheme name -> bytes/s

    std::optional<double> ttft_speedup;
    std::optional<double> ttlt_speedup;
};

std::string to_json(const SimReport& r);

/// Cost of moving every copy of one weight shape between layouts.
struct RelayoutCost {
    double seconds = 0.0;
    std::uint64_t traffic_bytes = 0;
    double row_hit_rate = 0.0;
};

/// Runs scenarios against one system configuration. NPU calibration and
/// per-shape relayout replays are computed once and shared; the object is
/// safe to use from several threads.
class Simulator {
  public:
    explicit Simulator(SystemConfig sys);

    const SystemConfig& system() const { return sys_; }

    /// Bandwidths measured through the timing model (computed on first use).
    const NpuSpec& npu() const;

    SimReport run(const Scenario& s) const;

    /// Timing-model replay of one K x N matrix moved PIM -> NPU layout
    /// (to_npu = true) or back. Cached per shape and direction.
    RelayoutCost relayout_matrix(std::uint64_t K, std::uint64_t N, bool to_npu) const;

    /// Total relayout cost for every weight of a workload.
    RelayoutCost relayout_workload(const Workload& w, bool to_npu) const;

    /// ConfigError if one transformer block (plus the LM head) cannot be resident.
    void check_capacity(const Workload& w, Variant v) const;

  private:
    using Key = std::tuple<std::uint64_t, std::uint64_t, bool>;

    SystemConfig sys_;
    mutable std::once_flag npu_once_;
    mutable NpuSpec npu_;
    mutable std::mutex mu_;
    mutable std::map<Key, std::shared_future<RelayoutCost>> relayout_cache_;
};

SimReport run(const Scenario& s, const SystemConfig& sys = {});

/// One (model, P, D) cell with both variants.
struct SweepRow {
    std::string model;
    std::uint64_t prefill_len = 0;
    std::uint64_t decode_len = 0;
    std::string relayout_policy;
    bool include_attention = true;
    double baseline_relayout_to_npu_s = 0.0;
    double baseline_prefill_s = 0.0;
    double baseline_relayout_to_pim_s = 0.0;
    double baseline_decode_s = 0.0;
    double baseline_ttft_s = 0.0;
    double baseline_ttlt_s = 0.0;
    double umdam_prefill_s = 0.0;
    double umdam_decode_s = 0.0;
    double umdam_ttft_s = 0.0;
    double umdam_ttlt_s = 0.0;
    double ttft_speedup = 0.0;
    double ttlt_speedup = 0.0;
};

struct SweepOptions {
    bool include_attention = true;
    bool include_lm_head = false;
    RelayoutPolicy relayout = RelayoutPolicy::BothTransitions;
    unsigned threads = 0;  ///< 0: hardware concurrency
};

SweepRow pair_reports(const SimReport& baseline, const SimReport& umdam);

/// Cartesian product of models x prefill lengths x decode lengths, row order
/// model-major. ArgumentError on any empty set.
std::vector<SweepRow> sweep(const Simulator& sim, const std::vector<std::string>& models,
                            const std::vector<std::uint64_t>& prefill_lens,
                            const std::vector<std::uint64_t>& decode_lens, const SweepOptions& opts = {});

/// Grids: figure 3 = every built-in model, P in {128, 256, 512, 1024}, D = 0.
/// Figure 4 = one model (default opt-6.7b), P in {128..1024}, D in {128..2048}.
struct FigureGrid {
    std::vector<std::string> models;
    std::vector<std::uint64_t> prefill_lens;
    std::vector<std::uint64_t> decode_lens;
};

FigureGrid figure_grid(int figure, const std::string& model_override = {});

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// ArgumentError with the offending line number on malformed input.
std::vector<SweepRow> read_csv(std::istream& is);

/// Bands a row is checked against when summarizing.
struct ReportBands {
    double ttft_min = 2.0;
    double ttft_max = 4.0;
    double cross_model_ratio_max = 1.25;
    double long_decode_ttlt_min = 1.10;
    double reference_ttft_low = 2.8;
    double reference_ttft_high = 3.0;
    double reference_ttlt_max = 2.18;
};

struct Anomaly {
    std::size_t row = 0;  ///< 0-based data row
    std::string message;
};

struct ReportSummary {
    std::size_t rows = 0;
    /// model -> (prefill_len -> TTFT speedup), rows with decode_len == 0 only
    std::map<std::string, std::map<std::uint64_t, double>> ttft_series;
    double ttft_min = 0.0;
    double ttft_max = 0.0;
    double max_ttlt_speedup = 0.0;
    std::vector<Anomaly> anomalies;
    std::string text;
};

ReportSummary summarize(const std::vector<SweepRow>& rows, const ReportBands& bands = {});

/// Writes <stem>_ttft.csv and <stem>_ttlt.csv (tidy, plot-ready) plus
/// <stem>_summary.txt. Returns the written paths.
std::vector<std::filesystem::path> write_report_files(const std::vector<SweepRow>& rows,
                                                      const ReportSummary& summary,
                                                      const std::filesystem::path& stem);

}  // namespace umdam
