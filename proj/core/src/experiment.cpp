#include "umdam/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "umdam/compute.hpp"
#include "umdam/errors.hpp"
#include "umdam/layout.hpp"
#include "umdam/timing.hpp"

namespace umdam {

std::string_view variant_name(Variant v) { return v == Variant::Baseline ? "baseline" : "umdam"; }

Variant parse_variant(std::string_view s) {
    if (s == "baseline") return Variant::Baseline;
    if (s == "umdam") return Variant::Umdam;
    throw ArgumentError("unknown variant '" + std::string(s) + "' (expected baseline or umdam)");
}

std::string_view relayout_policy_name(RelayoutPolicy p) {
    switch (p) {
        case RelayoutPolicy::BothTransitions: return "both-transitions";
        case RelayoutPolicy::PrefillOnly: return "prefill-only";
        case RelayoutPolicy::None: return "none";
    }
    return "?";
}

RelayoutPolicy parse_relayout_policy(std::string_view s) {
    if (s == "both" || s == "both-transitions") return RelayoutPolicy::BothTransitions;
    if (s == "prefill-only") return RelayoutPolicy::PrefillOnly;
    if (s == "none") return RelayoutPolicy::None;
    throw ArgumentError("unknown relayout policy '" + std::string(s) + "' (expected both, prefill-only or none)");
}

std::string to_json(const SimReport& r) {
    nlohmann::ordered_json doc;
    doc["variant"] = r.variant;
    doc["model"] = r.model;
    doc["prefill_len"] = r.prefill_len;
    doc["decode_len"] = r.decode_len;
    doc["relayout_policy"] = r.relayout_policy;
    doc["include_attention"] = r.include_attention;
    doc["relayout_to_npu_s"] = r.relayout_to_npu_s;
    doc["prefill_s"] = r.prefill_s;
    doc["relayout_to_pim_s"] = r.relayout_to_pim_s;
    doc["decode_s"] = r.decode_s;
    doc["ttft_s"] = r.ttft_s;
    doc["ttlt_s"] = r.ttlt_s;
    doc["weight_footprint_bytes"] = r.weight_footprint_bytes;
    doc["relayout_traffic_bytes"] = r.relayout_traffic_bytes;
    auto& cal = doc["calibration_bw_bytes_per_s"];
    cal = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.calibration_bw) cal[k] = v;
    auto& ops = doc["breakdown"];
    ops = nlohmann::ordered_json::array();
    for (const auto& op : r.breakdown) {
        ops.push_back({{"phase", op.phase},
                       {"layer", op.layer},
                       {"engine", op.engine},
                       {"count", op.count},
                       {"seconds", op.seconds}});
    }
    if (r.ttft_speedup) doc["ttft_speedup"] = *r.ttft_speedup;
    if (r.ttlt_speedup) doc["ttlt_speedup"] = *r.ttlt_speedup;
    return doc.dump(2);
}

// ---------------------------------------------------------------------------
// Simulator

Simulator::Simulator(SystemConfig sys) : sys_(std::move(sys)) { validate(sys_.dram); }

const NpuSpec& Simulator::npu() const {
    std::call_once(npu_once_, [this] { npu_ = calibrate_npu(sys_.dram, sys_.npu); });
    return npu_;
}

RelayoutCost Simulator::relayout_matrix(std::uint64_t K, std::uint64_t N, bool to_npu) const {
    const Key key{K, N, to_npu};
    std::promise<RelayoutCost> promise;
    std::shared_future<RelayoutCost> fut;
    bool owner = false;
    {
        std::lock_guard lock(mu_);
        auto it = relayout_cache_.find(key);
        if (it != relayout_cache_.end()) {
            fut = it->second;
        } else {
            fut = promise.get_future().share();
            relayout_cache_.emplace(key, fut);
            owner = true;
        }
    }
    if (owner) {
        try {
            const DramConfig& d = sys_.dram;
            // The PIM copy sits at the bottom of every bank; the NPU copy in
            // the upper half of the physical space, so the two never overlap.
            const PimOptimizedLayout pim(d, K, N, 0);
            const LayoutPlan npu_layout = plan_npu_layout(d, K, N, total_capacity_bytes(d) / 2);
            const ReplayResult r = to_npu ? replay_relayout(pim, npu_layout, d.timing)
                                          : replay_relayout(npu_layout, pim, d.timing);
            promise.set_value({r.seconds, r.total_bytes, r.row_hit_rate});
        } catch (...) {
            promise.set_exception(std::current_exception());
        }
    }
    return fut.get();
}

RelayoutCost Simulator::relayout_workload(const Workload& w, bool to_npu) const {
    RelayoutCost total;
    double hits = 0.0;
    for (const auto& m : w.weights) {
        const RelayoutCost c = relayout_matrix(m.K, m.N, to_npu);
        total.seconds += c.seconds * static_cast<double>(m.count);
        total.traffic_bytes += c.traffic_bytes * m.count;
        hits += c.row_hit_rate * static_cast<double>(c.traffic_bytes * m.count);
    }
    total.row_hit_rate = total.traffic_bytes > 0 ? hits / static_cast<double>(total.traffic_bytes) : 0.0;
    return total;
}

void Simulator::check_capacity(const Workload& w, Variant v) const {
    const DramConfig& d = sys_.dram;
    const std::uint64_t th = d.interleave_granularity_bytes / d.element_size_bytes;
    const std::uint64_t tw = d.total_banks();
    std::uint64_t resident = 0;
    for (const auto& m : w.weights) {
        const std::uint64_t kp = (m.K + th - 1) / th * th;
        const std::uint64_t np = (m.N + tw - 1) / tw * tw;
        resident += kp * np * d.element_size_bytes;
    }
    // One block's weights are resident at a time; the baseline needs room for
    // both its PIM copy and its NPU copy while relayouting.
    const std::uint64_t copies = v == Variant::Baseline ? 2 : 1;
    const std::uint64_t cap = total_capacity_bytes(d);
    if (resident > cap / copies) {
        throw CapacityError("weights of one block need " + std::to_string(resident * copies) +
                            " bytes resident; DRAM capacity is " + std::to_string(cap));
    }
}

SimReport Simulator::run(const Scenario& s) const {
    const ModelSpec model = resolve_model(s.model);
    WorkloadOptions wopts;
    wopts.include_attention = s.include_attention;
    wopts.include_lm_head = s.include_lm_head;
    const DramConfig& d = sys_.dram;
    const Workload w = expand(model, s.prefill_len, s.decode_len, wopts, d.element_size_bytes);
    check_capacity(w, s.variant);

    const NpuSpec& npu_spec = npu();
    const PimSpec pim = sys_.pim();
    const bool baseline = s.variant == Variant::Baseline;

    SimReport r;
    r.variant = std::string(variant_name(s.variant));
    r.model = model.name;
    r.prefill_len = s.prefill_len;
    r.decode_len = s.decode_len;
    r.relayout_policy = std::string(relayout_policy_name(s.relayout));
    r.include_attention = s.include_attention;
    r.weight_footprint_bytes = w.weight_footprint_bytes;
    for (const auto& [k, bw] : npu_spec.achievable_dram_bw) r.calibration_bw[std::string(scheme_name(k))] = bw;

    std::map<std::tuple<std::string, std::string>, OpTime> agg;
    auto account = [&](const std::string& phase, const PhaseOp& op, double seconds, std::uint64_t times) {
        OpTime& t = agg[{phase, op.layer}];
        t.phase = phase;
        t.layer = op.layer;
        t.engine = std::string(engine_name(op.engine));
        t.count += times;
        t.seconds += seconds * static_cast<double>(times);
    };

    // Prefill on the NPU. The baseline NPU reads through the conventional mapping.
    const SchemeKind npu_scheme = baseline ? SchemeKind::Conventional : SchemeKind::Umdam;
    for (const auto& op : w.prefill_ops) {
        const double t = npu_gemm_time(npu_spec, op.M, op.K, op.N, npu_scheme, d.element_size_bytes);
        r.prefill_s += t;
        account("prefill", op, t, 1);
    }

    // Decode on PIM: weight GEMVs over the column-local layout of the variant.
    if (s.decode_len > 0) {
        std::map<std::pair<std::uint64_t, std::uint64_t>, double> gemv_time;
        double step_weights = 0.0;
        for (const auto& op : w.decode_weight_ops) {
            const auto key = std::make_pair(op.K, op.N);
            auto it = gemv_time.find(key);
            if (it == gemv_time.end()) {
                const double t = baseline ? pim_gemv_time(pim, PimOptimizedLayout(d, op.K, op.N, 0))
                                          : pim_gemv_time(pim, plan_layout(d, op.K, op.N, 0));
                it = gemv_time.emplace(key, t).first;
            }
            step_weights += it->second;
            account("decode", op, it->second, s.decode_len);
        }
        r.decode_s += step_weights * static_cast<double>(s.decode_len);

        for (std::uint64_t step = 1; step <= s.decode_len; ++step) {
            for (const auto& op : w.decode_attention_ops(step)) {
                const double t = pim_balanced_gemv_time(pim, op.K, op.N, d.element_size_bytes);
                r.decode_s += t;
                account("decode", op, t, 1);
            }
        }
    }

    if (baseline && s.relayout != RelayoutPolicy::None) {
        const RelayoutCost to_npu = relayout_workload(w, true);
        r.relayout_to_npu_s = to_npu.seconds;
        r.relayout_traffic_bytes = to_npu.traffic_bytes;
        if (s.relayout == RelayoutPolicy::BothTransitions && s.decode_len > 0) {
            r.relayout_to_pim_s = relayout_workload(w, false).seconds;
        }
    }

    r.ttft_s = r.relayout_to_npu_s + r.prefill_s;
    r.ttlt_s = r.ttft_s + r.relayout_to_pim_s + r.decode_s;
    for (auto& [_, t] : agg) r.breakdown.push_back(std::move(t));
    return r;
}

SimReport run(const Scenario& s, const SystemConfig& sys) { return Simulator(sys).run(s); }

// ---------------------------------------------------------------------------
// Sweeps

SweepRow pair_reports(const SimReport& b, const SimReport& u) {
    SweepRow row;
    row.model = b.model;
    row.prefill_len = b.prefill_len;
    row.decode_len = b.decode_len;
    row.relayout_policy = b.relayout_policy;
    row.include_attention = b.include_attention;
    row.baseline_relayout_to_npu_s = b.relayout_to_npu_s;
    row.baseline_prefill_s = b.prefill_s;
    row.baseline_relayout_to_pim_s = b.relayout_to_pim_s;
    row.baseline_decode_s = b.decode_s;
    row.baseline_ttft_s = b.ttft_s;
    row.baseline_ttlt_s = b.ttlt_s;
    row.umdam_prefill_s = u.prefill_s;
    row.umdam_decode_s = u.decode_s;
    row.umdam_ttft_s = u.ttft_s;
    row.umdam_ttlt_s = u.ttlt_s;
    row.ttft_speedup = b.ttft_s / u.ttft_s;
    row.ttlt_speedup = b.ttlt_s / u.ttlt_s;
    return row;
}

std::vector<SweepRow> sweep(const Simulator& sim, const std::vector<std::string>& models,
                            const std::vector<std::uint64_t>& prefill_lens,
                            const std::vector<std::uint64_t>& decode_lens, const SweepOptions& opts) {
    if (models.empty() || prefill_lens.empty() || decode_lens.empty()) {
        throw ArgumentError("sweep needs at least one model, prefill length and decode length");
    }
    std::vector<Scenario> cells;
    for (const auto& m : models) {
        for (const auto p : prefill_lens) {
            for (const auto dl : decode_lens) {
                Scenario s;
                s.model = m;
                s.prefill_len = p;
                s.decode_len = dl;
                s.include_attention = opts.include_attention;
                s.include_lm_head = opts.include_lm_head;
                s.relayout = opts.relayout;
                cells.push_back(s);
            }
        }
    }

    std::vector<SweepRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) {
            try {
                Scenario b = cells[k];
                b.variant = Variant::Baseline;
                Scenario u = cells[k];
                u.variant = Variant::Umdam;
                rows[k] = pair_reports(sim.run(b), sim.run(u));
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
            }
        }
    };
    unsigned n = opts.threads != 0 ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    n = static_cast<unsigned>(std::min<std::size_t>(n, cells.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return rows;
}

FigureGrid figure_grid(int figure, const std::string& model_override) {
    FigureGrid g;
    if (figure == 3) {
        if (model_override.empty()) {
            for (const auto& m : builtin_models()) g.models.push_back(m.name);
        } else {
            g.models.push_back(model_override);
        }
        g.prefill_lens = {128, 256, 512, 1024};
        g.decode_lens = {0};
    } else if (figure == 4) {
        g.models.push_back(model_override.empty() ? "opt-6.7b" : model_override);
        g.prefill_lens = {128, 256, 512, 1024};
        g.decode_lens = {128, 256, 512, 1024, 2048};
    } else {
        throw ArgumentError("unknown figure " + std::to_string(figure) + " (expected 3 or 4)");
    }
    return g;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = {
        "model",
        "prefill_len",
        "decode_len",
        "relayout_policy",
        "include_attention",
        "baseline_relayout_to_npu_s",
        "baseline_prefill_s",
        "baseline_relayout_to_pim_s",
        "baseline_decode_s",
        "baseline_ttft_s",
        "baseline_ttlt_s",
        "umdam_prefill_s",
        "umdam_decode_s",
        "umdam_ttft_s",
        "umdam_ttlt_s",
        "ttft_speedup",
        "ttlt_speedup",
    };
    return cols;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    const auto& cols = csv_columns();
    for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
    os << '\n';
    const auto old_prec = os.precision(12);
    for (const auto& r : rows) {
        os << r.model << ',' << r.prefill_len << ',' << r.decode_len << ',' << r.relayout_policy << ','
           << (r.include_attention ? "true" : "false") << ',' << r.baseline_relayout_to_npu_s << ','
           << r.baseline_prefill_s << ',' << r.baseline_relayout_to_pim_s << ',' << r.baseline_decode_s << ','
           << r.baseline_ttft_s << ',' << r.baseline_ttlt_s << ',' << r.umdam_prefill_s << ','
           << r.umdam_decode_s << ',' << r.umdam_ttft_s << ',' << r.umdam_ttlt_s << ',' << r.ttft_speedup << ','
           << r.ttlt_speedup << '\n';
    }
    os.precision(old_prec);
}

std::vector<SweepRow> read_csv(std::istream& is) {
    std::vector<SweepRow> rows;
    std::string line;
    std::size_t lineno = 0;
    std::map<std::string, std::size_t> index;
    std::size_t width = 0;

    auto fail = [&](const std::string& why) {
        throw ArgumentError("line " + std::to_string(lineno) + ": " + why);
    };

    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        for (auto& f : fields) f = trim(f);
        if (index.empty()) {
            for (std::size_t k = 0; k < fields.size(); ++k) index[fields[k]] = k;
            for (const auto& c : csv_columns()) {
                if (!index.count(c)) fail("missing column '" + c + "'");
            }
            width = fields.size();
            continue;
        }
        if (fields.size() != width) {
            fail("expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()));
        }
        auto text = [&](const std::string& c) -> const std::string& { return fields[index.at(c)]; };
        auto num = [&](const std::string& c) {
            const std::string& s = text(c);
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(s, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != s.size()) fail("bad number '" + s + "' in column '" + c + "'");
            return v;
        };
        auto count = [&](const std::string& c) {
            const double v = num(c);
            if (v < 0 || std::floor(v) != v) fail("column '" + c + "' must be a non-negative integer");
            return static_cast<std::uint64_t>(v);
        };

        SweepRow r;
        r.model = text("model");
        r.prefill_len = count("prefill_len");
        r.decode_len = count("decode_len");
        r.relayout_policy = text("relayout_policy");
        const std::string& att = text("include_attention");
        if (att == "true" || att == "1") {
            r.include_attention = true;
        } else if (att == "false" || att == "0") {
            r.include_attention = false;
        } else {
            fail("bad boolean '" + att + "' in column 'include_attention'");
        }
        r.baseline_relayout_to_npu_s = num("baseline_relayout_to_npu_s");
        r.baseline_prefill_s = num("baseline_prefill_s");
        r.baseline_relayout_to_pim_s = num("baseline_relayout_to_pim_s");
        r.baseline_decode_s = num("baseline_decode_s");
        r.baseline_ttft_s = num("baseline_ttft_s");
        r.baseline_ttlt_s = num("baseline_ttlt_s");
        r.umdam_prefill_s = num("umdam_prefill_s");
        r.umdam_decode_s = num("umdam_decode_s");
        r.umdam_ttft_s = num("umdam_ttft_s");
        r.umdam_ttlt_s = num("umdam_ttlt_s");
        r.ttft_speedup = num("ttft_speedup");
        r.ttlt_speedup = num("ttlt_speedup");
        rows.push_back(std::move(r));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Summaries

ReportSummary summarize(const std::vector<SweepRow>& rows, const ReportBands& bands) {
    ReportSummary s;
    s.rows = rows.size();
    std::ostringstream out;
    out << std::fixed << std::setprecision(3);
    if (rows.empty()) {
        out << "no rows\n";
        s.text = out.str();
        return s;
    }

    s.ttft_min = rows.front().ttft_speedup;
    s.ttft_max = rows.front().ttft_speedup;
    std::map<std::tuple<std::string, std::uint64_t>, std::vector<std::pair<std::uint64_t, std::size_t>>> by_cell;
    std::uint64_t min_p = rows.front().prefill_len;
    std::uint64_t max_d = rows.front().decode_len;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        s.ttft_min = std::min(s.ttft_min, r.ttft_speedup);
        s.ttft_max = std::max(s.ttft_max, r.ttft_speedup);
        if (r.decode_len > 0) s.max_ttlt_speedup = std::max(s.max_ttlt_speedup, r.ttlt_speedup);
        if (r.decode_len == 0) s.ttft_series[r.model][r.prefill_len] = r.ttft_speedup;
        by_cell[{r.model, r.prefill_len}].push_back({r.decode_len, k});
        min_p = std::min(min_p, r.prefill_len);
        max_d = std::max(max_d, r.decode_len);

        if (r.ttlt_speedup < 1.0) {
            s.anomalies.push_back({k, "TTLT speedup " + std::to_string(r.ttlt_speedup) + " is below 1"});
        }
        if (r.ttft_speedup < bands.ttft_min || r.ttft_speedup > bands.ttft_max) {
            std::ostringstream m;
            m << "TTFT speedup " << r.ttft_speedup << " outside [" << bands.ttft_min << ", " << bands.ttft_max
              << "]";
            s.anomalies.push_back({k, m.str()});
        }
    }

    // TTLT speedup must not grow with decode length.
    for (auto& [cell, series] : by_cell) {
        std::sort(series.begin(), series.end());
        for (std::size_t k = 1; k < series.size(); ++k) {
            const auto& prev = rows[series[k - 1].second];
            const auto& cur = rows[series[k].second];
            if (cur.ttlt_speedup > prev.ttlt_speedup * (1.0 + 1e-12)) {
                s.anomalies.push_back({series[k].second, "TTLT speedup increases with decode length"});
            }
        }
    }
    if (max_d > 0) {
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const auto& r = rows[k];
            if (r.prefill_len == min_p && r.decode_len == max_d && r.ttlt_speedup < bands.long_decode_ttlt_min) {
                std::ostringstream m;
                m << "longest-decode TTLT speedup " << r.ttlt_speedup << " below " << bands.long_decode_ttlt_min;
                s.anomalies.push_back({k, m.str()});
            }
        }
    }

    // Cross-model stability at each prefill length.
    std::map<std::uint64_t, std::pair<double, double>> spread;
    for (const auto& [model, series] : s.ttft_series) {
        for (const auto& [p, v] : series) {
            auto [it, fresh] = spread.emplace(p, std::make_pair(v, v));
            if (!fresh) {
                it->second.first = std::min(it->second.first, v);
                it->second.second = std::max(it->second.second, v);
            }
        }
    }

    if (!s.ttft_series.empty()) {
        out << "TTFT speedup (umdam over baseline)\n";
        out << std::left << std::setw(12) << "model";
        for (const auto& [p, _] : spread) out << std::right << std::setw(10) << ("P=" + std::to_string(p));
        out << '\n';
        for (const auto& [model, series] : s.ttft_series) {
            out << std::left << std::setw(12) << model;
            for (const auto& [p, _] : spread) {
                const auto it = series.find(p);
                if (it == series.end()) {
                    out << std::right << std::setw(10) << "-";
                } else {
                    out << std::right << std::setw(10) << it->second;
                }
            }
            out << '\n';
        }
        out << std::left << std::setw(12) << "max/min";
        for (const auto& [p, mm] : spread) {
            const double ratio = mm.second / mm.first;
            out << std::right << std::setw(10) << ratio;
            if (s.ttft_series.size() > 1 && ratio > bands.cross_model_ratio_max) {
                s.anomalies.push_back({0, "cross-model TTFT max/min " + std::to_string(ratio) + " at P=" +
                                              std::to_string(p) + " exceeds " +
                                              std::to_string(bands.cross_model_ratio_max)});
            }
        }
        out << "\n\n";
    }

    if (max_d > 0) {
        out << "TTLT speedup\n";
        out << std::left << std::setw(12) << "model" << std::right << std::setw(8) << "P" << std::setw(8) << "D"
            << std::setw(10) << "P/D" << std::setw(10) << "TTLT x" << '\n';
        for (const auto& r : rows) {
            if (r.decode_len == 0) continue;
            out << std::left << std::setw(12) << r.model << std::right << std::setw(8) << r.prefill_len
                << std::setw(8) << r.decode_len << std::setw(10)
                << static_cast<double>(r.prefill_len) / static_cast<double>(r.decode_len) << std::setw(10)
                << r.ttlt_speedup << '\n';
        }
        out << '\n';
    }

    out << "TTFT speedup range " << s.ttft_min << " - " << s.ttft_max << " (reference " << bands.reference_ttft_low
        << " - " << bands.reference_ttft_high << ")\n";
    if (max_d > 0) {
        out << "max TTLT speedup " << s.max_ttlt_speedup << " (reference " << bands.reference_ttlt_max << ")\n";
    }
    out << s.anomalies.size() << " flagged row(s)\n";
    for (const auto& a : s.anomalies) out << "  row " << a.row << ": " << a.message << '\n';
    s.text = out.str();
    return s;
}

std::vector<std::filesystem::path> write_report_files(const std::vector<SweepRow>& rows,
                                                      const ReportSummary& summary,
                                                      const std::filesystem::path& stem) {
    std::vector<std::filesystem::path> written;
    auto open = [&](const std::string& suffix) {
        std::filesystem::path p = stem;
        p += suffix;
        std::ofstream f(p);
        if (!f) throw ConfigError("cannot write '" + p.string() + "'");
        written.push_back(p);
        return f;
    };

    {
        auto f = open("_ttft.csv");
        f << std::setprecision(12) << "model,prefill_len,ttft_speedup\n";
        for (const auto& [model, series] : summary.ttft_series) {
            for (const auto& [p, v] : series) f << model << ',' << p << ',' << v << '\n';
        }
    }
    {
        auto f = open("_ttlt.csv");
        f << std::setprecision(12) << "model,prefill_len,decode_len,prefill_to_decode_ratio,ttlt_speedup\n";
        for (const auto& r : rows) {
            if (r.decode_len == 0) continue;
            f << r.model << ',' << r.prefill_len << ',' << r.decode_len << ','
              << static_cast<double>(r.prefill_len) / static_cast<double>(r.decode_len) << ',' << r.ttlt_speedup
              << '\n';
        }
    }
    {
        auto f = open("_summary.txt");
        f << summary.text;
    }
    return written;
}

}  // namespace umdam
