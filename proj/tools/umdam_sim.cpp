// umdam-sim: address mapping, layout planning, DRAM timing and end-to-end
// NPU-PIM latency experiments from the command line.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "umdam/config_io.hpp"
#include "umdam/errors.hpp"
#include "umdam/experiment.hpp"
#include "umdam/layout.hpp"
#include "umdam/mapping.hpp"
#include "umdam/timing.hpp"

using namespace umdam;

namespace {

SystemConfig system_from(const std::string& path) {
    return path.empty() ? SystemConfig{} : load_system_config(path);
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(text, &used, 0);  // accepts 0x... and decimal
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || text.front() == '-') {
        throw ArgumentError(what + ": '" + text + "' is not a non-negative integer");
    }
    return v;
}

// "row=1,col_m=0,bank=3,channel=2"; unspecified fields are zero.
DramCoord parse_coord(const std::string& text) {
    DramCoord c;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ArgumentError("coordinate item '" + item + "' is not name=value");
        const std::string name = item.substr(0, eq);
        const std::uint64_t v = parse_u64(item.substr(eq + 1), name);
        bool found = false;
        for (Field f : kAllFields) {
            if (field_name(f) == name) {
                c.set(f, v);
                found = true;
            }
        }
        if (!found) throw ArgumentError("unknown coordinate field '" + name + "'");
    }
    return c;
}

void print_coord_row(std::ostream& os, std::uint64_t addr, const DramCoord& c) {
    os << std::setw(12) << addr << std::setw(8) << c.row << std::setw(7) << c.col_m << std::setw(6) << c.bank
       << std::setw(6) << c.rank << std::setw(8) << c.channel << std::setw(7) << c.col_l << std::setw(8) << c.offset
       << '\n';
}

std::ostream& output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw ConfigError("cannot write '" + path + "'");
    return file;
}

void print_report_text(std::ostream& os, const SimReport& r) {
    os << std::fixed << std::setprecision(6);
    os << r.variant << "  " << r.model << "  P=" << r.prefill_len << "  D=" << r.decode_len
       << "  relayout=" << r.relayout_policy << (r.include_attention ? "" : "  (no attention)") << '\n';
    const std::pair<const char*, double> lines[] = {
        {"relayout to NPU", r.relayout_to_npu_s}, {"prefill", r.prefill_s}, {"relayout to PIM", r.relayout_to_pim_s},
        {"decode", r.decode_s},                   {"TTFT", r.ttft_s},       {"TTLT", r.ttlt_s},
    };
    for (const auto& [name, v] : lines) os << "  " << std::left << std::setw(18) << name << std::right << v << " s\n";
    if (r.ttft_speedup) os << "  TTFT speedup      " << std::setprecision(3) << *r.ttft_speedup << "x\n";
    if (r.ttlt_speedup) os << "  TTLT speedup      " << std::setprecision(3) << *r.ttlt_speedup << "x\n";
    os.unsetf(std::ios::floatfield);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UMDAM NPU-PIM memory layout and latency simulator"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "System config JSON (defaults to the built-in LPDDR5 package)")
        ->check(CLI::ExistingFile);

    // map
    auto* map_cmd = app.add_subcommand("map", "Translate between linear addresses and DRAM coordinates");
    std::string map_scheme = "umdam";
    std::string map_addr;
    std::string map_coord;
    std::uint64_t map_table = 0;
    map_cmd->add_option("--scheme", map_scheme, "umdam, conventional or pim_opt");
    auto* addr_opt = map_cmd->add_option("address", map_addr, "Linear address (decimal or 0x hex)");
    auto* coord_opt = map_cmd->add_option("--coord", map_coord, "Coordinate, e.g. row=1,bank=2,channel=3");
    auto* table_opt = map_cmd->add_option("--table", map_table, "Print the first N burst addresses");
    addr_opt->excludes(coord_opt)->excludes(table_opt);
    coord_opt->excludes(table_opt);

    // layout
    auto* layout_cmd = app.add_subcommand("layout", "Plan a K x N weight matrix and summarize it");
    std::uint64_t lay_k = 0;
    std::uint64_t lay_n = 0;
    std::string lay_base = "0";
    std::string lay_kind = "umdam";
    std::string lay_csv;
    bool lay_verify = false;
    layout_cmd->add_option("K", lay_k, "Reduction (input) dimension")->required();
    layout_cmd->add_option("N", lay_n, "Output columns")->required();
    layout_cmd->add_option("--base", lay_base, "Physical base address (tile aligned)");
    layout_cmd->add_option("--kind", lay_kind, "umdam, npu_tiled or pim_opt")
        ->check(CLI::IsMember({"umdam", "npu_tiled", "pim_opt"}));
    layout_cmd->add_option("--csv", lay_csv, "Write the per-element address map (small matrices only)");
    layout_cmd->add_flag("--verify", lay_verify, "Check column locality, collisions and tile contiguity");

    // bench-bandwidth
    auto* bench_cmd = app.add_subcommand("bench-bandwidth", "Sequential-read bandwidth per mapping scheme");
    std::vector<std::string> bench_schemes = {"umdam", "conventional", "pim_opt"};
    std::vector<std::uint64_t> bench_sizes = {std::uint64_t{64} << 10, std::uint64_t{1} << 20,
                                              std::uint64_t{8} << 20};
    std::string bench_out;
    bench_cmd->add_option("--schemes", bench_schemes, "Schemes to measure");
    bench_cmd->add_option("--sizes", bench_sizes, "Stream sizes in bytes");
    bench_cmd->add_option("--out", bench_out, "CSV output (stdout by default)");

    // run
    auto* run_cmd = app.add_subcommand("run", "Simulate one inference request");
    Scenario sc;
    std::string run_variant = "umdam";
    std::string run_relayout = "both";
    std::string run_out;
    bool no_attention = false;
    bool run_compare = false;
    run_cmd->add_option("--variant", run_variant, "baseline or umdam")
        ->check(CLI::IsMember({"baseline", "umdam"}));
    run_cmd->add_option("--model", sc.model, "Built-in model name or model JSON path");
    run_cmd->add_option("--prefill", sc.prefill_len, "Prompt length");
    run_cmd->add_option("--decode", sc.decode_len, "Generated tokens");
    run_cmd->add_flag("--no-attention", no_attention, "Exclude attention GEMVs from decode");
    run_cmd->add_flag("--include-lm-head", sc.include_lm_head, "Add the d x vocab LM head");
    run_cmd->add_option("--relayout", run_relayout, "both, prefill-only or none")
        ->check(CLI::IsMember({"both", "both-transitions", "prefill-only", "none"}));
    run_cmd->add_flag("--compare", run_compare, "Also run the other variant and fill in speedups");
    run_cmd->add_option("--out", run_out, "JSON report path");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Baseline vs UMDAM over a (model, P, D) grid");
    int sweep_figure = 0;
    std::vector<std::string> sweep_models;
    std::vector<std::uint64_t> sweep_p;
    std::vector<std::uint64_t> sweep_d;
    std::string sweep_out;
    std::string sweep_relayout = "both";
    bool sweep_no_attention = false;
    bool sweep_lm_head = false;
    unsigned sweep_threads = 0;
    auto* fig_opt = sweep_cmd->add_option("--figure", sweep_figure, "Preset grid: 3 (TTFT) or 4 (TTLT)")
                        ->check(CLI::IsMember({3, 4}));
    sweep_cmd->add_option("--models", sweep_models, "Models (overrides the preset's model set)");
    sweep_cmd->add_option("--prefill", sweep_p, "Prefill lengths")->excludes(fig_opt);
    sweep_cmd->add_option("--decode", sweep_d, "Decode lengths")->excludes(fig_opt);
    sweep_cmd->add_option("--out", sweep_out, "CSV output (stdout by default)");
    sweep_cmd->add_option("--relayout", sweep_relayout, "both, prefill-only or none")
        ->check(CLI::IsMember({"both", "both-transitions", "prefill-only", "none"}));
    sweep_cmd->add_flag("--no-attention", sweep_no_attention, "Exclude attention GEMVs from decode");
    sweep_cmd->add_flag("--include-lm-head", sweep_lm_head, "Add the d x vocab LM head");
    sweep_cmd->add_option("--threads", sweep_threads, "Worker threads (0: all cores)");

    // report
    auto* report_cmd = app.add_subcommand("report", "Summarize a sweep CSV and write plot data");
    std::string report_csv;
    std::string report_prefix;
    report_cmd->add_option("csv", report_csv, "Sweep CSV")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--prefix", report_prefix, "Output path stem (defaults to the CSV path sans extension)");

    CLI11_PARSE(app, argc, argv);

    try {
        const SystemConfig sys = system_from(config_path);
        const DramConfig& cfg = sys.dram;

        if (*map_cmd) {
            const AddressMapper mapper(MappingScheme::of(parse_scheme(map_scheme)), cfg);
            if (*coord_opt) {
                const std::uint64_t addr = mapper.decode(parse_coord(map_coord));
                std::cout << addr << " (0x" << std::hex << addr << std::dec << ")\n";
            } else if (*addr_opt) {
                std::cout << mapper.encode(parse_u64(map_addr, "address")) << '\n';
            } else {
                const std::uint64_t rows = map_table ? map_table : 16;
                std::cout << std::setw(12) << "addr" << std::setw(8) << "row" << std::setw(7) << "col_M"
                          << std::setw(6) << "bank" << std::setw(6) << "rank" << std::setw(8) << "channel"
                          << std::setw(7) << "col_L" << std::setw(8) << "offset" << '\n';
                for (std::uint64_t k = 0; k < rows; ++k) {
                    const std::uint64_t addr = k * cfg.burst_size_bytes;
                    print_coord_row(std::cout, addr, mapper.encode(addr));
                }
            }
            return 0;
        }

        if (*layout_cmd) {
            const std::uint64_t base = parse_u64(lay_base, "--base");
            std::unique_ptr<MatrixLayout> layout;
            const LayoutPlan* plan = nullptr;
            if (lay_kind == "pim_opt") {
                layout = std::make_unique<PimOptimizedLayout>(cfg, lay_k, lay_n, base);
            } else {
                auto p = std::make_unique<LayoutPlan>(
                    cfg, lay_k, lay_n, base, lay_kind == "umdam" ? SchemeKind::Umdam : SchemeKind::Conventional);
                plan = p.get();
                layout = std::move(p);
            }
            nlohmann::ordered_json doc;
            doc["kind"] = layout->kind();
            doc["K"] = layout->rows();
            doc["N"] = layout->cols();
            doc["padded_K"] = layout->padded_rows();
            doc["padded_N"] = layout->padded_cols();
            doc["footprint_bytes"] = layout->footprint_bytes();
            doc["base"] = base;
            doc["column_local"] = layout->column_local();
            if (plan) {
                const auto& g = plan->geometry();
                doc["tile"] = {{"height", g.tile_height_elems},
                               {"width", g.tile_width_elems},
                               {"tile_rows", g.num_tile_rows},
                               {"tile_cols", g.num_tile_cols},
                               {"bytes", plan->tile_bytes()}};
            }
            if (layout->column_local()) {
                auto homes = nlohmann::ordered_json::array();
                const std::uint64_t shown = std::min<std::uint64_t>(layout->cols(), 8);
                for (std::uint64_t j = 0; j < shown; ++j) {
                    const ColumnHome h = layout->column_home(j);
                    homes.push_back({{"column", j}, {"channel", h.channel}, {"rank", h.rank}, {"bank", h.bank}});
                }
                doc["first_column_homes"] = homes;
            }
            int rc = 0;
            if (lay_verify) {
                if (!plan) throw ArgumentError("--verify applies to tiled layouts (umdam, npu_tiled)");
                const PlanReport rep = verify_plan(*plan);
                doc["verify"] = {{"ok", rep.ok()},
                                 {"exhaustive", rep.exhaustive},
                                 {"elements_checked", rep.elements_checked},
                                 {"columns_checked", rep.columns_checked},
                                 {"locality_violations", rep.locality_violations},
                                 {"collisions", rep.collisions},
                                 {"tiles_checked", rep.tiles_checked},
                                 {"noncontiguous_tiles", rep.noncontiguous_tiles},
                                 {"channel_rotation_violations", rep.channel_rotation_violations}};
                if (!rep.ok()) rc = 3;
            }
            if (!lay_csv.empty()) {
                constexpr std::uint64_t kCsvLimit = std::uint64_t{1} << 20;
                if (layout->rows() * layout->cols() > kCsvLimit) {
                    throw ArgumentError("--csv is limited to " + std::to_string(kCsvLimit) + " elements");
                }
                std::ofstream f;
                std::ostream& os = output(lay_csv, f);
                os << "i,j,linear_addr,row,col_M,bank,rank,channel,col_L,offset\n";
                for (std::uint64_t j = 0; j < layout->cols(); ++j) {
                    for (std::uint64_t i = 0; i < layout->rows(); ++i) {
                        const std::uint64_t a = layout->element_linear(i, j);
                        const DramCoord c = plan ? plan->element_address(i, j) : layout->element_coord(i, j);
                        os << i << ',' << j << ',' << a << ',' << c.row << ',' << c.col_m << ',' << c.bank << ','
                           << c.rank << ',' << c.channel << ',' << c.col_l << ',' << c.offset << '\n';
                    }
                }
            }
            if (lay_csv != "-") std::cout << doc.dump(2) << '\n';
            return rc;
        }

        if (*bench_cmd) {
            std::ofstream f;
            std::ostream& os = output(bench_out, f);
            os << "scheme,bytes,cycles,effective_GBps,row_hit_rate\n";
            for (const auto& s : bench_schemes) {
                const MappingScheme scheme = MappingScheme::of(parse_scheme(s));
                for (const auto bytes : bench_sizes) {
                    const ReplayResult r = replay_npu_stream(cfg, scheme, 0, bytes);
                    os << scheme.name() << ',' << r.total_bytes << ',' << r.total_cycles << ','
                       << r.effective_bw_bytes_per_s / 1e9 << ',' << r.row_hit_rate << '\n';
                }
            }
            return 0;
        }

        if (*run_cmd) {
            sc.variant = parse_variant(run_variant);
            sc.relayout = parse_relayout_policy(run_relayout);
            sc.include_attention = !no_attention;
            const Simulator sim(sys);
            SimReport r = sim.run(sc);
            if (run_compare) {
                Scenario other = sc;
                other.variant = sc.variant == Variant::Baseline ? Variant::Umdam : Variant::Baseline;
                const SimReport o = sim.run(other);
                const SimReport& b = sc.variant == Variant::Baseline ? r : o;
                const SimReport& u = sc.variant == Variant::Baseline ? o : r;
                const SweepRow row = pair_reports(b, u);
                r.ttft_speedup = row.ttft_speedup;
                r.ttlt_speedup = row.ttlt_speedup;
            }
            if (run_out.empty()) {
                std::cout << to_json(r) << '\n';
            } else {
                std::ofstream f;
                output(run_out, f) << to_json(r) << '\n';
                print_report_text(std::cout, r);
            }
            return 0;
        }

        if (*sweep_cmd) {
            FigureGrid grid;
            if (sweep_figure != 0) {
                grid = figure_grid(sweep_figure);
                if (!sweep_models.empty()) grid.models = sweep_models;
            } else {
                grid.models = sweep_models.empty() ? std::vector<std::string>{"opt-6.7b"} : sweep_models;
                grid.prefill_lens = sweep_p.empty() ? std::vector<std::uint64_t>{512} : sweep_p;
                grid.decode_lens = sweep_d.empty() ? std::vector<std::uint64_t>{0} : sweep_d;
            }
            SweepOptions opts;
            opts.include_attention = !sweep_no_attention;
            opts.include_lm_head = sweep_lm_head;
            opts.relayout = parse_relayout_policy(sweep_relayout);
            opts.threads = sweep_threads;
            const Simulator sim(sys);
            const auto rows = sweep(sim, grid.models, grid.prefill_lens, grid.decode_lens, opts);
            std::ofstream f;
            write_csv(output(sweep_out, f), rows);
            if (!sweep_out.empty() && sweep_out != "-") std::cout << summarize(rows).text;
            return 0;
        }

        if (*report_cmd) {
            std::ifstream in(report_csv);
            if (!in) throw ConfigError("cannot open '" + report_csv + "'");
            const auto rows = read_csv(in);
            const ReportSummary summary = summarize(rows);
            std::cout << summary.text;
            std::filesystem::path stem = report_prefix;
            if (stem.empty()) stem = std::filesystem::path(report_csv).replace_extension();
            if (!rows.empty()) {
                for (const auto& p : write_report_files(rows, summary, stem)) std::cout << "wrote " << p.string() << '\n';
            }
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
