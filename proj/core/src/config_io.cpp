#include "umdam/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "umdam/errors.hpp"

namespace umdam {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
    for (const auto& [key, _] : obj.items()) {
        if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read_uint(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned()) {
        throw ConfigError(where + "." + key + ": expected a non-negative integer");
    }
    out = static_cast<T>(v.get<std::uint64_t>());
}

void read_double(const json& obj, const char* key, double& out, const std::string& where) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    out = v.get<double>();
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(std::string_view text, const std::string& what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

}  // namespace

SystemConfig parse_system_config(std::string_view json_text) {
    const json doc = parse_json(json_text, "DRAM config");
    const std::string where = "config";
    reject_unknown(doc,
                   {"channels", "ranks_per_channel", "banks_per_rank", "row_size_bytes", "burst_size_bytes",
                    "interleave_granularity_bytes", "rows_per_bank", "element_size_bytes",
                    "peak_external_bw_bytes_per_s", "pim_internal_bw_bytes_per_s", "timing", "npu", "pim"},
                   where);

    SystemConfig sys;
    DramConfig& d = sys.dram;
    read_uint(doc, "channels", d.channels, where);
    read_uint(doc, "ranks_per_channel", d.ranks_per_channel, where);
    read_uint(doc, "banks_per_rank", d.banks_per_rank, where);
    read_uint(doc, "row_size_bytes", d.row_size_bytes, where);
    read_uint(doc, "burst_size_bytes", d.burst_size_bytes, where);
    read_uint(doc, "interleave_granularity_bytes", d.interleave_granularity_bytes, where);
    read_uint(doc, "rows_per_bank", d.rows_per_bank, where);
    read_uint(doc, "element_size_bytes", d.element_size_bytes, where);
    read_double(doc, "peak_external_bw_bytes_per_s", d.peak_external_bw_bytes_per_s, where);
    read_double(doc, "pim_internal_bw_bytes_per_s", d.pim_internal_bw_bytes_per_s, where);

    if (doc.contains("timing")) {
        const auto& t = doc.at("timing");
        const std::string tw = where + ".timing";
        reject_unknown(t, {"t_ck_ns", "n_bl", "n_cl", "n_ccd", "n_rc", "n_wr", "n_ras", "n_rp_pb", "n_rcd"}, tw);
        read_double(t, "t_ck_ns", d.timing.t_ck_ns, tw);
        read_uint(t, "n_bl", d.timing.n_bl, tw);
        read_uint(t, "n_cl", d.timing.n_cl, tw);
        read_uint(t, "n_ccd", d.timing.n_ccd, tw);
        read_uint(t, "n_rc", d.timing.n_rc, tw);
        read_uint(t, "n_wr", d.timing.n_wr, tw);
        read_uint(t, "n_ras", d.timing.n_ras, tw);
        read_uint(t, "n_rp_pb", d.timing.n_rp_pb, tw);
        read_uint(t, "n_rcd", d.timing.n_rcd, tw);
    }
    if (doc.contains("npu")) {
        const auto& n = doc.at("npu");
        const std::string nw = where + ".npu";
        reject_unknown(n, {"peak_flops", "onchip_buffer_bytes", "l1_bytes"}, nw);
        read_double(n, "peak_flops", sys.npu.peak_flops, nw);
        read_uint(n, "onchip_buffer_bytes", sys.npu.onchip_buffer_bytes, nw);
        read_uint(n, "l1_bytes", sys.npu.l1_bytes, nw);
        if (!(sys.npu.peak_flops > 0)) throw ConfigError(nw + ".peak_flops must be positive");
    }
    if (doc.contains("pim")) {
        const auto& p = doc.at("pim");
        const std::string pw = where + ".pim";
        reject_unknown(p, {"peak_flops"}, pw);
        read_double(p, "peak_flops", sys.pim_peak_flops, pw);
        if (!(sys.pim_peak_flops > 0)) throw ConfigError(pw + ".peak_flops must be positive");
    }

    validate(d);
    return sys;
}

SystemConfig load_system_config(const std::filesystem::path& path) { return parse_system_config(slurp(path)); }

std::string to_json(const SystemConfig& sys) {
    const DramConfig& d = sys.dram;
    json doc = {
        {"channels", d.channels},
        {"ranks_per_channel", d.ranks_per_channel},
        {"banks_per_rank", d.banks_per_rank},
        {"row_size_bytes", d.row_size_bytes},
        {"burst_size_bytes", d.burst_size_bytes},
        {"interleave_granularity_bytes", d.interleave_granularity_bytes},
        {"rows_per_bank", d.rows_per_bank},
        {"element_size_bytes", d.element_size_bytes},
        {"peak_external_bw_bytes_per_s", d.peak_external_bw_bytes_per_s},
        {"pim_internal_bw_bytes_per_s", d.pim_internal_bw_bytes_per_s},
        {"timing",
         {{"t_ck_ns", d.timing.t_ck_ns},
          {"n_bl", d.timing.n_bl},
          {"n_cl", d.timing.n_cl},
          {"n_ccd", d.timing.n_ccd},
          {"n_rc", d.timing.n_rc},
          {"n_wr", d.timing.n_wr},
          {"n_ras", d.timing.n_ras},
          {"n_rp_pb", d.timing.n_rp_pb},
          {"n_rcd", d.timing.n_rcd}}},
        {"npu",
         {{"peak_flops", sys.npu.peak_flops},
          {"onchip_buffer_bytes", sys.npu.onchip_buffer_bytes},
          {"l1_bytes", sys.npu.l1_bytes}}},
        {"pim", {{"peak_flops", sys.pim_peak_flops}}},
    };
    return doc.dump(2);
}

ModelSpec parse_model(std::string_view json_text) {
    const json doc = parse_json(json_text, "model");
    reject_unknown(doc, {"name", "embedding_dim", "head_dim", "num_heads", "num_blocks"}, "model");
    ModelSpec m;
    if (doc.contains("name")) {
        if (!doc.at("name").is_string()) throw ConfigError("model.name: expected a string");
        m.name = doc.at("name").get<std::string>();
    }
    for (const char* key : {"embedding_dim", "head_dim", "num_heads", "num_blocks"}) {
        if (!doc.contains(key)) throw ConfigError(std::string("model: missing '") + key + "'");
    }
    read_uint(doc, "embedding_dim", m.embedding_dim, "model");
    read_uint(doc, "head_dim", m.head_dim, "model");
    read_uint(doc, "num_heads", m.num_heads, "model");
    read_uint(doc, "num_blocks", m.num_blocks, "model");
    validate(m);
    return m;
}

ModelSpec load_model(const std::filesystem::path& path) {
    ModelSpec m = parse_model(slurp(path));
    if (m.name.empty()) m.name = path.stem().string();
    return m;
}

ModelSpec resolve_model(std::string_view name_or_path) {
    for (const auto& m : builtin_models()) {
        if (m.name == name_or_path) return m;
    }
    const std::filesystem::path p{std::string(name_or_path)};
    if (std::filesystem::exists(p)) return load_model(p);
    return find_model(name_or_path);  // throws with the list of known names
}

}  // namespace umdam
