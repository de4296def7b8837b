#include "vineprune/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "vineprune/cut_rules.hpp"
#include "vineprune/errors.hpp"

namespace vineprune {

const char* to_string(ConnectionKind kind) {
    switch (kind) {
        case ConnectionKind::MainCordonArm: return "main_cordon_arm";
        case ConnectionKind::MainCordonSpur: return "main_cordon_spur";
        case ConnectionKind::MainCordonCane: return "main_cordon_cane";
        case ConnectionKind::ArmSpur: return "arm_spur";
        case ConnectionKind::ArmCane: return "arm_cane";
        case ConnectionKind::SpurCane: return "spur_cane";
        case ConnectionKind::CaneNode: return "cane_node";
    }
    return "?";
}

namespace {

constexpr double kPi = 3.141592653589793;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view key, std::string_view value) {
    try {
        size_t pos = 0;
        double v = std::stod(std::string(value), &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + std::string(key) + "': not a number: '" +
                          std::string(value) + "'");
    }
}

int parse_int(std::string_view key, std::string_view value) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError("config key '" + std::string(key) + "': not an integer: '" +
                          std::string(value) + "'");
    return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config key '" + std::string(key) + "': not a boolean: '" +
                      std::string(value) + "'");
}

bool parse_connection_key(std::string_view key, std::string_view value, PipelineConfig& config) {
    if (!key.starts_with("conn.")) return false;
    std::string_view rest = key.substr(5);
    const size_t dot = rest.find('.');
    if (dot == std::string_view::npos)
        throw ConfigError("malformed connection key '" + std::string(key) + "'");
    std::string_view pair_name = rest.substr(0, dot);
    std::string_view field = rest.substr(dot + 1);

    ConnectionParams* params = nullptr;
    for (int i = 0; i < kConnectionKindCount; ++i)
        if (pair_name == to_string(ConnectionKind(i))) params = &config.connections[i];
    if (!params)
        throw ConfigError("unknown connection pair '" + std::string(pair_name) + "' in key '" +
                          std::string(key) + "'");

    if (field == "dilation_px")
        params->dilation_px = parse_int(key, value);
    else if (field == "max_iter")
        params->max_iter = parse_int(key, value);
    else if (field == "n_slots")
        params->n_slots = parse_int(key, value);
    else if (field == "include_top")
        params->include_top = parse_bool(key, value);
    else
        throw ConfigError("unknown connection field '" + std::string(field) + "' in key '" +
                          std::string(key) + "'");
    return true;
}

} // namespace

void PipelineConfig::validate() const {
    intrinsics.validate();

    auto check_angle = [](const char* name, double v) {
        if (!(v > 0.0) || v > kPi)
            throw ConfigError(std::string("config key '") + name + "': angle must be in (0, pi]");
    };
    check_angle("alpha_v", alpha_v);
    check_angle("alpha_i", alpha_i);
    check_angle("alpha_d", alpha_d);

    if (!(alpha_l > 0.0)) throw ConfigError("config key 'alpha_l': slope threshold must be > 0");
    if (!(alpha_c > 0.0)) throw ConfigError("config key 'alpha_c': slope threshold must be > 0");
    if (!(vigor_min_m < vigor_max_m))
        throw ConfigError("config: vigor_min_m must be less than vigor_max_m");
    if (!(vigor_min_m > 0.0)) throw ConfigError("config key 'vigor_min_m': must be > 0");
    if (!(adjacency_min_m > 0.0)) throw ConfigError("config key 'adjacency_min_m': must be > 0");
    if (spur_nodes_n < 1) throw ConfigError("config key 'spur_nodes_n': must be >= 1");
    if (!(cut_offset_d_m >= 0.0)) throw ConfigError("config key 'cut_offset_d_m': must be >= 0");
    if (correction_max_radius_px < 0)
        throw ConfigError("config key 'correction_max_radius_px': must be >= 0");
    if (depth_median_window_px < 0)
        throw ConfigError("config key 'depth_median_window_px': must be >= 0");

    for (int i = 0; i < kConnectionKindCount; ++i) {
        const ConnectionParams& p = connections[i];
        const std::string prefix = std::string("conn.") + to_string(ConnectionKind(i));
        if (p.dilation_px < 1) throw ConfigError(prefix + ".dilation_px: must be >= 1");
        if (p.max_iter < 0) throw ConfigError(prefix + ".max_iter: must be >= 0");
        if (p.n_slots < 2) throw ConfigError(prefix + ".n_slots: must be >= 2");
    }

    for (const std::string& rule : cut_rules) parse_cut_rule(rule);  // syntax check
}

PipelineConfig parse_config(std::string_view text) {
    PipelineConfig config;
    std::map<int, std::string> rules;

    size_t line_no = 0;
    std::istringstream stream{std::string(text)};
    std::string raw;
    while (std::getline(stream, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        std::string_view key = trim(line.substr(0, eq));
        std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");

        if (key == "fx")
            config.intrinsics.fx = parse_double(key, value);
        else if (key == "fy")
            config.intrinsics.fy = parse_double(key, value);
        else if (key == "cx")
            config.intrinsics.cx = parse_double(key, value);
        else if (key == "cy")
            config.intrinsics.cy = parse_double(key, value);
        else if (key == "depth_scale")
            config.intrinsics.depth_scale = parse_double(key, value);
        else if (key == "alpha_v")
            config.alpha_v = parse_double(key, value);
        else if (key == "alpha_i")
            config.alpha_i = parse_double(key, value);
        else if (key == "alpha_d")
            config.alpha_d = parse_double(key, value);
        else if (key == "alpha_l")
            config.alpha_l = parse_double(key, value);
        else if (key == "alpha_c")
            config.alpha_c = parse_double(key, value);
        else if (key == "vigor_min_m")
            config.vigor_min_m = parse_double(key, value);
        else if (key == "vigor_max_m")
            config.vigor_max_m = parse_double(key, value);
        else if (key == "adjacency_min_m")
            config.adjacency_min_m = parse_double(key, value);
        else if (key == "adjacency_metric") {
            if (value == "max")
                config.adjacency_metric = AdjacencyMetric::Max;
            else if (value == "min")
                config.adjacency_metric = AdjacencyMetric::Min;
            else
                throw ConfigError("config key 'adjacency_metric': expected max or min");
        } else if (key == "spur_nodes_n")
            config.spur_nodes_n = parse_int(key, value);
        else if (key == "cut_offset_d_m")
            config.cut_offset_d_m = parse_double(key, value);
        else if (key == "correction_max_radius_px")
            config.correction_max_radius_px = parse_int(key, value);
        else if (key == "depth_median_window_px")
            config.depth_median_window_px = parse_int(key, value);
        else if (key == "root_origin_side") {
            if (value == "left")
                config.root_origin_side = RootOriginSide::Left;
            else if (value == "right")
                config.root_origin_side = RootOriginSide::Right;
            else
                throw ConfigError("config key 'root_origin_side': expected left or right");
        } else if (key == "pass_order") {
            if (value == "cordon_first")
                config.pass_order = PassOrder::CordonFirst;
            else if (value == "specific_first")
                config.pass_order = PassOrder::SpecificFirst;
            else
                throw ConfigError("config key 'pass_order': expected cordon_first or specific_first");
        } else if (key.starts_with("cut_rule_")) {
            int index = parse_int(key, key.substr(9));
            if (index < 1) throw ConfigError("cut rule indices start at 1");
            if (!rules.emplace(index, std::string(value)).second)
                throw ConfigError("duplicate config key '" + std::string(key) + "'");
        } else if (!parse_connection_key(key, value, config)) {
            throw ConfigError("unknown config key '" + std::string(key) + "'");
        }
    }

    int expected = 1;
    for (const auto& [index, rule] : rules) {
        if (index != expected)
            throw ConfigError("cut rules must be numbered contiguously from 1; missing cut_rule_" +
                              std::to_string(expected));
        config.cut_rules.push_back(rule);
        ++expected;
    }

    config.validate();
    return config;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string canonical_config(const PipelineConfig& config) {
    std::ostringstream out;
    out.precision(17);
    out << "fx=" << config.intrinsics.fx << "\nfy=" << config.intrinsics.fy
        << "\ncx=" << config.intrinsics.cx << "\ncy=" << config.intrinsics.cy
        << "\ndepth_scale=" << config.intrinsics.depth_scale << "\nalpha_v=" << config.alpha_v
        << "\nalpha_i=" << config.alpha_i << "\nalpha_d=" << config.alpha_d
        << "\nalpha_l=" << config.alpha_l << "\nalpha_c=" << config.alpha_c
        << "\nvigor_min_m=" << config.vigor_min_m << "\nvigor_max_m=" << config.vigor_max_m
        << "\nadjacency_min_m=" << config.adjacency_min_m
        << "\nadjacency_metric=" << (config.adjacency_metric == AdjacencyMetric::Max ? "max" : "min")
        << "\nspur_nodes_n=" << config.spur_nodes_n
        << "\ncut_offset_d_m=" << config.cut_offset_d_m
        << "\ncorrection_max_radius_px=" << config.correction_max_radius_px
        << "\ndepth_median_window_px=" << config.depth_median_window_px
        << "\nroot_origin_side="
        << (config.root_origin_side == RootOriginSide::Left ? "left" : "right") << "\npass_order="
        << (config.pass_order == PassOrder::CordonFirst ? "cordon_first" : "specific_first");
    for (int i = 0; i < kConnectionKindCount; ++i) {
        const ConnectionParams& p = config.connections[i];
        const char* name = to_string(ConnectionKind(i));
        out << "\nconn." << name << ".dilation_px=" << p.dilation_px << "\nconn." << name
            << ".max_iter=" << p.max_iter << "\nconn." << name << ".n_slots=" << p.n_slots
            << "\nconn." << name << ".include_top=" << (p.include_top ? "true" : "false");
    }
    for (size_t i = 0; i < config.cut_rules.size(); ++i)
        out << "\ncut_rule_" << (i + 1) << "=" << config.cut_rules[i];
    out << "\n";
    return out.str();
}

uint64_t config_hash(const PipelineConfig& config) {
    // FNV-1a over the canonical rendering.
    const std::string text = canonical_config(config);
    uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

} // namespace vineprune
