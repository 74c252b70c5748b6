#include "tlisim/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace tlisim {

double SimConfig::grid_peak() const { return v_grid_rms * std::sqrt(2.0); }

double SimConfig::nominal_id_ref() const {
    return 2.0 * p_out_nominal / grid_peak();
}

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double parsed = 0.0;
    try {
        parsed = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse number '" +
                          value + "'");
    }
    while (used < value.size() && std::isspace(static_cast<unsigned char>(value[used]))) {
        ++used;
    }
    if (used != value.size()) {
        throw ConfigError("config key '" + key + "': trailing text in '" +
                          value + "'");
    }
    return parsed;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" +
                      value + "'");
}

using Setter = std::function<void(SimConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto add_double = [&t](const std::string& key, double SimConfig::* member) {
            t[key] = [key, member](SimConfig& cfg, const std::string& value) {
                cfg.*member = parse_double(key, value);
            };
        };
        add_double("v_grid_rms", &SimConfig::v_grid_rms);
        add_double("grid_freq", &SimConfig::grid_freq);
        add_double("v_dc_ref", &SimConfig::v_dc_ref);
        add_double("c_in", &SimConfig::c_in);
        add_double("l_a", &SimConfig::l_a);
        add_double("l_b", &SimConfig::l_b);
        add_double("c_pv", &SimConfig::c_pv);
        add_double("r_s", &SimConfig::r_s);
        add_double("r_g", &SimConfig::r_g);
        add_double("filter_shunt_c", &SimConfig::filter_shunt_c);
        add_double("p_out_nominal", &SimConfig::p_out_nominal);
        add_double("v_oc", &SimConfig::v_oc);
        add_double("pv_exponent", &SimConfig::pv_exponent);
        add_double("f_mppt", &SimConfig::f_mppt);
        add_double("mppt_rate", &SimConfig::mppt_rate);
        add_double("mppt_step_v", &SimConfig::mppt_step_v);
        add_double("hbcc_band", &SimConfig::hbcc_band);
        add_double("dt", &SimConfig::dt);
        add_double("duration", &SimConfig::duration);
        add_double("metrics_blanking", &SimConfig::metrics_blanking);
        t["pi_kp"] = [](SimConfig& cfg, const std::string& value) {
            cfg.pi.kp = parse_double("pi_kp", value);
        };
        t["pi_ki"] = [](SimConfig& cfg, const std::string& value) {
            cfg.pi.ki = parse_double("pi_ki", value);
        };
        t["pi_windup_limit"] = [](SimConfig& cfg, const std::string& value) {
            cfg.pi.windup_limit = parse_double("pi_windup_limit", value);
        };
        t["ideal_dc_source"] = [](SimConfig& cfg, const std::string& value) {
            cfg.ideal_dc_source = parse_bool("ideal_dc_source", value);
        };
        t["topology"] = [](SimConfig& cfg, const std::string& value) {
            auto kind = topology_from_string(value);
            if (!kind) {
                throw ConfigError("config key 'topology': unknown topology '" +
                                  value + "'");
            }
            cfg.topology = *kind;
        };
        return t;
    }();
    return table;
}

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

}  // namespace

void apply_config_entry(SimConfig& cfg, const std::string& key,
                        const std::string& value) {
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) {
        throw ConfigError("unknown config key '" + key + "'");
    }
    it->second(cfg, value);
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    SimConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        const std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(trimmed.substr(0, eq));
        const std::string value = trim(trimmed.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": empty key or value");
        }
        try {
            apply_config_entry(cfg, key, value);
        } catch (const ConfigError& err) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": " + err.what());
        }
    }
    validate(cfg);
    return cfg;
}

void validate(const SimConfig& cfg, bool metric_run) {
    require(cfg.v_grid_rms >= 0.0, "v_grid_rms must be >= 0");
    require(cfg.grid_freq > 0.0, "grid_freq must be positive");
    require(cfg.v_dc_ref > 0.0, "v_dc_ref must be positive");
    require(cfg.c_in > 0.0, "c_in must be positive");
    require(cfg.l_a > 0.0, "l_a must be positive");
    require(cfg.l_b > 0.0, "l_b must be positive");
    require(cfg.c_pv > 0.0, "c_pv must be positive");
    require(cfg.r_s >= 0.0, "r_s must be >= 0");
    require(cfg.r_g >= 0.0, "r_g must be >= 0");
    require(cfg.filter_shunt_c >= 0.0, "filter_shunt_c must be >= 0");
    require(cfg.p_out_nominal > 0.0, "p_out_nominal must be positive");
    require(cfg.v_oc > 0.0, "v_oc must be positive");
    require(cfg.pv_exponent > 1.0, "pv_exponent must exceed 1");
    require(cfg.f_mppt > 0.0, "f_mppt must be positive");
    require(cfg.mppt_rate > 0.0, "mppt_rate must be positive");
    require(cfg.mppt_rate <= cfg.f_mppt,
            "mppt_rate must not exceed the boost carrier f_mppt");
    require(cfg.mppt_step_v > 0.0, "mppt_step_v must be positive");
    require(cfg.hbcc_band > 0.0, "hbcc_band must be positive");
    require(cfg.pi.kp >= 0.0, "pi_kp must be >= 0");
    require(cfg.pi.ki >= 0.0, "pi_ki must be >= 0");
    require(cfg.pi.windup_limit > 0.0, "pi_windup_limit must be positive");
    require(cfg.dt > 0.0, "dt must be positive");
    require(cfg.dt <= 2e-6,
            "dt must be <= 2e-6 s (stability bound for the stiff "
            "common-mode loop)");
    require(cfg.duration > 0.0, "duration must be positive");
    require(cfg.metrics_blanking >= 0.0, "metrics_blanking must be >= 0");
    if (metric_run) {
        require(cfg.duration >= 10.0 / cfg.grid_freq,
                "duration must cover at least 10 grid periods for metric runs");
    }
}

}  // namespace tlisim
