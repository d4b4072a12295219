#include "boseloc/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace boseloc {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

Config Config::from_text(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t cut = line.find_first_of("#;");
        if (cut != std::string::npos) line = line.substr(0, cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        cfg.values_[key] = value;
    }
    return cfg;
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string Config::require(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
}

double parse_double(const std::string& text, const std::string& key) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ConfigError("empty numeric value for " + key);
    // allow pi expressions: pi, -pi/4, 0.5*pi, 2pi, pi/2 ...
    const std::size_t pp = s.find("pi");
    double value;
    char* end = nullptr;
    if (pp != std::string::npos) {
        double factor = 1.0;
        const std::string pre = s.substr(0, pp);
        if (pre == "-") factor = -1.0;
        else if (!pre.empty() && pre != "+") {
            std::string num = pre;
            if (num.back() == '*') num.pop_back();
            factor = std::strtod(num.c_str(), &end);
            if (end == num.c_str() || *end != '\0')
                throw ConfigError("bad numeric value for " + key + ": " + text);
        }
        double denom = 1.0;
        const std::string post = s.substr(pp + 2);
        if (!post.empty()) {
            if (post.front() != '/')
                throw ConfigError("bad numeric value for " + key + ": " + text);
            const std::string num = post.substr(1);
            denom = std::strtod(num.c_str(), &end);
            if (end == num.c_str() || *end != '\0' || denom == 0.0)
                throw ConfigError("bad numeric value for " + key + ": " + text);
        }
        value = factor * std::numbers::pi / denom;
    } else {
        value = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0')
            throw ConfigError("bad numeric value for " + key + ": " + text);
    }
    return value;
}

int parse_int(const std::string& text, const std::string& key) {
    const std::string s = trim(text);
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw ConfigError("bad integer value for " + key + ": " + text);
    return static_cast<int>(v);
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(it->second, key);
}

int Config::get_int(const std::string& key, int fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_int(it->second, key);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("bad boolean value for " + key + ": " + v);
}

std::vector<double> Config::get_doubles(const std::string& key) const {
    const auto it = values_.find(key);
    std::vector<double> out;
    if (it == values_.end()) return out;
    std::istringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_double(tok, key));
    return out;
}

ModelParams model_from_config(const Config& cfg, ModelParams defaults) {
    ModelParams m = defaults;
    m.J = cfg.get_double("model.J", m.J);
    m.U = cfg.get_double("model.U", m.U);
    m.V = cfg.get_double("model.V", m.V);
    m.p = cfg.get_int("model.p", m.p);
    m.q = cfg.get_int("model.q", m.q);
    m.xi = cfg.get_double("model.xi", m.xi);
    m.L = cfg.get_int("model.L", m.L);
    m.N = cfg.get_int("model.N", m.N);
    const std::string b = cfg.get("model.boundary", "");
    if (b == "open") m.boundary = Boundary::Open;
    else if (b == "periodic") m.boundary = Boundary::Periodic;
    else if (!b.empty()) throw ConfigError("model.boundary must be open or periodic");
    m.validate();
    return m;
}

ScreeningThresholds thresholds_from_config(const Config& cfg, ScreeningThresholds d) {
    ScreeningThresholds t = d;
    t.sv_sum_min = cfg.get_double("thresholds.sv_sum_min", t.sv_sum_min);
    t.extended_overlap_min = cfg.get_double("thresholds.extended_overlap_min", t.extended_overlap_min);
    t.ipr_chi_min_independent =
        cfg.get_double("thresholds.ipr_chi_min_independent", t.ipr_chi_min_independent);
    t.ipr_chi_min_correlated =
        cfg.get_double("thresholds.ipr_chi_min_correlated", t.ipr_chi_min_correlated);
    t.fidelity_min = cfg.get_double("thresholds.fidelity_min", t.fidelity_min);
    t.ipr_phi_max = cfg.get_double("thresholds.ipr_phi_max", t.ipr_phi_max);
    t.near_equal_ratio = cfg.get_double("thresholds.near_equal_ratio", t.near_equal_ratio);
    t.one_localized_weight_min =
        cfg.get_double("thresholds.one_localized_weight_min", t.one_localized_weight_min);
    t.one_localized_density_max =
        cfg.get_double("thresholds.one_localized_density_max", t.one_localized_density_max);
    t.edge_overlap_max = cfg.get_double("thresholds.edge_overlap_max", t.edge_overlap_max);
    t.edge_ipr_min = cfg.get_double("thresholds.edge_ipr_min", t.edge_ipr_min);
    return t;
}

}  // namespace boseloc
