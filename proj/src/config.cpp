#include "polytherm/config.hpp"

#include <fstream>
#include <sstream>

namespace polytherm {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return from_string(ss.str());
}

RunConfig RunConfig::from_string(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config: empty key on line " + std::to_string(lineno));
        cfg.kv_[key] = val;
    }
    return cfg;
}

void RunConfig::apply_override(const std::string& keyvalue) {
    const auto eq = keyvalue.find('=');
    if (eq == std::string::npos) throw ConfigError("override must be key=value: " + keyvalue);
    kv_[trim(keyvalue.substr(0, eq))] = trim(keyvalue.substr(eq + 1));
}

bool RunConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + " is not a number: " + it->second);
    }
}

int RunConfig::get_int(const std::string& key, int fallback) const {
    const double v = get_double(key, fallback);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw ConfigError("config: " + key + " is not an integer");
    return i;
}

std::vector<double> RunConfig::get_list(const std::string& key) const {
    std::vector<double> out;
    const auto it = kv_.find(key);
    if (it == kv_.end()) return out;
    std::istringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("config: " + key + " has a non-numeric entry: " + item);
        }
    }
    return out;
}

LawParams law_from_config(const RunConfig& cfg) {
    LawParams p;
    const std::string kind = cfg.get_string("law.kind", "quadratic");
    if (kind == "quadratic")
        p.thermal = ThermalKind::quadratic;
    else if (kind == "log")
        p.thermal = ThermalKind::logarithmic;
    else
        throw ConfigError("config: law.kind must be quadratic or log, got " + kind);
    p.alpha = cfg.get_double("law.alpha", 1.0);
    p.beta = cfg.get_double("law.beta", 1.0);
    p.delta = cfg.get_double("law.delta", 1.0);
    p.c_v = cfg.get_double("law.c_v", 1.0);
    p.gamma = cfg.get_double("law.gamma", 0.1);
    p.theta0 = cfg.get_double("law.theta0", 1.0);
    p.kappa = cfg.get_double("law.kappa", 0.0);
    p.s_exp = cfg.get_double("law.s", 2.0);
    if (p.c_v <= 0 || p.delta <= 0) throw ConfigError("config: law.c_v and law.delta must be > 0");
    return p;
}

TransportCoeffs coeffs_from_config(const RunConfig& cfg) {
    TransportCoeffs c;
    const std::string kind = cfg.get_string("coeffs.kind", "constant");
    if (kind == "constant")
        c.kind = CoeffKind::constant;
    else if (kind == "inv-theta")
        c.kind = CoeffKind::inv_theta;
    else if (kind == "theta-cubed")
        c.kind = CoeffKind::theta_cubed;
    else
        throw ConfigError("config: coeffs.kind must be constant, inv-theta or theta-cubed");
    c.mu0 = cfg.get_double("coeffs.mu0", 0.0);
    c.k0 = cfg.get_double("coeffs.k0", 0.0);
    if (c.mu0 < 0 || c.k0 < 0) throw ConfigError("config: coefficient amplitudes must be >= 0");
    return c;
}

InitialParams initial_from_config(const RunConfig& cfg) {
    InitialParams p;
    const std::string kind = cfg.get_string("init.kind", "sine-shear");
    if (kind == "rest")
        p.kind = InitialKind::rest;
    else if (kind == "sine-shear")
        p.kind = InitialKind::sine_shear;
    else if (kind == "thermal-bump")
        p.kind = InitialKind::thermal_bump;
    else if (kind == "gradient-perturbation")
        p.kind = InitialKind::gradient_perturbation;
    else
        throw ConfigError("config: unknown init.kind " + kind);
    p.amplitude = cfg.get_double("init.amplitude", 0.05);
    p.mode = cfg.get_int("init.mode", 1);
    p.theta0 = cfg.get_double("law.theta0", 1.0);
    p.theta_amplitude = cfg.get_double("init.theta_amplitude", 0.0);
    p.v_perturb = cfg.get_double("init.v_perturb", 0.0);
    p.v_mode = cfg.get_int("init.v_mode", 2);
    return p;
}

GridConfig grid_from_config(const RunConfig& cfg) {
    GridConfig g;
    g.d = cfg.get_int("grid.d", 2);
    g.n = cfg.get_int("grid.N", 64);
    g.length = cfg.get_double("grid.L", 1.0);
    if (g.d != 2 && g.d != 3) throw ConfigError("config: grid.d must be 2 or 3");
    if (g.n < 8) throw ConfigError("config: grid.N must be >= 8");
    if (g.d == 3 && g.n > 32)
        throw ConfigError("config: d=3 runs are supported at demo scale N <= 32 only");
    if (g.length <= 0) throw ConfigError("config: grid.L must be positive");
    return g;
}

}  // namespace polytherm
