/// @file config.hpp
/// @brief Flat key-value run configuration with dotted sections, plus typed
///        builders for the law, transport coefficients, initial data, and
///        experiment specification. The schema is documented in docs/config.md.

#ifndef POLYTHERM_CONFIG_HPP
#define POLYTHERM_CONFIG_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "polytherm/law.hpp"
#include "polytherm/solver.hpp"

namespace polytherm {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class RunConfig {
public:
    static RunConfig from_file(const std::string& path);
    static RunConfig from_string(const std::string& text);

    /// Apply a "key=value" override (CLI flag).
    void apply_override(const std::string& keyvalue);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::vector<double> get_list(const std::string& key) const;  // comma-separated

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

LawParams law_from_config(const RunConfig& cfg);
TransportCoeffs coeffs_from_config(const RunConfig& cfg);
InitialParams initial_from_config(const RunConfig& cfg);

struct GridConfig {
    int d = 2;
    int n = 64;
    double length = 1.0;
};
GridConfig grid_from_config(const RunConfig& cfg);

template <int D>
RunParams<D> run_params_from_config(const RunConfig& cfg) {
    RunParams<D> rp;
    rp.coeffs = coeffs_from_config(cfg);
    rp.cfl_hyperbolic = cfg.get_double("run.cfl", 0.4);
    rp.cfl_parabolic = cfg.get_double("run.cfl_parabolic", 0.25);
    rp.hyperviscosity = cfg.get_double("run.hyperviscosity", 0.05);
    rp.theta_floor = cfg.get_double("run.theta_floor", 0.0);
    rp.fixed_dt = cfg.get_double("run.fixed_dt", 0.0);
    rp.frame_stride = cfg.get_int("run.frame_stride", 10);
    return rp;
}

}  // namespace polytherm

#endif  // POLYTHERM_CONFIG_HPP
