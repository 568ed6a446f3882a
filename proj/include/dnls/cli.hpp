#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dnls/flows.hpp"
#include "dnls/report.hpp"

namespace dnls {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Unset optionals take scenario-specific defaults (see README).
struct RunConfig {
    std::string scenario;

    std::optional<int> n;
    std::optional<double> length;

    FlowKind kind = FlowKind::dnls;
    std::optional<double> kappa;
    std::optional<double> dt;
    std::optional<double> T;
    Scheme scheme = Scheme::if_rk4;
    std::optional<int> record_every;

    // gaussian | soliton | stationary | algebraic | random | zero
    std::optional<std::string> profile;
    double amplitude = 0.5;
    double carrier = 0.5;
    double theta = 0.7853981633974483;
    double lambda = 1.0;
    std::uint64_t seed = 1;

    std::vector<double> kappas;
    std::vector<double> lambdas;
    int points = 5;
    double s = 0.0;
    double nu = 0.5;
    std::optional<double> boost;
    double k = 1.0;  // spectral parameter of the density in micro-laws

    std::map<std::string, double> tol;

    std::string out_dir;  // empty: no files written
    std::string prefix;   // defaults to the scenario name

    double tolerance(const std::string& name, double fallback) const;
};

const std::vector<std::string>& scenario_names();

// `key` is section.name, e.g. flow.dt; throws ConfigError naming the key
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// [section] headers, key = value lines, '#' or ';' comments
RunConfig parse_config_text(const std::string& text, RunConfig base = {});
RunConfig parse_config_file(const std::string& path, RunConfig base = {});

// cross-field checks; throws ConfigError
void validate(const RunConfig& cfg);

// the initial field described by the data section on the given grid
Field make_initial_data(const RunConfig& cfg, int n, double length);

Report run(const RunConfig& cfg);

// <dir>/<prefix>.json and <dir>/<prefix>_<table>.csv; returns the paths
std::vector<std::string> write_outputs(const Report& rep, const RunConfig& cfg);

}  // namespace dnls
