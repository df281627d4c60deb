#pragma once

#include <string>
#include <vector>

#include "cble/model.hpp"
#include "cble/simulate.hpp"

namespace cble {

struct LyapunovOptions {
    std::vector<double> delta_grid{0.05, 0.1, 0.2};
    double y_min = 1.0;
    double y_max = 1e6;
    int points_per_decade = 64;
    int n = 9;        // log-log test-function index for the nonexplosion scan
    double k = 10.0;  // environment truncation level
};

struct OutputOptions {
    std::string dir = "out";
    bool csv = true;
    bool json = true;
};

struct RunConfig {
    ModelSpec model;
    SimConfig sim;
    LyapunovOptions lyapunov;
    int mc_paths = 100;
    OutputOptions output;
};

/// Loads either the flat INI-style format or JSON, deciding by content
/// (leading '{') and extension. Aborts with a line/field-precise ConfigError;
/// the embedded specs are validated before returning.
RunConfig load_run_config(const std::string& path);

RunConfig parse_run_config_ini(const std::string& text);
RunConfig parse_run_config_json(const std::string& text);

}  // namespace cble
