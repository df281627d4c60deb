#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cble/model.hpp"

namespace cble {

struct SimConfig {
    double dt_max = 1e-3;       // base step; reduced adaptively when rates are large
    double eps_jump = 1e-2;     // small-jump cutoff for mu, in (0, 1]
    double K_explode = 1e8;     // explosion threshold (> 1)
    double T_horizon = 10.0;    // simulation end time
    std::uint64_t seed = 0x5eedULL;
    double record_grid = 0.1;   // output sampling interval
    /// Levels whose first hitting times (both directions) are tracked during
    /// the run, in addition to 0 and K_explode.
    std::vector<double> track_levels;
    /// Diagnostic switch: disables branching jumps entirely (big-jump
    /// thinning, the small-jump Gaussian and their drift compensator) so the
    /// integrator can be checked against deterministic dynamics.
    bool branching_jumps_enabled = true;
};

SimConfig validate_sim_config(const SimConfig& raw);

struct HitTimes {
    std::optional<double> tau_minus;  // first t with Y(t) <= level
    std::optional<double> tau_plus;   // first t with Y(t) >= level
};

struct EnvJumpEvent {
    double t = 0.0;
    double z = 0.0;
    bool applied = true;  // false when a truncated run discarded the jump
};

struct PathRecord {
    std::vector<std::pair<double, double>> samples;  // (t, y), strictly increasing t
    std::map<double, HitTimes> tau_hits;             // tracked levels
    bool exploded = false;
    std::optional<double> tau_explode;               // time Y first reached K_explode
    std::optional<double> truncation_level;          // k for truncated runs
    std::vector<EnvJumpEvent> env_jump_log;
};

/// One trajectory of the model on [0, min(T_horizon, tau_K, absorption)].
/// Operator-split step: midpoint drift (with jump compensators), CIR-style
/// branching diffusion, environment stochastic exponential, thinned big
/// branching jumps, small-jump Gaussian; exact event times for the
/// finite-activity environment jumps. path_index selects the RNG substream.
PathRecord simulate_path(const ModelSpec& m, const SimConfig& cfg,
                         std::uint64_t path_index = 0, std::uint64_t cell_index = 0);

/// Identical dynamics and substreams, but environment jumps with z > k are
/// discarded; pathwise equal to simulate_path until the first such jump.
PathRecord simulate_truncated(const ModelSpec& m, const SimConfig& cfg, double k,
                              std::uint64_t path_index = 0,
                              std::uint64_t cell_index = 0);

/// First sample-crossing times below / above u within the recorded path.
HitTimes hitting_times(const PathRecord& p, double u);

}  // namespace cble
