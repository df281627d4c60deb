#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cble/classify.hpp"
#include "cble/model.hpp"
#include "cble/simulate.hpp"

namespace cble {

struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};

/// 95% Wilson score interval (z = 1.96); chosen over Wald because regime
/// cells routinely produce 0 or n successes.
WilsonInterval wilson_interval(int successes, int n, double z = 1.96);

struct MCResult {
    int n_paths = 0;
    int n_exploded = 0;
    int n_failed = 0;  // paths aborted by a numerical error, excluded
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::optional<double> mean_tau_K;  // mean explosion time among exploded paths
    SimConfig config_echo;
};

/// n independent paths with substreams (seed, cell_index, path_index);
/// deterministic given the seed regardless of thread count. threads = 0
/// means hardware concurrency.
MCResult estimate_explosion_prob(const ModelSpec& m, const SimConfig& cfg, int n,
                                 int threads = 0, std::uint64_t cell_index = 0);

/// Ensemble variant that also returns every PathRecord (used by the CLI's
/// per-path output); memory scales with n * samples.
std::vector<PathRecord> run_paths(const ModelSpec& m, const SimConfig& cfg, int n,
                                  int threads = 0, std::uint64_t cell_index = 0);

enum class SweepParam { Alpha, ABar, B0, Q0, Sigma, Beta };

std::optional<SweepParam> sweep_param_from_string(const std::string& name);
std::string to_string(SweepParam p);

/// Returns a copy of the base model with the swept parameter replaced.
ModelSpec apply_sweep_param(const ModelSpec& base, SweepParam p, double value);

struct SweepAxis {
    SweepParam param = SweepParam::B0;
    std::vector<double> values;
};

struct PhaseCell {
    double axis1_value = 0.0;
    double axis2_value = 0.0;
    bool valid = false;  // false when the swept parameters fail validation
    RegimeVerdict verdict;
    MCResult mc;
};

struct PhaseDiagram {
    SweepAxis axis1;
    SweepAxis axis2;
    std::vector<PhaseCell> cells;  // row-major: axis1 outer, axis2 inner
};

/// Per cell: classify_regime verdict plus a Monte Carlo estimate. Invalid
/// cells are marked, not fatal. Cells use substream cell indices so the whole
/// diagram is reproducible from one seed.
PhaseDiagram phase_diagram(const ModelSpec& base, const SimConfig& cfg,
                           const SweepAxis& axis1, const SweepAxis& axis2,
                           int n_per_cell, int threads = 0);

}  // namespace cble
