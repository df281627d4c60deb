#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cble/analytics.hpp"
#include "cble/model.hpp"
#include "cble/test_function.hpp"

namespace cble {

/// Geometric evaluation grid, multiplicatively jittered by up to `jitter` to
/// avoid lattice artifacts. Endpoints are kept exact. Deterministic for a
/// fixed jitter_seed.
struct YGridSpec {
    double y_min = 1.0;
    double y_max = 1e6;
    int points_per_decade = 64;
    double jitter = 0.01;
    std::uint64_t jitter_seed = 0x9e3779b97f4a7c15ULL;
};

std::vector<double> make_y_grid(const YGridSpec& spec);

/// Family selector mirroring TestFunction's factories (single entry point
/// used by the CLI and the scanners).
TestFunction make_test_function(TestFunctionFamily family, double delta_or_level = 0.0,
                                int n = 0);

/// Numerical witness for the drift condition Lg >= d0 g on [y_bar, inf):
/// a grid scan verified the inequality from y_bar to the top of the grid and
/// the leading analytic exponent diverges. Evidence, not proof.
struct ExplosionCertificate {
    double delta = 0.0;   // test-function parameter of g(y) = exp(-y^{-delta})
    double y_bar = 0.0;   // threshold from which the inequality held
    double d0 = 1.0;      // drift constant
    double margin = 0.0;  // min over the verified grid of Lg - d0 g
};

/// Numerical witness for L_k g_n <= d_n g_n on [1/n, y_max], plus the
/// analytic boundedness check of the dominant terms beyond y_max.
struct NonexplosionEvidence {
    int n = 9;
    double d_n = 0.0;
    double y_max = 0.0;
    bool asymptotic_ok = false;
};

/// Scans g(y) = exp(-y^{-delta}) over the delta grid, looking for y_bar with
/// Lg(y) >= d0 g(y) at every grid point >= y_bar and a diverging leading term
/// (1 - alpha - delta > 0). First hit wins; nullopt when no delta certifies.
std::optional<ExplosionCertificate> scan_explosion_criterion(
    const ModelSpec& m, std::span<const double> delta_grid, const YGridSpec& grid_spec,
    double d0 = 1.0);

/// max(0, (g(y0) - g(y_bar)) / sup g) for bounded increasing g; the certified
/// lower bound on the probability of finite-time explosion started at y0.
double explosion_prob_lower_bound(const TestFunction& g, double y0, double y_bar);

/// Scans L_k g_n / g_n over [1/n, y_max]; d_n is the grid maximum (floored at
/// a small positive constant). Returns nullopt when the ratio still grows
/// through the last decade or the dominant terms are unbounded beyond y_max.
std::optional<NonexplosionEvidence> scan_nonexplosion_criterion(
    const ModelSpec& m, int n = 9, double y_max = 1e4, double k = 10.0,
    int points_per_decade = 64, std::uint64_t jitter_seed = 0x9e3779b97f4a7c15ULL);

}  // namespace cble
