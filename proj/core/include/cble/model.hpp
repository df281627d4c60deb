#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cble {

// ---------------------------------------------------------------------------
// Jump measure of the branching mechanism
// ---------------------------------------------------------------------------

/// mu(dz) = a_bar * z^{-1-alpha} dz on (0, inf).
struct PureStable {
    double a_bar = 1.0;   // tail amplitude, > 0
    double alpha = 0.5;   // stability index, in (0, 2)
};

struct JumpAtom {
    double mass = 0.0;  // >= 0
    double size = 0.0;  // in (0, A]
};

/// Stable density a_bar * z^{-1-alpha} dz restricted to (A, inf) plus a finite
/// atomic component supported in (0, A].
struct StableTailPlusFinite {
    double a_bar = 1.0;
    double alpha = 0.5;
    double A = 1.0;                // cut point, > 0
    std::vector<JumpAtom> atoms;   // finite part on (0, A]
};

struct JumpMeasureSpec {
    std::variant<PureStable, StableTailPlusFinite> value;

    double alpha() const;
    double a_bar() const;
    /// Left end of the stable-density support: 0 for PureStable, A otherwise.
    double stable_cut() const;
    const std::vector<JumpAtom>* atoms() const;  // nullptr for PureStable
};

/// mu([x, inf)); exact closed form.
double mu_tail_mass(const JumpMeasureSpec& m, double x);

/// int_{(lo, hi]} z mu(dz), closed form (stable part plus atoms).
double mu_partial_first_moment(const JumpMeasureSpec& m, double lo, double hi);

/// int_{(0, x]} z^2 mu(dz), closed form.
double mu_small_second_moment(const JumpMeasureSpec& m, double x);

// ---------------------------------------------------------------------------
// Branching mechanism
// ---------------------------------------------------------------------------

struct BranchingSpec {
    double b1 = 0.0;       // linear drift rate
    double b2 = 0.0;       // diffusion coefficient; the diffusion term is sqrt(2 b2^2 y)
    JumpMeasureSpec mu;
};

/// phi(lambda) = -b1 l + b2^2 l^2 + int (e^{-lz} - 1 + lz 1_{z<1}) mu(dz).
/// Closed form for the pure-stable density (split by alpha < 1, = 1, > 1);
/// adaptive quadrature for the truncated stable part of the mixed variant.
double phi(const BranchingSpec& b, double lambda);

// ---------------------------------------------------------------------------
// Environment
// ---------------------------------------------------------------------------

struct EnvPointMass {
    double z = 0.0;
};

struct EnvUniform {
    double a = -1.0;
    double b = 1.0;  // a < b
};

/// Symmetric two-sided exponential, density (lambda/2) e^{-lambda |z|}.
struct EnvTwoSidedExponential {
    double lambda = 1.0;  // > 0
};

using EnvJumpLaw = std::variant<EnvPointMass, EnvUniform, EnvTwoSidedExponential>;

struct EnvJumpComponent {
    double rate = 0.0;  // > 0
    EnvJumpLaw law;
};

/// Finite-activity environment Levy triplet (beta, sigma, nu); nu is the listed
/// finite mixture, so nu(R) = sum of rates < inf by construction.
struct EnvironmentSpec {
    double beta = 0.0;
    double sigma = 0.0;                    // >= 0
    std::vector<EnvJumpComponent> nu;

    double total_rate() const;
};

/// int_{[-1,1]} (e^z - 1) nu(dz), closed form; the drift compensator of the
/// small environment jumps.
double env_exp_compensator(const EnvironmentSpec& e);

// ---------------------------------------------------------------------------
// Competition
// ---------------------------------------------------------------------------

/// b0(y) = b0 * y^{q0} for y >= max(A, 0); linear from (0,0) to (A, b0 A^{q0})
/// below the activation level.
struct PowerLawCompetition {
    double b0 = 0.0;  // amplitude, >= 0
    double q0 = 1.0;  // exponent
    double A = 0.0;   // activation level, >= 0
};

/// Piecewise-linear competition through increasing breakpoints starting at
/// (0, 0); constant beyond the last breakpoint.
struct TabulatedCompetition {
    std::vector<std::pair<double, double>> breakpoints;
};

struct CompetitionSpec {
    std::variant<PowerLawCompetition, TabulatedCompetition> value;

    const PowerLawCompetition* power_law() const;
};

double competition_eval(const CompetitionSpec& c, double y);

// ---------------------------------------------------------------------------
// Full model
// ---------------------------------------------------------------------------

struct ModelSpec {
    BranchingSpec branching;
    EnvironmentSpec environment;
    CompetitionSpec competition;
    double y0 = 1.0;  // initial state, >= 0
};

/// Returns the spec unchanged iff every structural invariant holds; throws
/// ValidationError naming the violated field otherwise.
ModelSpec validate_model(const ModelSpec& raw);

}  // namespace cble
