#include "cble/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cble/errors.hpp"
#include "cble/rng.hpp"

namespace cble {

SimConfig validate_sim_config(const SimConfig& raw) {
    if (!(raw.dt_max > 0.0)) throw ValidationError("sim.dt_max", "must be > 0");
    if (!(raw.eps_jump > 0.0) || !(raw.eps_jump <= 1.0))
        throw ValidationError("sim.eps_jump", "must lie in (0, 1]");
    if (!(raw.K_explode > 1.0)) throw ValidationError("sim.K_explode", "must be > 1");
    if (!(raw.T_horizon > 0.0)) throw ValidationError("sim.T_horizon", "must be > 0");
    if (!(raw.record_grid > 0.0)) throw ValidationError("sim.record_grid", "must be > 0");
    for (double u : raw.track_levels)
        if (!std::isfinite(u) || u < 0.0)
            throw ValidationError("sim.track_levels", "levels must be finite and >= 0");
    return raw;
}

namespace {

enum Stream : std::uint64_t {
    kBranchDiffusion = 0,
    kEnvDiffusion = 1,
    kBigJumps = 2,
    kSmallJumps = 3,
    kEnvTimes = 4,
    kEnvSizes = 5,
};

// Inverse-transform sampler for mu restricted to [eps, inf), normalized.
struct BigJumpSampler {
    double total = 0.0;
    double stable_lo = 0.0;
    double inv_alpha = 0.0;
    std::vector<std::pair<double, double>> atom_cdf;  // (cumulative mass, size)

    BigJumpSampler(const JumpMeasureSpec& mu, double eps) {
        double cum = 0.0;
        if (const auto* atoms = mu.atoms()) {
            for (const auto& at : *atoms)
                if (at.size >= eps && at.mass > 0.0) {
                    cum += at.mass;
                    atom_cdf.emplace_back(cum, at.size);
                }
        }
        stable_lo = std::max(eps, mu.stable_cut());
        inv_alpha = 1.0 / mu.alpha();
        total = mu_tail_mass(mu, eps);
    }

    double sample(RngStream& rng) const {
        const double u = rng.uniform() * total;
        for (const auto& [cum, size] : atom_cdf)
            if (u < cum) return size;
        const double v = rng.uniform_pos();
        return stable_lo * std::pow(v, -inv_alpha);  // Pareto(alpha) tail
    }
};

double sample_env_law(const EnvJumpLaw& law, RngStream& rng) {
    if (const auto* pm = std::get_if<EnvPointMass>(&law)) return pm->z;
    if (const auto* u = std::get_if<EnvUniform>(&law))
        return u->a + (u->b - u->a) * rng.uniform();
    const double lam = std::get<EnvTwoSidedExponential>(law).lambda;
    const double u = rng.uniform();
    if (u < 0.5) return std::log(std::max(2.0 * u, 1e-300)) / lam;
    return -std::log(std::max(2.0 * (1.0 - u), 1e-300)) / lam;
}

struct LevelTracker {
    std::map<double, HitTimes> hits;

    void add_level(double u) { hits.emplace(u, HitTimes{}); }

    void note(double t, double y) {
        for (auto& [level, h] : hits) {
            if (!h.tau_minus && y <= level) h.tau_minus = t;
            if (!h.tau_plus && y >= level) h.tau_plus = t;
        }
    }
};

PathRecord simulate_core(const ModelSpec& m, const SimConfig& cfg, double k_trunc,
                         std::uint64_t path_index, std::uint64_t cell_index) {
    validate_model(m);
    validate_sim_config(cfg);

    RngStream s_bdiff(substream_seed(cfg.seed, cell_index, path_index, kBranchDiffusion));
    RngStream s_ediff(substream_seed(cfg.seed, cell_index, path_index, kEnvDiffusion));
    RngStream s_big(substream_seed(cfg.seed, cell_index, path_index, kBigJumps));
    RngStream s_small(substream_seed(cfg.seed, cell_index, path_index, kSmallJumps));
    RngStream s_etime(substream_seed(cfg.seed, cell_index, path_index, kEnvTimes));
    RngStream s_esize(substream_seed(cfg.seed, cell_index, path_index, kEnvSizes));

    const auto& mu = m.branching.mu;
    const bool jumps_on = cfg.branching_jumps_enabled;
    const BigJumpSampler big(mu, cfg.eps_jump);
    const double big_rate = jumps_on ? big.total : 0.0;
    const double comp_branch =
        jumps_on ? mu_partial_first_moment(mu, cfg.eps_jump, 1.0) : 0.0;
    const double small_var = jumps_on ? mu_small_second_moment(mu, cfg.eps_jump) : 0.0;
    const double comp_env = env_exp_compensator(m.environment);
    const double env_rate = m.environment.total_rate();
    const double sigma = m.environment.sigma;
    const double b2 = m.branching.b2;
    const double K = cfg.K_explode;
    const double T = cfg.T_horizon;
    const double lin = m.branching.b1 + m.environment.beta - comp_branch - comp_env;

    auto drift = [&](double y) { return lin * y - competition_eval(m.competition, y); };

    PathRecord rec;
    if (k_trunc != std::numeric_limits<double>::infinity())
        rec.truncation_level = k_trunc;

    LevelTracker tracker;
    tracker.add_level(0.0);
    tracker.add_level(K);
    for (double u : cfg.track_levels) tracker.add_level(u);

    double t = 0.0;
    double y = m.y0;

    auto push_sample = [&rec](double tt, double yy) {
        if (!rec.samples.empty() && rec.samples.back().first == tt)
            rec.samples.back().second = yy;
        else
            rec.samples.emplace_back(tt, yy);
    };

    push_sample(t, y);
    tracker.note(t, y);

    bool exploded = y >= K;
    double next_rec = cfg.record_grid;
    double next_env =
        env_rate > 0.0 ? s_etime.exponential(env_rate) : std::numeric_limits<double>::infinity();

    while (!exploded && t < T) {
        if (y == 0.0) {
            // absorbed: every coefficient vanishes at 0, pad the record
            for (; next_rec <= T; next_rec += cfg.record_grid) push_sample(next_rec, 0.0);
            push_sample(T, 0.0);
            break;
        }

        double h_cap = cfg.dt_max;
        if (big_rate > 0.0) h_cap = std::min(h_cap, 0.1 / (y * big_rate));
        const double d0 = std::abs(drift(y));
        if (d0 > 0.0) h_cap = std::min(h_cap, 0.05 * y / d0);

        double t_target = std::min(std::min(t + h_cap, T), std::min(next_rec, next_env));
        double h = t_target - t;
        const double y_hat = y;  // frozen state for the thinning intensity

        double y_try = 0.0;
        double tau_jump_explode = -1.0;
        for (;;) {
            if (h < 1e-12 * cfg.dt_max)
                throw StepUnderflowError(
                    "simulate: adaptive step underflow at t=" + std::to_string(t) +
                        ", y=" + std::to_string(y),
                    t, y);
            bool reject = false;
            tau_jump_explode = -1.0;
            y_try = y;

            // (a) deterministic drift, explicit midpoint, floored at 0
            const double y_mid = std::max(0.0, y_try + 0.5 * h * drift(y_try));
            y_try = std::max(0.0, y_try + h * drift(y_mid));

            // (b) branching diffusion, CIR-style increment
            if (b2 != 0.0 && y_try > 0.0)
                y_try = std::max(
                    0.0, y_try + std::sqrt(2.0 * b2 * b2 * y_try * h) * s_bdiff.normal());

            // (c) environment diffusion as its stochastic exponential
            if (sigma != 0.0 && y_try > 0.0)
                y_try *= std::exp(sigma * std::sqrt(h) * s_ediff.normal() -
                                  0.5 * sigma * sigma * h);

            // (d) big branching jumps by thinning against the frozen rate
            if (big_rate > 0.0 && y_hat > 0.0) {
                const int n_cand = s_big.poisson(y_hat * big_rate * h);
                if (n_cand > 0) {
                    double times[16];
                    const int nc = std::min(n_cand, 16);
                    for (int i = 0; i < nc; ++i) times[i] = s_big.uniform();
                    std::sort(times, times + nc);
                    for (int i = 0; i < nc; ++i) {
                        const double ratio = y_try / y_hat;
                        if (ratio > 1.0) {
                            reject = true;  // state outgrew the dominating rate
                            break;
                        }
                        if (s_big.uniform() < ratio) {
                            y_try += big.sample(s_big);
                            if (y_try >= K) {
                                tau_jump_explode = t + times[i] * h;
                                break;
                            }
                        }
                    }
                }
            }
            if (reject) {
                h *= 0.5;
                t_target = t + h;
                continue;
            }

            // (e) small jumps as a variance-matched Gaussian
            if (tau_jump_explode < 0.0 && small_var > 0.0 && y_try > 0.0)
                y_try = std::max(
                    0.0, y_try + std::sqrt(y_try * h * small_var) * s_small.normal());
            break;
        }

        y = y_try;
        t = (tau_jump_explode >= 0.0) ? tau_jump_explode : t_target;
        tracker.note(t, y);

        if (y >= K) {
            exploded = true;
            rec.tau_explode = t;
            push_sample(t, y);
            break;
        }

        if (t == next_env) {
            // (f) exact finite-activity environment jump
            double r = s_esize.uniform() * env_rate;
            const EnvJumpComponent* chosen = &m.environment.nu.back();
            for (const auto& c : m.environment.nu) {
                if (r < c.rate) {
                    chosen = &c;
                    break;
                }
                r -= c.rate;
            }
            const double z = sample_env_law(chosen->law, s_esize);
            const bool applied = !(z > k_trunc);
            if (applied) y *= std::exp(z);
            rec.env_jump_log.push_back({t, z, applied});
            next_env = t + s_etime.exponential(env_rate);
            tracker.note(t, y);
            if (y >= K) {
                exploded = true;
                rec.tau_explode = t;
                push_sample(t, y);
                break;
            }
        }

        if (t == next_rec) {
            push_sample(t, y);
            next_rec += cfg.record_grid;
        }
        if (t >= T) push_sample(T, y);
    }

    if (exploded && !rec.tau_explode) rec.tau_explode = 0.0;  // started above K
    rec.exploded = exploded;
    rec.tau_hits = tracker.hits;
    if (rec.samples.back().first < std::min(t, T)) push_sample(std::min(t, T), y);
    return rec;
}

}  // namespace

PathRecord simulate_path(const ModelSpec& m, const SimConfig& cfg,
                         std::uint64_t path_index, std::uint64_t cell_index) {
    return simulate_core(m, cfg, std::numeric_limits<double>::infinity(), path_index,
                         cell_index);
}

PathRecord simulate_truncated(const ModelSpec& m, const SimConfig& cfg, double k,
                              std::uint64_t path_index, std::uint64_t cell_index) {
    if (!(k >= 2.0)) throw ValidationError("simulate_truncated.k", "must be >= 2");
    return simulate_core(m, cfg, k, path_index, cell_index);
}

HitTimes hitting_times(const PathRecord& p, double u) {
    if (!(u > 0.0)) throw ValidationError("hitting_times.u", "must be > 0");
    HitTimes h;
    for (const auto& [t, y] : p.samples) {
        if (!h.tau_minus && y <= u) h.tau_minus = t;
        if (!h.tau_plus && y >= u) h.tau_plus = t;
        if (h.tau_minus && h.tau_plus) break;
    }
    return h;
}

}  // namespace cble
