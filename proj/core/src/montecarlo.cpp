#include "cble/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "cble/errors.hpp"

namespace cble {

WilsonInterval wilson_interval(int successes, int n, double z) {
    if (n <= 0 || successes < 0 || successes > n)
        throw ValidationError("wilson_interval", "requires 0 <= successes <= n");
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * static_cast<double>(n) * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

struct PathOutcome {
    bool ok = false;
    bool exploded = false;
    double tau = 0.0;
};

// Runs `n` paths over a worker pool; `sink` receives (index, record) on the
// worker thread. Aggregation stays deterministic because outcomes are stored
// by index.
template <typename Sink>
std::vector<PathOutcome> run_ensemble(const ModelSpec& m, const SimConfig& cfg, int n,
                                      int threads, std::uint64_t cell_index,
                                      Sink&& sink) {
    validate_model(m);
    validate_sim_config(cfg);
    if (n < 1) throw ValidationError("montecarlo.n", "must be >= 1");

    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) threads = 1;
    }
    threads = std::min(threads, n);

    std::vector<PathOutcome> out(n);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                PathRecord rec = simulate_path(m, cfg, static_cast<std::uint64_t>(i),
                                               cell_index);
                out[i].ok = true;
                out[i].exploded = rec.exploded;
                out[i].tau = rec.tau_explode.value_or(0.0);
                sink(i, std::move(rec));
            } catch (const NumericalError&) {
                out[i].ok = false;  // excluded from the estimate, counted
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return out;
}

MCResult summarize(const std::vector<PathOutcome>& outcomes, const SimConfig& cfg) {
    MCResult r;
    r.config_echo = cfg;
    double tau_sum = 0.0;
    for (const auto& o : outcomes) {
        if (!o.ok) {
            ++r.n_failed;
            continue;
        }
        ++r.n_paths;
        if (o.exploded) {
            ++r.n_exploded;
            tau_sum += o.tau;
        }
    }
    if (r.n_paths > 0) {
        r.estimate = static_cast<double>(r.n_exploded) / r.n_paths;
        const auto ci = wilson_interval(r.n_exploded, r.n_paths);
        r.ci_low = ci.low;
        r.ci_high = ci.high;
    }
    if (r.n_exploded > 0) r.mean_tau_K = tau_sum / r.n_exploded;
    return r;
}

}  // namespace

MCResult estimate_explosion_prob(const ModelSpec& m, const SimConfig& cfg, int n,
                                 int threads, std::uint64_t cell_index) {
    const auto outcomes =
        run_ensemble(m, cfg, n, threads, cell_index, [](int, PathRecord&&) {});
    return summarize(outcomes, cfg);
}

std::vector<PathRecord> run_paths(const ModelSpec& m, const SimConfig& cfg, int n,
                                  int threads, std::uint64_t cell_index) {
    std::vector<PathRecord> recs(n);
    run_ensemble(m, cfg, n, threads, cell_index,
                 [&recs](int i, PathRecord&& r) { recs[i] = std::move(r); });
    return recs;
}

std::optional<SweepParam> sweep_param_from_string(const std::string& name) {
    if (name == "alpha") return SweepParam::Alpha;
    if (name == "a_bar") return SweepParam::ABar;
    if (name == "b0") return SweepParam::B0;
    if (name == "q0") return SweepParam::Q0;
    if (name == "sigma") return SweepParam::Sigma;
    if (name == "beta") return SweepParam::Beta;
    return std::nullopt;
}

std::string to_string(SweepParam p) {
    switch (p) {
        case SweepParam::Alpha: return "alpha";
        case SweepParam::ABar: return "a_bar";
        case SweepParam::B0: return "b0";
        case SweepParam::Q0: return "q0";
        case SweepParam::Sigma: return "sigma";
        case SweepParam::Beta: return "beta";
    }
    return "?";
}

ModelSpec apply_sweep_param(const ModelSpec& base, SweepParam p, double value) {
    ModelSpec m = base;
    auto set_stable = [&m](auto&& fn) {
        std::visit(fn, m.branching.mu.value);
    };
    switch (p) {
        case SweepParam::Alpha:
            set_stable([value](auto& v) { v.alpha = value; });
            break;
        case SweepParam::ABar:
            set_stable([value](auto& v) { v.a_bar = value; });
            break;
        case SweepParam::B0:
        case SweepParam::Q0: {
            auto* pl = std::get_if<PowerLawCompetition>(&m.competition.value);
            if (pl == nullptr)
                throw ValidationError("sweep", "b0/q0 sweeps require power-law competition");
            if (p == SweepParam::B0)
                pl->b0 = value;
            else
                pl->q0 = value;
            break;
        }
        case SweepParam::Sigma:
            m.environment.sigma = value;
            break;
        case SweepParam::Beta:
            m.environment.beta = value;
            break;
    }
    return m;
}

PhaseDiagram phase_diagram(const ModelSpec& base, const SimConfig& cfg,
                           const SweepAxis& axis1, const SweepAxis& axis2,
                           int n_per_cell, int threads) {
    if (axis1.values.empty() || axis2.values.empty())
        throw ValidationError("phase_diagram", "axis value lists must be non-empty");
    if (n_per_cell < 1)
        throw ValidationError("phase_diagram.n_per_cell", "must be >= 1");

    PhaseDiagram out;
    out.axis1 = axis1;
    out.axis2 = axis2;
    out.cells.reserve(axis1.values.size() * axis2.values.size());

    std::uint64_t cell_index = 0;
    for (double v1 : axis1.values) {
        for (double v2 : axis2.values) {
            PhaseCell cell;
            cell.axis1_value = v1;
            cell.axis2_value = v2;
            try {
                ModelSpec m = apply_sweep_param(base, axis1.param, v1);
                m = apply_sweep_param(m, axis2.param, v2);
                validate_model(m);
                cell.verdict = classify_regime(m);
                cell.mc = estimate_explosion_prob(m, cfg, n_per_cell, threads, cell_index);
                cell.valid = true;
            } catch (const ValidationError&) {
                cell.valid = false;
            }
            out.cells.push_back(std::move(cell));
            ++cell_index;
        }
    }
    return out;
}

}  // namespace cble
