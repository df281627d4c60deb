#include "cble/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cble/errors.hpp"

namespace cble {

std::vector<double> make_y_grid(const YGridSpec& spec) {
    if (!(spec.y_min > 0.0) || !(spec.y_max > spec.y_min))
        throw ValidationError("y_grid", "requires 0 < y_min < y_max");
    if (spec.points_per_decade < 1)
        throw ValidationError("y_grid.points_per_decade", "must be >= 1");
    const double decades = std::log10(spec.y_max / spec.y_min);
    const int n = static_cast<int>(std::ceil(decades * spec.points_per_decade));
    std::mt19937_64 rng(spec.jitter_seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> grid;
    grid.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        double y = spec.y_min * std::pow(10.0, static_cast<double>(i) / spec.points_per_decade);
        const double j = u(rng);
        if (i > 0 && i < n) y *= 1.0 + spec.jitter * j;
        grid.push_back(std::min(y, spec.y_max));
    }
    grid.back() = spec.y_max;
    return grid;
}

TestFunction make_test_function(TestFunctionFamily family, double delta_or_level,
                                int n) {
    switch (family) {
        case TestFunctionFamily::ExpInversePower:
            return TestFunction::exp_inverse_power(delta_or_level);
        case TestFunctionFamily::LogLog:
            return TestFunction::log_log(n);
        case TestFunctionFamily::Linear:
            return TestFunction::linear();
        case TestFunctionFamily::Constant:
            return TestFunction::constant(delta_or_level == 0.0 ? 1.0 : delta_or_level);
        case TestFunctionFamily::ShiftedInverse:
            return TestFunction::shifted_inverse();
    }
    throw ValidationError("test_function.family", "unknown family");
}

std::optional<ExplosionCertificate> scan_explosion_criterion(
    const ModelSpec& m, std::span<const double> delta_grid, const YGridSpec& grid_spec,
    double d0) {
    if (delta_grid.empty())
        throw ValidationError("scan_explosion.delta_grid", "must be non-empty");
    if (!(d0 > 0.0)) throw ValidationError("scan_explosion.d0", "must be > 0");

    const double alpha = m.branching.mu.alpha();
    const auto grid = make_y_grid(grid_spec);

    for (double delta : delta_grid) {
        if (!(delta > 0.0))
            throw ValidationError("scan_explosion.delta_grid", "entries must be > 0");
        // the leading term ~ y^{1-alpha-delta} must diverge
        if (!(1.0 - alpha - delta > 0.0)) continue;

        const TestFunction g = TestFunction::exp_inverse_power(delta);
        std::vector<double> slack(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            slack[i] = generator_apply(m, g, grid[i]) - d0 * g(grid[i]);

        // smallest suffix start from which the inequality holds everywhere
        std::size_t start = grid.size();
        for (std::size_t i = grid.size(); i-- > 0;) {
            if (slack[i] < 0.0) break;
            start = i;
        }
        if (start == grid.size()) continue;
        // require at least one verified decade so a jitter fluke at the top
        // of the grid cannot certify on its own
        if (grid[start] > grid_spec.y_max / 10.0) continue;

        ExplosionCertificate cert;
        cert.delta = delta;
        cert.y_bar = grid[start];
        cert.d0 = d0;
        cert.margin = *std::min_element(slack.begin() + start, slack.end());
        return cert;
    }
    return std::nullopt;
}

double explosion_prob_lower_bound(const TestFunction& g, double y0, double y_bar) {
    if (!g.bounded())
        throw ValidationError("explosion_prob_lower_bound.g",
                              "requires a bounded test function");
    if (!(y_bar > 0.0) || !(y0 > 0.0))
        throw ValidationError("explosion_prob_lower_bound", "requires y0, y_bar > 0");
    const double v = (g(y0) - g(y_bar)) / g.sup_value();
    return std::clamp(v, 0.0, 1.0);
}

std::optional<NonexplosionEvidence> scan_nonexplosion_criterion(
    const ModelSpec& m, int n, double y_max, double k, int points_per_decade,
    std::uint64_t jitter_seed) {
    if (n < 9) throw ValidationError("scan_nonexplosion.n", "must be >= 9");
    if (!(y_max > 1.0 / n))
        throw ValidationError("scan_nonexplosion.y_max", "must exceed 1/n");
    if (!(k >= 2.0)) throw ValidationError("scan_nonexplosion.k", "must be >= 2");

    const TestFunction g = TestFunction::log_log(n);
    YGridSpec spec;
    spec.y_min = 1.0 / n;
    spec.y_max = y_max;
    spec.points_per_decade = points_per_decade;
    spec.jitter_seed = jitter_seed;
    const auto grid = make_y_grid(spec);

    std::vector<double> ratio(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        ratio[i] = generator_truncated(m, g, grid[i], k) / g(grid[i]);

    // unbounded-growth heuristic: monotone increase through the last decade
    std::size_t first_last_decade = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid[i] >= y_max / 10.0) {
            first_last_decade = i;
            break;
        }
    bool monotone_up = grid.size() - first_last_decade >= 4;
    for (std::size_t i = first_last_decade + 1; monotone_up && i < grid.size(); ++i)
        if (ratio[i] < ratio[i - 1]) monotone_up = false;
    if (monotone_up && ratio.back() > ratio[first_last_decade] * 1.01)
        return std::nullopt;

    // analytic boundedness of the dominant terms beyond y_max
    const double alpha = m.branching.mu.alpha();
    bool asymptotic_ok = false;
    if (alpha >= 1.0) {
        asymptotic_ok = true;
    } else if (const auto* p = m.competition.power_law()) {
        const double boundary = m.branching.mu.a_bar() * c_coeff(alpha, 0.0);
        asymptotic_ok = (p->q0 > 2.0 - alpha && p->b0 > 0.0) ||
                        (p->q0 == 2.0 - alpha && p->b0 >= boundary);
    }
    if (!asymptotic_ok) return std::nullopt;

    NonexplosionEvidence ev;
    ev.n = n;
    ev.d_n = std::max(*std::max_element(ratio.begin(), ratio.end()), 1e-6);
    ev.y_max = y_max;
    ev.asymptotic_ok = asymptotic_ok;
    return ev;
}

}  // namespace cble
