#include "cble/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cble/errors.hpp"
#include "cble/quadrature.hpp"

namespace cble {

namespace {

constexpr double kEulerGamma = 0.5772156649015329;

bool finite(double x) { return std::isfinite(x); }

// int_{(lo,hi]} z^p * a z^{-1-alpha} dz over the stable density support.
double stable_moment(double a_bar, double alpha, double cut, double p,
                     double lo, double hi) {
    lo = std::max(lo, cut);
    if (!(hi > lo)) return 0.0;
    const double e = p - alpha;
    if (std::abs(e) < 1e-14) {
        return a_bar * std::log(hi / lo);
    }
    if (std::isinf(hi)) {
        if (e >= 0.0) return std::numeric_limits<double>::infinity();
        return -a_bar * std::pow(lo, e) / e;
    }
    return a_bar * (std::pow(hi, e) - std::pow(lo, e)) / e;
}

}  // namespace

double JumpMeasureSpec::alpha() const {
    return std::visit([](const auto& v) { return v.alpha; }, value);
}

double JumpMeasureSpec::a_bar() const {
    return std::visit([](const auto& v) { return v.a_bar; }, value);
}

double JumpMeasureSpec::stable_cut() const {
    if (const auto* s = std::get_if<StableTailPlusFinite>(&value)) return s->A;
    return 0.0;
}

const std::vector<JumpAtom>* JumpMeasureSpec::atoms() const {
    if (const auto* s = std::get_if<StableTailPlusFinite>(&value)) return &s->atoms;
    return nullptr;
}

double mu_tail_mass(const JumpMeasureSpec& m, double x) {
    if (!(x > 0.0)) throw ValidationError("mu_tail_mass.x", "must be > 0");
    const double a = m.a_bar();
    const double al = m.alpha();
    const double lo = std::max(x, m.stable_cut());
    double mass = a * std::pow(lo, -al) / al;
    if (const auto* atoms = m.atoms()) {
        for (const auto& at : *atoms)
            if (at.size >= x) mass += at.mass;
    }
    return mass;
}

double mu_partial_first_moment(const JumpMeasureSpec& m, double lo, double hi) {
    double v = stable_moment(m.a_bar(), m.alpha(), m.stable_cut(), 1.0, lo, hi);
    if (const auto* atoms = m.atoms()) {
        for (const auto& at : *atoms)
            if (at.size >= lo && at.size < hi) v += at.mass * at.size;
    }
    return v;
}

double mu_small_second_moment(const JumpMeasureSpec& m, double x) {
    double v = stable_moment(m.a_bar(), m.alpha(), m.stable_cut(), 2.0, 0.0, x);
    if (const auto* atoms = m.atoms()) {
        for (const auto& at : *atoms)
            if (at.size < x) v += at.mass * at.size * at.size;
    }
    return v;
}

namespace {

// int_{(cut,inf)} (e^{-lz} - 1 + lz 1_{z<1}) a z^{-1-alpha} dz.
// cut = 0 has a closed form; cut > 0 falls back to quadrature.
double stable_jump_integral(double a, double alpha, double cut, double l) {
    if (l == 0.0) return 0.0;
    if (cut == 0.0) {
        if (alpha < 1.0) {
            // int (e^{-lz}-1) = -Gamma(1-alpha)/alpha l^alpha; compensation adds l/(1-alpha)
            return a * (-std::tgamma(1.0 - alpha) / alpha * std::pow(l, alpha) +
                        l / (1.0 - alpha));
        }
        if (alpha == 1.0) {
            return a * l * (kEulerGamma - 1.0 + std::log(l));
        }
        // alpha in (1,2): fully compensated integral minus the z>=1 linear part
        return a * (std::tgamma(2.0 - alpha) / (alpha * (alpha - 1.0)) *
                        std::pow(l, alpha) -
                    l / (alpha - 1.0));
    }
    quad::Options opts;
    double v = 0.0;
    if (cut < 1.0) {
        auto f = [&](double z) {
            return (std::expm1(-l * z) + l * z) * a * std::pow(z, -1.0 - alpha);
        };
        v += quad::integrate(f, cut, 1.0, opts).value;
    }
    auto g = [&](double z) { return std::expm1(-l * z) * a * std::pow(z, -1.0 - alpha); };
    v += quad::integrate_tail(g, std::max(cut, 1.0), opts).value;
    return v;
}

}  // namespace

double phi(const BranchingSpec& b, double lambda) {
    if (!(lambda >= 0.0)) throw ValidationError("phi.lambda", "must be >= 0");
    if (lambda == 0.0) return 0.0;
    double v = -b.b1 * lambda + b.b2 * b.b2 * lambda * lambda;
    v += stable_jump_integral(b.mu.a_bar(), b.mu.alpha(), b.mu.stable_cut(), lambda);
    if (const auto* atoms = b.mu.atoms()) {
        for (const auto& at : *atoms) {
            double term = std::expm1(-lambda * at.size);
            if (at.size < 1.0) term += lambda * at.size;
            v += at.mass * term;
        }
    }
    return v;
}

double EnvironmentSpec::total_rate() const {
    double r = 0.0;
    for (const auto& c : nu) r += c.rate;
    return r;
}

namespace {
// expm1(x)/x with the x -> 0 limit
double em1(double x) { return std::abs(x) < 1e-12 ? 1.0 + 0.5 * x : std::expm1(x) / x; }
}  // namespace

double env_exp_compensator(const EnvironmentSpec& e) {
    double v = 0.0;
    for (const auto& c : e.nu) {
        if (const auto* pm = std::get_if<EnvPointMass>(&c.law)) {
            if (std::abs(pm->z) <= 1.0) v += c.rate * std::expm1(pm->z);
        } else if (const auto* u = std::get_if<EnvUniform>(&c.law)) {
            const double lo = std::max(u->a, -1.0);
            const double hi = std::min(u->b, 1.0);
            if (lo < hi)
                v += c.rate * (std::exp(hi) - std::exp(lo) - (hi - lo)) / (u->b - u->a);
        } else {
            const double lam = std::get<EnvTwoSidedExponential>(c.law).lambda;
            const double neg = em1(-(1.0 + lam)) - em1(-lam);
            const double pos = em1(1.0 - lam) - em1(-lam);
            v += c.rate * 0.5 * lam * (neg + pos);
        }
    }
    return v;
}

const PowerLawCompetition* CompetitionSpec::power_law() const {
    return std::get_if<PowerLawCompetition>(&value);
}

double competition_eval(const CompetitionSpec& c, double y) {
    if (!(y >= 0.0)) throw ValidationError("competition_eval.y", "must be >= 0");
    if (y == 0.0) return 0.0;
    if (const auto* p = c.power_law()) {
        if (p->b0 == 0.0) return 0.0;
        if (y >= p->A || p->A == 0.0) return p->b0 * std::pow(y, p->q0);
        // linear fill from (0,0) to (A, b0 A^{q0})
        return y / p->A * p->b0 * std::pow(p->A, p->q0);
    }
    const auto& bp = std::get<TabulatedCompetition>(c.value).breakpoints;
    if (bp.empty()) return 0.0;
    if (y >= bp.back().first) return bp.back().second;
    auto it = std::upper_bound(bp.begin(), bp.end(), y,
                               [](double v, const auto& p) { return v < p.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (y - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
}

namespace {

void validate_jump_measure(const JumpMeasureSpec& m) {
    const double al = m.alpha();
    const double a = m.a_bar();
    if (!finite(al) || !(al > 0.0) || !(al < 2.0))
        throw ValidationError("mu.alpha", "stability index must lie in (0, 2)");
    if (!finite(a) || !(a > 0.0))
        throw ValidationError("mu.a_bar", "tail amplitude must be > 0");
    if (const auto* s = std::get_if<StableTailPlusFinite>(&m.value)) {
        if (!finite(s->A) || !(s->A > 0.0))
            throw ValidationError("mu.A", "cut point must be > 0");
        for (std::size_t i = 0; i < s->atoms.size(); ++i) {
            const auto& at = s->atoms[i];
            const std::string f = "mu.atoms[" + std::to_string(i) + "]";
            if (!finite(at.mass) || at.mass < 0.0)
                throw ValidationError(f + ".mass", "must be >= 0");
            if (!finite(at.size) || !(at.size > 0.0) || at.size > s->A)
                throw ValidationError(f + ".size", "must lie in (0, A]");
        }
    }
    // int (1 ^ z^2) mu < inf: spot-check that tail masses are finite
    for (double x : {0.1, 1.0, 10.0}) {
        if (!finite(mu_tail_mass(m, x)))
            throw ValidationError("mu", "tail mass not finite at x=" + std::to_string(x));
    }
}

void validate_environment(const EnvironmentSpec& e) {
    if (!finite(e.beta)) throw ValidationError("environment.beta", "must be finite");
    if (!finite(e.sigma) || e.sigma < 0.0)
        throw ValidationError("environment.sigma", "must be >= 0");
    for (std::size_t i = 0; i < e.nu.size(); ++i) {
        const auto& c = e.nu[i];
        const std::string f = "environment.nu[" + std::to_string(i) + "]";
        if (!finite(c.rate) || !(c.rate > 0.0))
            throw ValidationError(f + ".rate", "must be > 0");
        if (const auto* pm = std::get_if<EnvPointMass>(&c.law)) {
            if (!finite(pm->z)) throw ValidationError(f + ".z", "must be finite");
        } else if (const auto* u = std::get_if<EnvUniform>(&c.law)) {
            if (!finite(u->a) || !finite(u->b) || !(u->a < u->b))
                throw ValidationError(f + ".uniform", "requires finite a < b");
        } else if (const auto* te = std::get_if<EnvTwoSidedExponential>(&c.law)) {
            if (!finite(te->lambda) || !(te->lambda > 0.0))
                throw ValidationError(f + ".lambda", "must be > 0");
        }
    }
    if (!finite(e.total_rate()))
        throw ValidationError("environment.nu", "total rate must be finite");
}

void validate_competition(const CompetitionSpec& c) {
    if (const auto* p = c.power_law()) {
        if (!finite(p->b0) || p->b0 < 0.0)
            throw ValidationError("competition.b0", "must be >= 0");
        if (!finite(p->q0)) throw ValidationError("competition.q0", "must be finite");
        if (!finite(p->A) || p->A < 0.0)
            throw ValidationError("competition.A", "must be >= 0");
        if (p->b0 > 0.0) {
            // b0(0)=0 with continuity and monotonicity forces a positive
            // exponent when A=0, and a non-negative one in general.
            if (p->A == 0.0 && !(p->q0 > 0.0))
                throw ValidationError("competition.q0",
                                      "power law with A=0 needs q0 > 0 to keep "
                                      "b0 continuous and non-decreasing at 0");
            if (p->q0 < 0.0)
                throw ValidationError("competition.q0",
                                      "negative exponent makes b0 decreasing");
        }
    } else {
        const auto& bp = std::get<TabulatedCompetition>(c.value).breakpoints;
        if (bp.empty() || bp.front().first != 0.0 || bp.front().second != 0.0)
            throw ValidationError("competition.breakpoints",
                                  "first breakpoint must be (0, 0)");
        for (std::size_t i = 0; i < bp.size(); ++i) {
            const std::string f = "competition.breakpoints[" + std::to_string(i) + "]";
            if (!finite(bp[i].first) || !finite(bp[i].second))
                throw ValidationError(f, "must be finite");
            if (i > 0) {
                if (!(bp[i].first > bp[i - 1].first))
                    throw ValidationError(f, "y values must be strictly increasing");
                if (bp[i].second < bp[i - 1].second)
                    throw ValidationError(f, "values must be non-decreasing");
            }
        }
    }
    // realized-function check on a grid, as a backstop for both variants
    double prev = competition_eval(c, 0.0);
    if (prev != 0.0)
        throw ValidationError("competition", "b0(0) must equal 0");
    for (double y = 0.125; y <= 1024.0; y *= 2.0) {
        const double v = competition_eval(c, y);
        if (!finite(v) || v < prev - 1e-12 * std::max(1.0, std::abs(prev)))
            throw ValidationError("competition",
                                  "realized b0 is not non-decreasing near y=" +
                                      std::to_string(y));
        prev = v;
    }
}

}  // namespace

ModelSpec validate_model(const ModelSpec& raw) {
    if (!finite(raw.branching.b1))
        throw ValidationError("branching.b1", "must be finite");
    if (!finite(raw.branching.b2))
        throw ValidationError("branching.b2", "must be finite");
    validate_jump_measure(raw.branching.mu);
    validate_environment(raw.environment);
    validate_competition(raw.competition);
    if (!finite(raw.y0) || raw.y0 < 0.0)
        throw ValidationError("y0", "initial state must be >= 0");
    return raw;
}

}  // namespace cble
