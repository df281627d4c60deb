#include "cble/classify.hpp"

#include <cmath>
#include <limits>

#include "cble/analytics.hpp"

namespace cble {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::ExplodesWPP: return "ExplodesWPP";
        case Verdict::NonExplosive: return "NonExplosive";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    return "?";
}

std::string to_string(RegimeClause c) {
    switch (c) {
        case RegimeClause::AlphaGeOne: return "alpha_ge_1";
        case RegimeClause::SupercriticalCompetition: return "supercritical_competition";
        case RegimeClause::CriticalCompetitionStrong: return "critical_competition_strong";
        case RegimeClause::NoCompetition: return "no_competition";
        case RegimeClause::WeakCompetitionExponent: return "weak_competition_exponent";
        case RegimeClause::CriticalCompetitionWeak: return "critical_competition_weak";
        case RegimeClause::CompetitionShapeUnsupported:
            return "competition_shape_unsupported";
    }
    return "?";
}

std::string clause_human_text(RegimeClause c) {
    switch (c) {
        case RegimeClause::AlphaGeOne:
            return "alpha >= 1: branching jumps are too light to explode";
        case RegimeClause::SupercriticalCompetition:
            return "q0 > 2 - alpha with b0 > 0: competition outgrows the jump influx";
        case RegimeClause::CriticalCompetitionStrong:
            return "q0 = 2 - alpha with b0 >= a_bar c_{alpha,0}: competition at or "
                   "above the critical amplitude";
        case RegimeClause::NoCompetition:
            return "b0 = 0 with alpha < 1: unchecked heavy-tailed growth";
        case RegimeClause::WeakCompetitionExponent:
            return "q0 < 2 - alpha with b0 > 0: competition exponent too small";
        case RegimeClause::CriticalCompetitionWeak:
            return "q0 = 2 - alpha with 0 < b0 < a_bar c_{alpha,0}: competition below "
                   "the critical amplitude";
        case RegimeClause::CompetitionShapeUnsupported:
            return "tabulated competition: no global power-law bound available";
    }
    return "?";
}

RegimeVerdict classify_regime(const ModelSpec& m) {
    RegimeVerdict out;
    const double alpha = m.branching.mu.alpha();
    const double a_bar = m.branching.mu.a_bar();
    out.boundary_b0 = std::numeric_limits<double>::quiet_NaN();

    const bool exact_tail = m.branching.mu.atoms() == nullptr;
    out.assumptions_used.push_back(
        exact_tail ? "mu tail equals a_bar z^{-1-alpha} on (0, inf): both tail "
                     "comparisons hold"
                   : "mu tail equals a_bar z^{-1-alpha} beyond A: both tail "
                     "comparisons hold beyond A");

    const auto* p = m.competition.power_law();
    if (p == nullptr) {
        if (alpha < 1.0) out.boundary_b0 = a_bar * c_coeff(alpha, 0.0);
        out.verdict = Verdict::Indeterminate;
        out.clause = RegimeClause::CompetitionShapeUnsupported;
        out.assumptions_used.push_back("competition has no power-law envelope");
        return out;
    }
    out.assumptions_used.push_back(
        "b0(y) equals b0 y^{q0} for y >= A: both competition comparisons hold");

    if (alpha >= 1.0) {
        out.verdict = Verdict::NonExplosive;
        out.clause = RegimeClause::AlphaGeOne;
        return out;
    }

    const double boundary = a_bar * c_coeff(alpha, 0.0);
    out.boundary_b0 = boundary;
    const double crit_q = 2.0 - alpha;  // > 1 since alpha < 1

    if (p->q0 > crit_q && p->b0 > 0.0) {
        out.verdict = Verdict::NonExplosive;
        out.clause = RegimeClause::SupercriticalCompetition;
    } else if (p->q0 == crit_q && p->b0 >= boundary) {
        out.verdict = Verdict::NonExplosive;
        out.clause = RegimeClause::CriticalCompetitionStrong;
    } else if (p->b0 == 0.0) {
        out.verdict = Verdict::ExplodesWPP;
        out.clause = RegimeClause::NoCompetition;
    } else if (p->q0 < crit_q) {
        out.verdict = Verdict::ExplodesWPP;
        out.clause = RegimeClause::WeakCompetitionExponent;
    } else {
        // q0 == crit_q and 0 < b0 < boundary; every other cell is covered
        // above, so power-law models never come out Indeterminate.
        out.verdict = Verdict::ExplodesWPP;
        out.clause = RegimeClause::CriticalCompetitionWeak;
    }
    return out;
}

}  // namespace cble
