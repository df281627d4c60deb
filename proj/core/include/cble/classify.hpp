#pragma once

#include <string>
#include <vector>

#include "cble/model.hpp"

namespace cble {

/// ExplodesWPP means "explodes with positive probability for large enough
/// initial states" -- not almost-sure explosion, and not for every y0.
enum class Verdict { ExplodesWPP, NonExplosive, Indeterminate };

/// Which condition of the decision table fired.
enum class RegimeClause {
    AlphaGeOne,               // alpha >= 1: nonexplosive regardless of competition
    SupercriticalCompetition, // alpha < 1, q0 > 2-alpha, b0 > 0: nonexplosive
    CriticalCompetitionStrong,// alpha < 1, q0 = 2-alpha, b0 >= a_bar c_{alpha,0}
    NoCompetition,            // alpha < 1, b0 = 0: explodes wpp
    WeakCompetitionExponent,  // alpha < 1, q0 < 2-alpha, b0 > 0: explodes wpp
    CriticalCompetitionWeak,  // alpha < 1, q0 = 2-alpha, 0 < b0 < a_bar c_{alpha,0}
    CompetitionShapeUnsupported, // tabulated competition: no global power bound
};

std::string to_string(Verdict v);
std::string to_string(RegimeClause c);
std::string clause_human_text(RegimeClause c);

struct RegimeVerdict {
    Verdict verdict = Verdict::Indeterminate;
    RegimeClause clause = RegimeClause::CompetitionShapeUnsupported;
    std::vector<std::string> assumptions_used;
    /// a_bar * c_{alpha,0}, the critical competition amplitude at q0 = 2-alpha;
    /// NaN when alpha >= 1 (no boundary applies).
    double boundary_b0 = 0.0;
};

/// Total decision function on validated models whose mu carries a stable tail
/// (both variants do) and whose competition is a power law; tabulated
/// competition yields Indeterminate.
RegimeVerdict classify_regime(const ModelSpec& m);

}  // namespace cble
