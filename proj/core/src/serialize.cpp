#include "cble/serialize.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "cble/errors.hpp"

namespace cble::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// model <-> json
// ---------------------------------------------------------------------------

namespace {

json mu_to_json(const JumpMeasureSpec& mu) {
    json j;
    if (const auto* ps = std::get_if<PureStable>(&mu.value)) {
        j["type"] = "pure_stable";
        j["a_bar"] = ps->a_bar;
        j["alpha"] = ps->alpha;
    } else {
        const auto& s = std::get<StableTailPlusFinite>(mu.value);
        j["type"] = "stable_tail_plus_finite";
        j["a_bar"] = s.a_bar;
        j["alpha"] = s.alpha;
        j["A"] = s.A;
        json atoms = json::array();
        for (const auto& at : s.atoms) atoms.push_back({{"mass", at.mass}, {"size", at.size}});
        j["atoms"] = atoms;
    }
    return j;
}

JumpMeasureSpec mu_from_json(const json& j) {
    JumpMeasureSpec mu;
    const std::string type = j.at("type").get<std::string>();
    if (type == "pure_stable") {
        mu.value = PureStable{j.at("a_bar").get<double>(), j.at("alpha").get<double>()};
    } else if (type == "stable_tail_plus_finite") {
        StableTailPlusFinite s;
        s.a_bar = j.at("a_bar").get<double>();
        s.alpha = j.at("alpha").get<double>();
        s.A = j.at("A").get<double>();
        for (const auto& at : j.value("atoms", json::array()))
            s.atoms.push_back({at.at("mass").get<double>(), at.at("size").get<double>()});
        mu.value = s;
    } else {
        throw ConfigError("mu.type: unknown jump measure type '" + type + "'");
    }
    return mu;
}

json law_to_json(const EnvJumpLaw& law) {
    json j;
    if (const auto* pm = std::get_if<EnvPointMass>(&law)) {
        j["type"] = "point";
        j["z"] = pm->z;
    } else if (const auto* u = std::get_if<EnvUniform>(&law)) {
        j["type"] = "uniform";
        j["a"] = u->a;
        j["b"] = u->b;
    } else {
        j["type"] = "laplace";
        j["lambda"] = std::get<EnvTwoSidedExponential>(law).lambda;
    }
    return j;
}

EnvJumpLaw law_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "point") return EnvPointMass{j.at("z").get<double>()};
    if (type == "uniform")
        return EnvUniform{j.at("a").get<double>(), j.at("b").get<double>()};
    if (type == "laplace" || type == "two_sided_exponential")
        return EnvTwoSidedExponential{j.at("lambda").get<double>()};
    throw ConfigError("environment law: unknown type '" + type + "'");
}

json competition_to_json(const CompetitionSpec& c) {
    json j;
    if (const auto* p = c.power_law()) {
        j["type"] = "power_law";
        j["b0"] = p->b0;
        j["q0"] = p->q0;
        j["A"] = p->A;
    } else {
        const auto& t = std::get<TabulatedCompetition>(c.value);
        j["type"] = "tabulated";
        json bp = json::array();
        for (const auto& [y, v] : t.breakpoints) bp.push_back({y, v});
        j["breakpoints"] = bp;
    }
    return j;
}

CompetitionSpec competition_from_json(const json& j) {
    CompetitionSpec c;
    const std::string type = j.at("type").get<std::string>();
    if (type == "power_law") {
        c.value = PowerLawCompetition{j.at("b0").get<double>(), j.at("q0").get<double>(),
                                      j.value("A", 0.0)};
    } else if (type == "tabulated") {
        TabulatedCompetition t;
        for (const auto& bp : j.at("breakpoints"))
            t.breakpoints.emplace_back(bp.at(0).get<double>(), bp.at(1).get<double>());
        c.value = t;
    } else {
        throw ConfigError("competition.type: unknown type '" + type + "'");
    }
    return c;
}

json model_to_json_obj(const ModelSpec& m) {
    json env_jumps = json::array();
    for (const auto& c : m.environment.nu)
        env_jumps.push_back({{"rate", c.rate}, {"law", law_to_json(c.law)}});
    return json{
        {"y0", m.y0},
        {"branching",
         {{"b1", m.branching.b1}, {"b2", m.branching.b2}, {"mu", mu_to_json(m.branching.mu)}}},
        {"environment",
         {{"beta", m.environment.beta},
          {"sigma", m.environment.sigma},
          {"jumps", env_jumps}}},
        {"competition", competition_to_json(m.competition)},
    };
}

ModelSpec model_from_json_obj(const json& j) {
    ModelSpec m;
    m.y0 = j.at("y0").get<double>();
    const auto& b = j.at("branching");
    m.branching.b1 = b.value("b1", 0.0);
    m.branching.b2 = b.value("b2", 0.0);
    m.branching.mu = mu_from_json(b.at("mu"));
    if (j.contains("environment")) {
        const auto& e = j.at("environment");
        m.environment.beta = e.value("beta", 0.0);
        m.environment.sigma = e.value("sigma", 0.0);
        for (const auto& c : e.value("jumps", json::array()))
            m.environment.nu.push_back(
                {c.at("rate").get<double>(), law_from_json(c.at("law"))});
    }
    if (j.contains("competition")) m.competition = competition_from_json(j.at("competition"));
    return m;
}

json sim_to_json_obj(const SimConfig& c) {
    return json{
        {"dt_max", c.dt_max},
        {"eps_jump", c.eps_jump},
        {"K_explode", c.K_explode},
        {"T_horizon", c.T_horizon},
        {"seed", c.seed},
        {"record_grid", c.record_grid},
        {"track_levels", c.track_levels},
        {"branching_jumps_enabled", c.branching_jumps_enabled},
    };
}

SimConfig sim_from_json_obj(const json& j) {
    SimConfig c;
    c.dt_max = j.value("dt_max", c.dt_max);
    c.eps_jump = j.value("eps_jump", c.eps_jump);
    c.K_explode = j.value("K_explode", c.K_explode);
    c.T_horizon = j.value("T_horizon", c.T_horizon);
    c.seed = j.value("seed", c.seed);
    c.record_grid = j.value("record_grid", c.record_grid);
    c.track_levels = j.value("track_levels", std::vector<double>{});
    c.branching_jumps_enabled = j.value("branching_jumps_enabled", true);
    return c;
}

json parse_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("malformed JSON");
    return j;
}

}  // namespace

std::string to_json(const ModelSpec& m) { return model_to_json_obj(m).dump(2); }
std::string to_json(const SimConfig& c) { return sim_to_json_obj(c).dump(2); }

ModelSpec model_from_json(const std::string& text) {
    return validate_model(model_from_json_obj(parse_text(text)));
}

SimConfig sim_config_from_json(const std::string& text) {
    return validate_sim_config(sim_from_json_obj(parse_text(text)));
}

// ---------------------------------------------------------------------------
// paths
// ---------------------------------------------------------------------------

void write_path_csv(const PathRecord& rec, std::ostream& os) {
    os << kSchemaHeader << "\n";
    os << "t,y\n";
    for (const auto& [t, y] : rec.samples)
        os << format_double(t) << ',' << format_double(y) << "\n";
}

std::string to_json(const PathRecord& rec) {
    json samples = json::array();
    for (const auto& [t, y] : rec.samples) samples.push_back({t, y});
    json hits = json::array();
    for (const auto& [level, h] : rec.tau_hits) {
        json e{{"level", level}};
        if (h.tau_minus) e["tau_minus"] = *h.tau_minus;
        if (h.tau_plus) e["tau_plus"] = *h.tau_plus;
        hits.push_back(e);
    }
    json env = json::array();
    for (const auto& ev : rec.env_jump_log)
        env.push_back({{"t", ev.t}, {"z", ev.z}, {"applied", ev.applied}});
    json j{
        {"samples", samples},
        {"tau_hits", hits},
        {"exploded", rec.exploded},
        {"env_jump_log", env},
    };
    if (rec.tau_explode) j["tau_explode"] = *rec.tau_explode;
    if (rec.truncation_level) j["truncation_level"] = *rec.truncation_level;
    return j.dump(2);
}

PathRecord path_record_from_json(const std::string& text) {
    const json j = parse_text(text);
    PathRecord rec;
    for (const auto& s : j.at("samples"))
        rec.samples.emplace_back(s.at(0).get<double>(), s.at(1).get<double>());
    for (const auto& h : j.value("tau_hits", json::array())) {
        HitTimes ht;
        if (h.contains("tau_minus")) ht.tau_minus = h.at("tau_minus").get<double>();
        if (h.contains("tau_plus")) ht.tau_plus = h.at("tau_plus").get<double>();
        rec.tau_hits[h.at("level").get<double>()] = ht;
    }
    rec.exploded = j.value("exploded", false);
    if (j.contains("tau_explode")) rec.tau_explode = j.at("tau_explode").get<double>();
    if (j.contains("truncation_level"))
        rec.truncation_level = j.at("truncation_level").get<double>();
    for (const auto& e : j.value("env_jump_log", json::array()))
        rec.env_jump_log.push_back({e.at("t").get<double>(), e.at("z").get<double>(),
                                    e.value("applied", true)});
    // structural re-validation
    double prev = -1.0;
    for (const auto& [t, y] : rec.samples) {
        if (!(t > prev)) throw ValidationError("path.samples", "times must increase");
        if (y < 0.0) throw ValidationError("path.samples", "states must be >= 0");
        prev = t;
    }
    return rec;
}

// ---------------------------------------------------------------------------
// results
// ---------------------------------------------------------------------------

std::string to_json(const MCResult& r) {
    json j{
        {"n_paths", r.n_paths},
        {"n_exploded", r.n_exploded},
        {"n_failed", r.n_failed},
        {"estimate", r.estimate},
        {"ci_low", r.ci_low},
        {"ci_high", r.ci_high},
        {"config", sim_to_json_obj(r.config_echo)},
    };
    if (r.mean_tau_K) j["mean_tau_K"] = *r.mean_tau_K;
    return j.dump(2);
}

MCResult mc_result_from_json(const std::string& text) {
    const json j = parse_text(text);
    MCResult r;
    r.n_paths = j.at("n_paths").get<int>();
    r.n_exploded = j.at("n_exploded").get<int>();
    r.n_failed = j.value("n_failed", 0);
    r.estimate = j.at("estimate").get<double>();
    r.ci_low = j.at("ci_low").get<double>();
    r.ci_high = j.at("ci_high").get<double>();
    if (j.contains("mean_tau_K")) r.mean_tau_K = j.at("mean_tau_K").get<double>();
    r.config_echo = sim_from_json_obj(j.at("config"));
    if (r.n_exploded > r.n_paths || r.n_exploded < 0)
        throw ValidationError("mc_result", "n_exploded must lie in [0, n_paths]");
    if (!(0.0 <= r.ci_low && r.ci_low <= r.estimate && r.estimate <= r.ci_high &&
          r.ci_high <= 1.0))
        throw ValidationError("mc_result", "confidence interval out of order");
    return r;
}

std::string to_json(const RegimeVerdict& v) {
    json j{
        {"verdict", cble::to_string(v.verdict)},
        {"clause", cble::to_string(v.clause)},
        {"clause_text", clause_human_text(v.clause)},
        {"assumptions_used", v.assumptions_used},
    };
    if (std::isfinite(v.boundary_b0)) j["boundary_b0"] = v.boundary_b0;
    return j.dump(2);
}

std::string to_json(const ExplosionCertificate& c) {
    return json{{"found", true},
                {"delta", c.delta},
                {"y_bar", c.y_bar},
                {"d0", c.d0},
                {"margin", c.margin}}
        .dump(2);
}

std::string to_json(const std::optional<ExplosionCertificate>& c) {
    if (!c) return json{{"found", false}}.dump(2);
    return to_json(*c);
}

ExplosionCertificate certificate_from_json(const std::string& text) {
    const json j = parse_text(text);
    if (!j.value("found", false))
        throw ValidationError("certificate", "parsing a not-found scan result");
    ExplosionCertificate c;
    c.delta = j.at("delta").get<double>();
    c.y_bar = j.at("y_bar").get<double>();
    c.d0 = j.at("d0").get<double>();
    c.margin = j.at("margin").get<double>();
    if (!(c.y_bar > 0.0) || !(c.d0 > 0.0) || c.margin < 0.0)
        throw ValidationError("certificate", "invariants violated");
    return c;
}

std::string to_json(const NonexplosionEvidence& e) {
    return json{{"found", true},
                {"n", e.n},
                {"d_n", e.d_n},
                {"y_max", e.y_max},
                {"asymptotic_ok", e.asymptotic_ok}}
        .dump(2);
}

std::string to_json(const std::optional<NonexplosionEvidence>& e) {
    if (!e) return json{{"found", false}}.dump(2);
    return to_json(*e);
}

NonexplosionEvidence evidence_from_json(const std::string& text) {
    const json j = parse_text(text);
    if (!j.value("found", false))
        throw ValidationError("evidence", "parsing a not-found scan result");
    NonexplosionEvidence e;
    e.n = j.at("n").get<int>();
    e.d_n = j.at("d_n").get<double>();
    e.y_max = j.at("y_max").get<double>();
    e.asymptotic_ok = j.at("asymptotic_ok").get<bool>();
    if (!(e.d_n > 0.0)) throw ValidationError("evidence", "d_n must be > 0");
    return e;
}

// ---------------------------------------------------------------------------
// phase diagrams
// ---------------------------------------------------------------------------

void write_phase_csv(const PhaseDiagram& d, std::ostream& os) {
    os << kSchemaHeader << "\n";
    os << "axis1_value,axis2_value,verdict,clause,estimate,ci_low,ci_high,"
          "n_exploded,n_paths\n";
    for (const auto& c : d.cells) {
        os << format_double(c.axis1_value) << ',' << format_double(c.axis2_value) << ',';
        if (!c.valid) {
            os << "Invalid,,nan,nan,nan,0,0\n";
            continue;
        }
        os << cble::to_string(c.verdict.verdict) << ',' << cble::to_string(c.verdict.clause)
           << ',' << format_double(c.mc.estimate) << ',' << format_double(c.mc.ci_low)
           << ',' << format_double(c.mc.ci_high) << ',' << c.mc.n_exploded << ','
           << c.mc.n_paths << "\n";
    }
}

std::string to_json(const PhaseDiagram& d) {
    json cells = json::array();
    for (const auto& c : d.cells) {
        json e{
            {"axis1_value", c.axis1_value},
            {"axis2_value", c.axis2_value},
            {"valid", c.valid},
        };
        if (c.valid) {
            e["verdict"] = cble::to_string(c.verdict.verdict);
            e["clause"] = cble::to_string(c.verdict.clause);
            e["estimate"] = c.mc.estimate;
            e["ci_low"] = c.mc.ci_low;
            e["ci_high"] = c.mc.ci_high;
            e["n_exploded"] = c.mc.n_exploded;
            e["n_paths"] = c.mc.n_paths;
        }
        cells.push_back(e);
    }
    json j{
        {"axis1", {{"param", cble::to_string(d.axis1.param)}, {"values", d.axis1.values}}},
        {"axis2", {{"param", cble::to_string(d.axis2.param)}, {"values", d.axis2.values}}},
        {"cells", cells},
    };
    return j.dump(2);
}

}  // namespace cble::io
