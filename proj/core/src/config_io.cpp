#include "cble/config_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cble/errors.hpp"
#include "cble/serialize.hpp"

namespace cble {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct IniEntry {
    std::string value;
    int line = 0;
};

class IniData {
public:
    explicit IniData(const std::string& text) {
        std::istringstream in(text);
        std::string raw;
        std::string prefix;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            // strip full-line and trailing whitespace-delimited comments
            std::string s = raw;
            if (auto pos = s.find_first_of("#;"); pos != std::string::npos) {
                if (pos == 0 || trim(s.substr(0, pos)).empty() ||
                    std::isspace(static_cast<unsigned char>(s[pos - 1])))
                    s = s.substr(0, pos);
            }
            s = trim(s);
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']')
                    throw ConfigError("line " + std::to_string(line) +
                                      ": unterminated section header");
                prefix = trim(s.substr(1, s.size() - 2));
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(line) +
                                  ": expected 'key = value'");
            std::string key = trim(s.substr(0, eq));
            if (key.empty())
                throw ConfigError("line " + std::to_string(line) + ": empty key");
            if (!prefix.empty()) key = prefix + "." + key;
            if (entries_.count(key))
                throw ConfigError("line " + std::to_string(line) + ": duplicate key '" +
                                  key + "'");
            entries_[key] = {trim(s.substr(eq + 1)), line};
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    const IniEntry* fetch(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        consumed_.insert(key);
        return &it->second;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& why) const {
        const auto it = entries_.find(key);
        const std::string at =
            it != entries_.end() ? "line " + std::to_string(it->second.line) + ": " : "";
        throw ConfigError(at + key + ": " + why);
    }

    double get_double(const std::string& key, double fallback) {
        const auto* e = fetch(key);
        if (!e) return fallback;
        return parse_double(key, e->value);
    }

    double require_double(const std::string& key) {
        const auto* e = fetch(key);
        if (!e) throw ConfigError("missing required key '" + key + "'");
        return parse_double(key, e->value);
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
        const auto* e = fetch(key);
        if (!e) return fallback;
        char* end = nullptr;
        const auto v = std::strtoull(e->value.c_str(), &end, 10);
        if (end == e->value.c_str() || *end != '\0') fail(key, "not an unsigned integer");
        return v;
    }

    int get_int(const std::string& key, int fallback) {
        const double v = get_double(key, fallback);
        if (v != static_cast<int>(v)) fail(key, "not an integer");
        return static_cast<int>(v);
    }

    bool get_bool(const std::string& key, bool fallback) {
        const auto* e = fetch(key);
        if (!e) return fallback;
        std::string v = e->value;
        std::transform(v.begin(), v.end(), v.begin(), ::tolower);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        fail(key, "not a boolean");
    }

    std::string get_string(const std::string& key, std::string fallback) {
        const auto* e = fetch(key);
        return e ? e->value : fallback;
    }

    std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) {
        const auto* e = fetch(key);
        if (!e) return fallback;
        std::vector<double> out;
        for (const auto& tok : split(e->value)) out.push_back(parse_double(key, tok));
        return out;
    }

    void check_all_consumed() const {
        for (const auto& [key, e] : entries_) {
            if (!consumed_.count(key))
                throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" +
                                  key + "'");
        }
    }

    double parse_double(const std::string& key, const std::string& text) const {
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end == text.c_str() || *end != '\0')
            fail(key, "not a number: '" + text + "'");
        return v;
    }

    static std::vector<std::string> split(const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == ' ' || c == '\t' || c == ',') {
                if (!cur.empty()) out.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) out.push_back(cur);
        return out;
    }

private:
    std::map<std::string, IniEntry> entries_;
    std::set<std::string> consumed_;
};

// "rate*point(z)", "rate*uniform(a,b)", "rate*laplace(lambda)"
EnvJumpComponent parse_env_term(IniData& ini, const std::string& key,
                                const std::string& term) {
    const auto star = term.find('*');
    const auto open = term.find('(');
    const auto close = term.rfind(')');
    if (star == std::string::npos || open == std::string::npos ||
        close == std::string::npos || !(star < open && open < close))
        ini.fail(key, "expected rate*law(args), got '" + term + "'");
    EnvJumpComponent c;
    c.rate = ini.parse_double(key, term.substr(0, star));
    const std::string name = term.substr(star + 1, open - star - 1);
    std::vector<double> args;
    {
        std::string argstr = term.substr(open + 1, close - open - 1);
        std::replace(argstr.begin(), argstr.end(), ',', ' ');
        for (const auto& tok : IniData::split(argstr))
            args.push_back(ini.parse_double(key, tok));
    }
    if (name == "point" && args.size() == 1) {
        c.law = EnvPointMass{args[0]};
    } else if (name == "uniform" && args.size() == 2) {
        c.law = EnvUniform{args[0], args[1]};
    } else if (name == "laplace" && args.size() == 1) {
        c.law = EnvTwoSidedExponential{args[0]};
    } else {
        ini.fail(key, "unknown law or wrong arity in '" + term + "'");
    }
    return c;
}

ModelSpec model_from_ini(IniData& ini) {
    ModelSpec m;
    m.y0 = ini.get_double("model.y0", 1.0);
    m.branching.b1 = ini.get_double("model.branching.b1", 0.0);
    m.branching.b2 = ini.get_double("model.branching.b2", 0.0);

    const std::string mu_type =
        ini.get_string("model.branching.mu.type", "pure_stable");
    const double a_bar = ini.require_double("model.branching.mu.a_bar");
    const double alpha = ini.require_double("model.branching.mu.alpha");
    if (mu_type == "pure_stable") {
        m.branching.mu.value = PureStable{a_bar, alpha};
    } else if (mu_type == "stable_tail_plus_finite") {
        StableTailPlusFinite s;
        s.a_bar = a_bar;
        s.alpha = alpha;
        s.A = ini.require_double("model.branching.mu.A");
        if (const auto* e = ini.fetch("model.branching.mu.atoms")) {
            // "mass@size mass@size ..."
            for (const auto& tok : IniData::split(e->value)) {
                const auto at = tok.find('@');
                if (at == std::string::npos)
                    ini.fail("model.branching.mu.atoms", "expected mass@size");
                s.atoms.push_back(
                    {ini.parse_double("model.branching.mu.atoms", tok.substr(0, at)),
                     ini.parse_double("model.branching.mu.atoms", tok.substr(at + 1))});
            }
        }
        m.branching.mu.value = s;
    } else {
        ini.fail("model.branching.mu.type", "unknown type '" + mu_type + "'");
    }

    m.environment.beta = ini.get_double("model.environment.beta", 0.0);
    m.environment.sigma = ini.get_double("model.environment.sigma", 0.0);
    if (const auto* e = ini.fetch("model.environment.jumps")) {
        // comma-separated terms; each term has internal commas only inside ()
        std::vector<std::string> terms;
        std::string cur;
        int depth = 0;
        for (char ch : e->value) {
            if (ch == '(') ++depth;
            if (ch == ')') --depth;
            if (ch == ',' && depth == 0) {
                terms.push_back(trim(cur));
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (!trim(cur).empty()) terms.push_back(trim(cur));
        for (const auto& t : terms)
            m.environment.nu.push_back(parse_env_term(ini, "model.environment.jumps", t));
    }

    const std::string comp_type =
        ini.get_string("model.competition.type", "power_law");
    if (comp_type == "power_law") {
        PowerLawCompetition p;
        p.b0 = ini.get_double("model.competition.b0", 0.0);
        p.q0 = ini.get_double("model.competition.q0", 1.0);
        p.A = ini.get_double("model.competition.A", 0.0);
        m.competition.value = p;
    } else if (comp_type == "tabulated") {
        TabulatedCompetition t;
        const auto* e = ini.fetch("model.competition.breakpoints");
        if (!e) throw ConfigError("missing required key 'model.competition.breakpoints'");
        for (const auto& tok : IniData::split(e->value)) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos)
                ini.fail("model.competition.breakpoints", "expected y:value pairs");
            t.breakpoints.emplace_back(
                ini.parse_double("model.competition.breakpoints", tok.substr(0, colon)),
                ini.parse_double("model.competition.breakpoints", tok.substr(colon + 1)));
        }
        m.competition.value = t;
    } else {
        ini.fail("model.competition.type", "unknown type '" + comp_type + "'");
    }
    return m;
}

}  // namespace

RunConfig parse_run_config_ini(const std::string& text) {
    IniData ini(text);
    RunConfig rc;
    rc.model = model_from_ini(ini);

    rc.sim.dt_max = ini.get_double("sim.dt_max", rc.sim.dt_max);
    rc.sim.eps_jump = ini.get_double("sim.eps_jump", rc.sim.eps_jump);
    rc.sim.K_explode = ini.get_double("sim.K_explode", rc.sim.K_explode);
    rc.sim.T_horizon = ini.get_double("sim.T_horizon", rc.sim.T_horizon);
    rc.sim.seed = ini.get_u64("sim.seed", rc.sim.seed);
    rc.sim.record_grid = ini.get_double("sim.record_grid", rc.sim.record_grid);
    rc.sim.track_levels = ini.get_doubles("sim.track_levels", {});
    rc.sim.branching_jumps_enabled =
        ini.get_bool("sim.branching_jumps_enabled", true);

    rc.lyapunov.delta_grid = ini.get_doubles("lyapunov.delta_grid", rc.lyapunov.delta_grid);
    rc.lyapunov.y_min = ini.get_double("lyapunov.y_min", rc.lyapunov.y_min);
    rc.lyapunov.y_max = ini.get_double("lyapunov.y_max", rc.lyapunov.y_max);
    rc.lyapunov.points_per_decade =
        ini.get_int("lyapunov.points_per_decade", rc.lyapunov.points_per_decade);
    rc.lyapunov.n = ini.get_int("lyapunov.n", rc.lyapunov.n);
    rc.lyapunov.k = ini.get_double("lyapunov.k", rc.lyapunov.k);

    rc.mc_paths = ini.get_int("mc.paths", rc.mc_paths);

    rc.output.dir = ini.get_string("output.dir", rc.output.dir);
    const auto formats = IniData::split(ini.get_string("output.formats", "csv json"));
    rc.output.csv = std::find(formats.begin(), formats.end(), "csv") != formats.end();
    rc.output.json = std::find(formats.begin(), formats.end(), "json") != formats.end();

    ini.check_all_consumed();
    validate_model(rc.model);
    validate_sim_config(rc.sim);
    return rc;
}

RunConfig parse_run_config_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("malformed JSON config");
    RunConfig rc;
    if (!j.contains("model")) throw ConfigError("JSON config: missing 'model'");
    rc.model = io::model_from_json(j.at("model").dump());
    rc.sim = io::sim_config_from_json(j.value("sim", nlohmann::json::object()).dump());
    if (j.contains("lyapunov")) {
        const auto& l = j.at("lyapunov");
        rc.lyapunov.delta_grid = l.value("delta_grid", rc.lyapunov.delta_grid);
        rc.lyapunov.y_min = l.value("y_min", rc.lyapunov.y_min);
        rc.lyapunov.y_max = l.value("y_max", rc.lyapunov.y_max);
        rc.lyapunov.points_per_decade =
            l.value("points_per_decade", rc.lyapunov.points_per_decade);
        rc.lyapunov.n = l.value("n", rc.lyapunov.n);
        rc.lyapunov.k = l.value("k", rc.lyapunov.k);
    }
    if (j.contains("mc")) rc.mc_paths = j.at("mc").value("paths", rc.mc_paths);
    if (j.contains("output")) {
        const auto& o = j.at("output");
        rc.output.dir = o.value("dir", rc.output.dir);
        if (o.contains("formats")) {
            const auto f = o.at("formats").get<std::vector<std::string>>();
            rc.output.csv = std::find(f.begin(), f.end(), "csv") != f.end();
            rc.output.json = std::find(f.begin(), f.end(), "json") != f.end();
        }
    }
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool looks_json =
        (first != std::string::npos && text[first] == '{') ||
        (path.size() > 5 && path.substr(path.size() - 5) == ".json");
    try {
        return looks_json ? parse_run_config_json(text) : parse_run_config_ini(text);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace cble
