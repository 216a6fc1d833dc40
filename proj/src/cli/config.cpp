#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "liouville/cli.hpp"
#include "liouville/errors.hpp"

namespace liouville::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& origin, const std::string& key, const std::string& msg) {
    throw ConfigError(origin + ": key '" + key + "': " + msg);
}

double parse_real(const std::string& key, const std::string& v, const std::string& origin) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x))
        fail(origin, key, "expected a finite real, got '" + v + "'");
    return x;
}

long long parse_integer(const std::string& key, const std::string& v, const std::string& origin) {
    errno = 0;
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
        fail(origin, key, "expected an integer, got '" + v + "'");
    return x;
}

std::string parse_choice(const std::string& key, const std::string& v, const std::string& origin,
                         std::initializer_list<const char*> allowed) {
    std::string list;
    for (const char* a : allowed) {
        if (v == a) return v;
        list += list.empty() ? a : std::string(", ") + a;
    }
    fail(origin, key, "'" + v + "' is not one of " + list);
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        const auto reals = [&t](const char* name, double RunConfig::*field) {
            t[name] = [name, field](RunConfig& c, const std::string& v, const std::string& o) {
                c.*field = parse_real(name, v, o);
            };
        };
        const auto ints = [&t](const char* name, int RunConfig::*field) {
            t[name] = [name, field](RunConfig& c, const std::string& v, const std::string& o) {
                const long long x = parse_integer(name, v, o);
                if (x < 0 || x > 1000000) fail(o, name, "out of range");
                c.*field = static_cast<int>(x);
            };
        };
        reals("mu", &RunConfig::mu);
        reals("k", &RunConfig::k);
        reals("lambda", &RunConfig::lambda);
        reals("L", &RunConfig::L);
        reals("dx", &RunConfig::dx);
        reals("dt", &RunConfig::dt);
        reals("t0", &RunConfig::t0);
        reals("t_end", &RunConfig::t_end);
        reals("phi_max", &RunConfig::phi_max);
        reals("sponge_width", &RunConfig::sponge_width);
        reals("sponge_strength", &RunConfig::sponge_strength);
        reals("omega", &RunConfig::omega);
        reals("rapidity", &RunConfig::rapidity);
        reals("x0", &RunConfig::x0);
        reals("amplitude", &RunConfig::amplitude);
        reals("kappa", &RunConfig::kappa);
        reals("a", &RunConfig::a);
        reals("b", &RunConfig::b);
        reals("r", &RunConfig::r);
        reals("smoothness_threshold", &RunConfig::smoothness_threshold);
        reals("bundle_offset", &RunConfig::bundle_offset);
        reals("backlund_extent", &RunConfig::backlund_extent);
        ints("cover_points", &RunConfig::cover_points);
        ints("gauss_trials", &RunConfig::gauss_trials);
        ints("gauge_trials", &RunConfig::gauge_trials);
        t["boundary"] = [](RunConfig& c, const std::string& v, const std::string& o) {
            c.boundary = parse_choice("boundary", v, o, {"exact", "sponge"});
        };
        t["defect"] = [](RunConfig& c, const std::string& v, const std::string& o) {
            c.defect = parse_choice("defect", v, o, {"backlund", "none"});
        };
        t["initial"] = [](RunConfig& c, const std::string& v, const std::string& o) {
            c.initial =
                parse_choice("initial", v, o, {"backlund_pair", "cosh_time", "static_log", "wave", "file"});
        };
        t["phi2_source"] = [](RunConfig& c, const std::string& v, const std::string& o) {
            c.phi2_source = parse_choice("phi2_source", v, o, {"generated", "oracle"});
        };
        t["initial_file1"] = [](RunConfig& c, const std::string& v, const std::string&) { c.initial_file1 = v; };
        t["initial_file2"] = [](RunConfig& c, const std::string& v, const std::string&) { c.initial_file2 = v; };
        t["seed"] = [](RunConfig& c, const std::string& v, const std::string& o) {
            const long long x = parse_integer("seed", v, o);
            if (x < 0) fail(o, "seed", "must be non-negative");
            c.seed = static_cast<std::uint64_t>(x);
        };
        return t;
    }();
    return table;
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& origin) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(origin + ": unknown key '" + key + "'");
    it->second(cfg, value, origin);
}

void load_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string origin = path.string() + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(origin + ": expected key = value");
        apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), origin);
    }
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("--set " + assignment + ": expected key=value");
    apply_setting(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), "--set");
}

std::size_t half_line_points(double L, double dx) {
    const double cells = L / dx;
    const double rounded = std::round(cells);
    if (rounded < 3.0 || std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells)) {
        std::ostringstream msg;
        msg << "key 'dx': L / dx = " << cells << " must be an integer of at least 3";
        throw ConfigError(msg.str());
    }
    return static_cast<std::size_t>(rounded) + 1;
}

void validate(const RunConfig& c) {
    const auto bad = [](const std::string& key, const std::string& msg) {
        throw ConfigError("key '" + key + "': " + msg);
    };
    if (!(c.L > 0.0)) bad("L", "must be positive");
    if (!(c.dx > 0.0)) bad("dx", "must be positive");
    if (!(c.dt > 0.0)) bad("dt", "must be positive");
    if (c.dt / c.dx > 0.5) {
        std::ostringstream msg;
        msg << "CFL condition violated: dt/dx = " << c.dt / c.dx << " exceeds 0.5";
        bad("dt", msg.str());
    }
    half_line_points(c.L, c.dx);
    if (c.mu < 0.0) bad("mu", "must be non-negative");
    if (c.k == 0.0) bad("k", "must be non-zero");
    if (c.lambda == 0.0 && c.mu != 0.0) bad("lambda", "must be non-zero unless mu = 0");
    if (c.t_end < c.t0) bad("t_end", "must not precede t0");
    if (!(c.phi_max > 0.0)) bad("phi_max", "must be positive");
    if (!(c.r > 0.0)) bad("r", "must be positive");
    if (!(c.r < c.L)) bad("r", "bundle radius must satisfy r < L");
    if (!(c.a < 0.0 && 0.0 < c.b)) bad("a", "overlap edges need a < 0 < b");
    if (-c.a > c.L || c.b > c.L) bad("a", "overlap edges must lie inside [-L, L]");
    if (!(c.sponge_width > 0.0 && c.sponge_width < 1.0)) bad("sponge_width", "must lie in (0, 1)");
    if (c.sponge_strength < 0.0) bad("sponge_strength", "must be non-negative");
    if (c.cover_points < 8) bad("cover_points", "needs at least 8");
    if (!(c.smoothness_threshold > 0.0)) bad("smoothness_threshold", "must be positive");
    if (!(c.backlund_extent > 0.0)) bad("backlund_extent", "must be positive");

    if (c.initial == "backlund_pair" || c.initial == "cosh_time" || c.initial == "static_log") {
        if (!(c.mu > 0.0)) bad("initial", c.initial + " needs mu > 0");
        if (c.initial != "static_log" && !(c.omega > 0.0)) bad("omega", "must be positive");
        if (c.initial == "static_log" && !(c.x0 < -c.L)) bad("x0", "static_log needs x0 < -L");
    }
    if (c.initial == "wave" && c.mu != 0.0) bad("initial", "wave is a free-field solution and needs mu = 0");
    if (c.initial == "file") {
        if (c.initial_file1.empty() || c.initial_file2.empty())
            bad("initial", "file needs initial_file1 and initial_file2");
        if (c.boundary == "exact") bad("boundary", "file data has no oracle for exact boundaries; use sponge");
    }
}

}  // namespace liouville::cli
