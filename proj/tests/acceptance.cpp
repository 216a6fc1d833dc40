// One line per acceptance criterion; exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "liouville/border.hpp"
#include "liouville/cli.hpp"
#include "liouville/exact_solution.hpp"
#include "liouville/lie_sl2.hpp"
#include "liouville/simulator.hpp"

using namespace liouville;
using lie::LieElement;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("liouville_acceptance_" + name);
    fs::remove_all(p);
    return p;
}

// Runs a subcommand with its per-check chatter suppressed.
int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "liouville");
    std::vector<char*> argv;
    for (std::string& a : args) argv.push_back(a.data());
    std::ostringstream sink;
    std::streambuf* old = std::cout.rdbuf(sink.rdbuf());
    const int code = cli::run(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old);
    return code;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json suite_json(const fs::path& dir, const std::string& suite) { return json::parse(slurp(dir / (suite + ".json"))); }

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

Outcome algebra() {
    const LieElement H = LieElement::h(), EP = LieElement::e_plus(), EM = LieElement::e_minus();
    bool table = lie::commutator(H, EP) == EP * 2.0 && lie::commutator(H, EM) == EM * -2.0 &&
                 lie::commutator(EP, EM) == H && lie::commutator(H, H) == LieElement{};
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const LieElement a{U(rng), U(rng), U(rng)}, b{U(rng), U(rng), U(rng)}, c{U(rng), U(rng), U(rng)};
        using lie::commutator;
        worst = std::max(worst, (commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) +
                                 commutator(c, commutator(a, b)))
                                    .norm());
    }
    return {table && worst < 1e-12, "table exact=" + std::string(table ? "yes" : "no") + " jacobi=" + fmt(worst)};
}

Outcome gauss() {
    const fs::path out = scratch("c2");
    const int code = invoke({"verify-appendix-b", "--out", out.string(), "--set", "gauss_trials=20", "--set",
                             "gauge_trials=50"});
    const json j = suite_json(out, "verify-appendix-b");
    return {code == 0, "random deviation=" + fmt(j["checks"][1]["worst_deviation"].get<double>()) +
                           " gauge residual=" + fmt(j["checks"][2]["worst_residual"].get<double>())};
}

Outcome border() {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    Params p;
    p.mu = 1.0;
    p.lambda = 0.5;
    const BorderFunction b(p);
    double worst_product = 0.0, worst_momentum = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double f1 = U(rng), f2 = U(rng), fp = f1 + f2, fm = f1 - f2;
        const double c = p.k / (2.0 * kPi);
        const double lhs = 2.0 * b.db_plus(fp) * b.db_minus(fm);
        const double rhs = -c * c * p.mu * p.mu * std::exp(-fp) * std::sinh(fm);
        if (rhs != 0.0) worst_product = std::max(worst_product, std::abs(lhs - rhs) / std::abs(rhs));
        const double g1 = b.d_phi1(f1, f2), g2 = b.d_phi2(f1, f2);
        const double v1 = bulk_potential(p, f1), v2 = bulk_potential(p, f2);
        const double terms = (2.0 * kPi / p.k) * (g1 * g1 - g2 * g2);
        const double scale = std::max({std::abs(terms), std::abs(v1), std::abs(v2)});
        worst_momentum = std::max(worst_momentum, std::abs(terms + v1 - v2) / scale);
    }
    return {worst_product < 1e-12 && worst_momentum < 1e-12,
            "product=" + fmt(worst_product) + " momentum=" + fmt(worst_momentum)};
}

double bulk_error(double dx, const ExactSolution& sol) {
    const double L = 1.0;
    Params p;
    FieldState s = make_state(p, L, static_cast<std::size_t>(std::lround(L / dx)) + 1, 0.25 * dx);
    sample_oracles(s, sol, sol);
    StepConfig c;
    c.defect = DefectMode::none;
    c.left = oracle_boundary(sol, -L);
    c.right = oracle_boundary(sol, L);
    s = evolve(s, c, 1.0);
    double e = 0.0;
    for (std::size_t j = 0; j < s.points(); ++j) {
        e = std::max(e, std::abs(s.phi1[j] - sol.phi(s.t, s.x1(j))));
        e = std::max(e, std::abs(s.phi2[j] - sol.phi(s.t, s.x2(j))));
    }
    return e;
}

Outcome bulk() {
    const ProbeRegion pr{0.0, 1.0, -1.0, 1.0, 9};
    bool ok = true;
    std::string detail;
    for (const auto& [name, sol] : {std::pair{"static_log", static_log(1.0, -1.5, pr)},
                                    std::pair{"cosh_time", cosh_time(1.0, 1.0, pr)}}) {
        const double e1 = bulk_error(1.0 / 64, sol), e2 = bulk_error(1.0 / 128, sol), e3 = bulk_error(1.0 / 256, sol);
        const double o1 = std::log2(e1 / e2), o2 = std::log2(e2 / e3);
        ok = ok && std::abs(o1 - 2.0) <= 0.2 && std::abs(o2 - 2.0) <= 0.2;
        detail += std::string(detail.empty() ? "" : " ") + name + " orders=" + fmt(o1) + "," + fmt(o2);
    }
    return {ok, detail};
}

Outcome charges() {
    const fs::path out = scratch("c5");
    const int code = invoke({"verify-charges", "--out", out.string(), "--set", "dx=0.03125", "--set",
                             "dt=0.0078125", "--set", "t0=0", "--set", "t_end=2"});
    const json j = suite_json(out, "verify-charges");
    const json& c = j["coarse"];
    const json& f = j["fine"];
    return {code == 0, "E ratio=" + fmt(c["E_mod"].get<double>() / f["E_mod"].get<double>()) +
                           " P ratio=" + fmt(c["P_mod"].get<double>() / f["P_mod"].get<double>()) +
                           " P_raw/P_mod=" + fmt(f["P_raw"].get<double>() / f["P_mod"].get<double>())};
}

Outcome appendix_a() {
    const fs::path out = scratch("c6");
    const int code = invoke({"verify-appendix-a", "--out", out.string()});
    const json j = suite_json(out, "verify-appendix-a");
    return {code == 0, std::to_string(j["checks"].size()) + " checks" +
                           (code == 0 ? "" : ", first failure: " + j["first_failure"].get<std::string>())};
}

Outcome backlund() {
    const fs::path out = scratch("c7");
    const int code = invoke({"backlund", "--out", out.string()});
    const json j = suite_json(out, "backlund");
    return {code == 0, std::to_string(j["checks"].size()) + " checks" +
                           (code == 0 ? "" : ", first failure: " + j["first_failure"].get<std::string>())};
}

Outcome bundle() {
    const fs::path with = scratch("c8_defect"), without = scratch("c8_none");
    const int a = invoke({"bundle-report", "--out", with.string(), "--set", "cover_points=256"});
    const int b = invoke({"bundle-report", "--out", without.string(), "--set", "cover_points=256", "--set",
                          "defect=none", "--set", "initial=cosh_time"});
    const json jd = suite_json(with, "bundle-report"), jn = suite_json(without, "bundle-report");
    const bool ok = a == 0 && b == 0 && !jd["trivial"].get<bool>() && jn["trivial"].get<bool>() &&
                    jd["nontrivial_transitions"].get<int>() > 0;
    return {ok, "defect trivial=" + std::string(jd["trivial"].get<bool>() ? "true" : "false") +
                    " none trivial=" + std::string(jn["trivial"].get<bool>() ? "true" : "false")};
}

Outcome determinism() {
    std::size_t files = 0;
    for (const std::string sub : {"simulate", "verify-gauge", "verify-charges", "verify-appendix-a",
                                  "verify-appendix-b", "backlund", "bundle-report"}) {
        const fs::path a = scratch("c9_a"), b = scratch("c9_b");
        const int ca = invoke({sub, "--out", a.string(), "--seed", "11"});
        const int cb = invoke({sub, "--out", b.string(), "--seed", "11"});
        if (ca != cb) return {false, sub + " exit codes differ"};
        for (const auto& e : fs::directory_iterator(a)) {
            if (slurp(e.path()) != slurp(b / e.path().filename()))
                return {false, sub + ": " + e.path().filename().string() + " differs"};
            ++files;
        }
    }
    return {files > 0, std::to_string(files) + " files identical"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        double budget_s;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {1, 1.0, algebra},     {2, 5.0, gauss},     {3, 1.0, border},
        {4, 60.0, bulk},       {5, 120.0, charges}, {6, 10.0, appendix_a},
        {7, 30.0, backlund},   {8, 10.0, bundle},   {9, 600.0, determinism},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.detail += " (over time budget)";
        }
        failed += !o.pass;
        std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << "  ["
                  << fmt(secs) << " s]\n";
    }
    return failed == 0 ? 0 : 1;
}
