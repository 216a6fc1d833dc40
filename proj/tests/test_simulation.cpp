#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "liouville/backlund.hpp"
#include "liouville/border.hpp"
#include "liouville/errors.hpp"
#include "liouville/exact_solution.hpp"
#include "liouville/gauge_field.hpp"
#include "liouville/simulator.hpp"

using namespace liouville;

namespace {

constexpr double kPi = std::numbers::pi;

Params params(double mu, double lambda, double k = -4.0 * kPi) {
    Params p;
    p.mu = mu;
    p.lambda = lambda;
    p.k = k;
    return p;
}

std::size_t points_for(double L, double dx) { return static_cast<std::size_t>(std::lround(L / dx)) + 1; }

double max_error(const FieldState& s, const ExactSolution& o1, const ExactSolution& o2) {
    double e = 0.0;
    for (std::size_t j = 0; j < s.points(); ++j) {
        e = std::max(e, std::abs(s.phi1[j] - o1.phi(s.t, s.x1(j))));
        e = std::max(e, std::abs(s.phi2[j] - o2.phi(s.t, s.x2(j))));
    }
    return e;
}

StepConfig exact_ends(const ExactSolution& o1, const ExactSolution& o2, double L, DefectMode mode) {
    StepConfig c;
    c.defect = mode;
    c.left = oracle_boundary(o1, -L);
    c.right = oracle_boundary(o2, L);
    return c;
}

}  // namespace

// ---- border function -------------------------------------------------------

TEST(Border, ClosedForms) {
    const Params p = params(1.3, 0.7, 2.0 * kPi);
    const BorderFunction b(p);
    EXPECT_NEAR(b.b_plus(0.4), 1.3 * 0.7 * std::exp(-0.4), 1e-15);
    EXPECT_NEAR(b.b_minus(0.4), 0.5 * (1.3 / 0.7) * std::cosh(0.4), 1e-15);
    EXPECT_NEAR(b.value(0.5, 0.1), b.b_plus(0.6) + b.b_minus(0.4), 1e-15);
    EXPECT_NEAR(b.partner(0.5, 0.1), b.b_plus(0.6) - b.b_minus(0.4), 1e-15);
}

TEST(Border, LambdaZeroNeedsMuZero) {
    EXPECT_THROW(BorderFunction(params(1.0, 0.0)), DivisionByZero);
    EXPECT_NO_THROW(BorderFunction(params(0.0, 0.0)));
}

TEST(Border, ChainRuleMatchesFiniteDifferences) {
    const BorderFunction b(params(0.8, -1.1));
    const double p1 = 0.3, p2 = -0.45, h = 1e-5;
    const auto fd1 = [&](auto f) { return (f(p1 + h, p2) - f(p1 - h, p2)) / (2 * h); };
    const auto fd2 = [&](auto f) { return (f(p1, p2 + h) - f(p1, p2 - h)) / (2 * h); };
    const auto B = [&](double a, double c) { return b.value(a, c); };
    const auto M = [&](double a, double c) { return b.partner(a, c); };
    EXPECT_NEAR(b.d_phi1(p1, p2), fd1(B), 1e-8);
    EXPECT_NEAR(b.d_phi2(p1, p2), fd2(B), 1e-8);
    EXPECT_NEAR(b.partner_d_phi1(p1, p2), fd1(M), 1e-8);
    EXPECT_NEAR(b.partner_d_phi2(p1, p2), fd2(M), 1e-8);
    const auto B1 = [&](double a, double c) { return b.d_phi1(a, c); };
    const auto B2 = [&](double a, double c) { return b.d_phi2(a, c); };
    EXPECT_NEAR(b.d2_phi1_phi1(p1, p2), fd1(B1), 1e-7);
    EXPECT_NEAR(b.d2_phi1_phi2(p1, p2), fd2(B1), 1e-7);
    EXPECT_NEAR(b.d2_phi2_phi2(p1, p2), fd2(B2), 1e-7);
}

TEST(Border, ScaledDerivativesCancelK) {
    for (double k : {-4.0 * kPi, 2.0 * kPi, 7.0}) {
        const BorderFunction b(params(1.2, 0.6, k));
        EXPECT_NEAR(b.scaled_d_phi1(0.2, -0.3), 4.0 * kPi / k * b.d_phi1(0.2, -0.3), 1e-13);
        EXPECT_NEAR(b.scaled_d_phi2(0.2, -0.3), 4.0 * kPi / k * b.d_phi2(0.2, -0.3), 1e-13);
    }
}

TEST(Border, ProductIdentityAndMomentumCombination) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const Params p = params(0.5 + 0.25 * (U(rng) + 3.0), 0.2 + 0.3 * (U(rng) + 3.0));
        const BorderFunction b(p);
        const double f1 = U(rng), f2 = U(rng);
        const double fp = f1 + f2, fm = f1 - f2;
        const double c = p.k / (2.0 * kPi);
        const double lhs = 2.0 * b.db_plus(fp) * b.db_minus(fm);
        const double rhs = -c * c * p.mu * p.mu * std::exp(-fp) * std::sinh(fm);
        EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(std::abs(lhs), 1e-300));

        const double g1 = b.d_phi1(f1, f2), g2 = b.d_phi2(f1, f2);
        const double v1 = bulk_potential(p, f1), v2 = bulk_potential(p, f2);
        const double terms = (2.0 * kPi / p.k) * (g1 * g1 - g2 * g2);
        const double scale = std::max({std::abs(terms), std::abs(v1), std::abs(v2)});
        EXPECT_LE(std::abs(terms + v1 - v2), 1e-12 * scale);
    }
}

// ---- exact solutions -------------------------------------------------------

TEST(ExactSolution, StaticLogAndCoshTimeSolve) {
    const ProbeRegion pr{-1, 1, -1, 1, 9};
    EXPECT_LT(static_log(1.5, -2.0, pr).max_residual(pr), 1e-12);
    EXPECT_LT(cosh_time(0.7, 1.3, pr).max_residual(pr), 1e-12);
    EXPECT_THROW(cosh_time(1.0, 0.0, pr), OracleRejected);
}

TEST(ExactSolution, StaticLogRejectsSingularProbe) {
    EXPECT_THROW(static_log(1.0, 0.0, ProbeRegion{-1, 1, -1, 1, 9}), OracleRejected);
}

TEST(ExactSolution, CustomReducesToStaticLog) {
    const ProbeRegion pr{-0.5, 0.5, 1.0, 2.0, 7};
    const ConeFunction F{[](double z) { return z; }, [](double) { return 1.0; }, [](double) { return 0.0; },
                         [](double) { return 0.0; }};
    const ExactSolution c = custom_solution(1.0, F, F, pr);
    const ExactSolution s = static_log(1.0, 0.0, pr);
    EXPECT_NEAR(c.phi(0.2, 1.4), s.phi(0.2, 1.4), 1e-14);
}

TEST(ExactSolution, CustomNonlinear) {
    const ProbeRegion pr{-0.3, 0.3, 0.6, 1.2, 7};
    const ConeFunction F{[](double z) { return std::exp(z); }, [](double z) { return std::exp(z); },
                         [](double z) { return std::exp(z); }, [](double z) { return std::exp(z); }};
    const ConeFunction G{[](double w) { return w; }, [](double) { return 1.0; }, [](double) { return 0.0; },
                         [](double) { return 0.0; }};
    EXPECT_LT(custom_solution(2.0, F, G, pr).max_residual(pr), 1e-9);
}

TEST(ExactSolution, CustomRejectsWrongDerivative) {
    const ProbeRegion pr{-0.3, 0.3, 0.6, 1.2, 7};
    const ConeFunction F{[](double z) { return std::exp(z); }, [](double z) { return 2.0 * std::exp(z); },
                         [](double z) { return std::exp(z); }, [](double z) { return std::exp(z); }};
    const ConeFunction G{[](double w) { return w; }, [](double) { return 1.0; }, [](double) { return 0.0; },
                         [](double) { return 0.0; }};
    EXPECT_THROW(custom_solution(1.0, F, G, pr), OracleRejected);
}

TEST(ExactSolution, SignFlippedGeneralFormIsRejected) {
    // ln mu + ln|F - G| - ln F'/2 - ln(-G')/2 with F = z, G = -zbar: phi = ln(2 mu t).
    ExactSolution::Parts p;
    p.phi = [](double t, double) { return std::log(2.0 * t); };
    p.phi_t = [](double t, double) { return 1.0 / t; };
    p.phi_x = [](double, double) { return 0.0; };
    p.phi_tt = [](double t, double) { return -1.0 / (t * t); };
    p.phi_xx = [](double, double) { return 0.0; };
    EXPECT_THROW(ExactSolution::from_closed_form("sign_flipped", 1.0, p, ProbeRegion{0.5, 1.0, -0.5, 0.5, 5}),
                 OracleRejected);
}

TEST(ExactSolution, BacklundPairSatisfiesRelationsEverywhere) {
    const double mu = 1.2, lambda = 0.6;
    const ProbeRegion pr{-1, 1, -1, 1, 9};
    const auto [p1, p2] = backlund_cosh_pair(mu, lambda, 0.9, 0.4, pr);
    for (double t : {-0.7, 0.1, 0.8}) {
        for (double x : {-0.9, 0.0, 0.6}) {
            const double d = 0.5 * ((p1.phi_t(t, x) + p1.phi_x(t, x)) - (p2.phi_t(t, x) + p2.phi_x(t, x)));
            const double db = 0.5 * ((p1.phi_t(t, x) - p1.phi_x(t, x)) + (p2.phi_t(t, x) - p2.phi_x(t, x)));
            const double fp = p1.phi(t, x) + p2.phi(t, x), fm = p1.phi(t, x) - p2.phi(t, x);
            EXPECT_NEAR(d, 2.0 * mu * lambda * std::exp(-fp), 1e-12);
            EXPECT_NEAR(db, (mu / lambda) * std::sinh(fm), 1e-12);
        }
    }
}

TEST(ExactSolution, TravellingWaveIsFree) {
    const ProbeRegion pr{-1, 1, -1, 1, 9};
    EXPECT_LT(travelling_wave(0.5, 2.0, 0.1, pr).max_residual(pr), 1e-12);
}

// ---- bulk right-hand side ------------------------------------------------------

TEST(BulkRhs, ZeroFieldGivesFour) {
    const auto r = bulk_rhs(std::vector<double>(9, 0.0), 0.1, 1.0);
    ASSERT_EQ(r.size(), 7u);
    for (double v : r) EXPECT_DOUBLE_EQ(v, 4.0);
}

TEST(BulkRhs, StaticLogIsStationaryToSecondOrder) {
    std::vector<double> err;
    for (double dx : {0.02, 0.01}) {
        std::vector<double> phi;
        for (int j = 0; j <= static_cast<int>(std::lround(1.0 / dx)); ++j) phi.push_back(std::log(2.0 * (1.0 + j * dx + 0.5)));
        const auto r = bulk_rhs(phi, dx, 1.0);
        err.push_back(std::abs(*std::max_element(r.begin(), r.end(), [](double a, double b) {
            return std::abs(a) < std::abs(b);
        })));
    }
    EXPECT_NEAR(std::log2(err[0] / err[1]), 2.0, 0.1);
}

TEST(BulkRhs, CoshTimeAcceleration) {
    const double mu = 1.0, omega = 1.5, t = 0.3;
    const ExactSolution s = cosh_time(mu, omega, ProbeRegion{});
    const auto r = bulk_rhs(std::vector<double>(5, s.phi(t, 0.0)), 0.1, mu);
    EXPECT_NEAR(r[1], s.phi_tt(t, 0.0), 1e-12);
    EXPECT_NEAR(r[1], omega * omega / std::pow(std::cosh(omega * t), 2), 1e-12);
}

// ---- defect closure ----------------------------------------------------------

TEST(DefectClosure, ZeroState) {
    const auto [d1, d2] = defect_closure(params(1.0, 1.0, 2.0 * kPi), 0.0, 0.0, 0.0, 0.0);
    EXPECT_DOUBLE_EQ(d1, 2.0);
    EXPECT_DOUBLE_EQ(d2, -2.0);
}

TEST(DefectClosure, FreeFieldTransmits) {
    const auto [d1, d2] = defect_closure(params(0.0, 0.7), 0.4, -0.1, 0.25, -0.6);
    EXPECT_DOUBLE_EQ(d1, -0.6);
    EXPECT_DOUBLE_EQ(d2, 0.25);
}

TEST(DefectClosure, ProducesFrozenBacklundRelations) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double mu = 1.0 + 0.5 * U(rng), lambda = 0.8 + 0.5 * U(rng);
        const double f1 = U(rng), f2 = U(rng), t1 = U(rng), t2 = U(rng);
        const auto [x1, x2] = defect_closure(params(mu, lambda), f1, f2, t1, t2);
        const double d = 0.5 * ((t1 + x1) - (t2 + x2));
        const double db = 0.5 * ((t1 - x1) + (t2 - x2));
        EXPECT_NEAR(d, 2.0 * mu * lambda * std::exp(-(f1 + f2)), 1e-12);
        EXPECT_NEAR(db, (mu / lambda) * std::sinh(f1 - f2), 1e-12);
    }
}

// ---- stepping ------------------------------------------------------------------

TEST(Step, ZeroSpanIsIdentity) {
    const ExactSolution s = cosh_time(1.0, 1.0, ProbeRegion{});
    FieldState st = make_state(params(1.0, 1.0), 1.0, 17, 0.01);
    sample_oracles(st, s, s);
    const FieldState out = evolve(st, exact_ends(s, s, 1.0, DefectMode::none), st.t);
    EXPECT_EQ(out.phi1, st.phi1);
    EXPECT_EQ(out.pi2, st.pi2);
}

TEST(Step, RejectsTinyGrids) {
    FieldState st = make_state(params(1.0, 1.0), 1.0, 3, 0.01);
    st.phi1.pop_back();
    StepConfig c;
    c.boundary = BoundaryMode::sponge;
    EXPECT_THROW(step(st, c), PreconditionError);
}

TEST(Step, ExactBoundariesNeedData) {
    FieldState st = make_state(params(1.0, 1.0), 1.0, 9, 0.01);
    EXPECT_THROW(step(st, StepConfig{}), PreconditionError);
}

TEST(Step, BlowupGuard) {
    const ExactSolution s = cosh_time(1.0, 1.0, ProbeRegion{});
    FieldState st = make_state(params(1.0, 1.0), 1.0, 17, 0.01);
    sample_oracles(st, s, s);
    StepConfig c = exact_ends(s, s, 1.0, DefectMode::none);
    c.phi_max = 0.5;
    EXPECT_THROW(evolve(st, c, 2.0), BlowupError);
}

TEST(Step, EvolveShrinksDtToLandOnEnd) {
    const ExactSolution s = cosh_time(1.0, 1.0, ProbeRegion{});
    FieldState st = make_state(params(1.0, 1.0), 1.0, 17, 0.015);
    sample_oracles(st, s, s);
    int calls = 0;
    const FieldState out = evolve(st, exact_ends(s, s, 1.0, DefectMode::none), 0.1, [&](const FieldState&) { ++calls; });
    EXPECT_DOUBLE_EQ(out.t, 0.1);
    EXPECT_EQ(calls, 8);  // initial state plus 7 steps of 0.1 / 7
}

TEST(Step, NoDefectKeepsSharedPointEqual) {
    const ExactSolution s = cosh_time(1.0, 1.0, ProbeRegion{-1, 2, -1, 1, 5});
    FieldState st = make_state(params(1.0, 1.0), 1.0, 33, 0.25 / 32);
    sample_oracles(st, s, s);
    const FieldState out = evolve(st, exact_ends(s, s, 1.0, DefectMode::none), 0.5);
    EXPECT_EQ(out.phi1_at_defect(), out.phi2_at_defect());
    EXPECT_EQ(out.pi1_at_defect(), out.pi2_at_defect());
}

TEST(Step, BulkConvergesAtSecondOrder) {
    const ProbeRegion pr{0, 1, -1, 1, 9};
    for (const ExactSolution& s : {static_log(1.0, -1.5, pr), cosh_time(1.0, 1.0, pr)}) {
        std::vector<double> err;
        for (double dx : {1.0 / 32, 1.0 / 64}) {
            FieldState st = make_state(params(1.0, 1.0), 1.0, points_for(1.0, dx), 0.25 * dx);
            sample_oracles(st, s, s);
            err.push_back(max_error(evolve(st, exact_ends(s, s, 1.0, DefectMode::none), 0.5), s, s));
        }
        EXPECT_NEAR(std::log2(err[0] / err[1]), 2.0, 0.25) << s.name();
    }
}

TEST(Step, FreeDefectTransmissionConverges) {
    const ProbeRegion pr{0, 1, -1, 1, 9};
    const ExactSolution w1 = travelling_wave(0.5, kPi, 0.0, pr), w2 = travelling_wave(-0.5, kPi, 0.0, pr);
    std::vector<double> err;
    for (double dx : {1.0 / 32, 1.0 / 64}) {
        FieldState st = make_state(params(0.0, 0.7), 1.0, points_for(1.0, dx), 0.25 * dx);
        sample_oracles(st, w1, w2);
        err.push_back(max_error(evolve(st, exact_ends(w1, w2, 1.0, DefectMode::backlund), 0.5), w1, w2));
    }
    EXPECT_GE(std::log2(err[0] / err[1]), 1.8);
}

TEST(Step, BacklundPairKeepsDefectResidualsSecondOrder) {
    const double mu = 1.0, lambda = 0.5, L = 2.0;
    const auto [p1, p2] = backlund_cosh_pair(mu, lambda, 1.0, 0.3, ProbeRegion{0, 1, -2, 2, 9});
    const BorderFunction border(params(mu, lambda));
    std::vector<double> worst;
    for (double dx : {1.0 / 32, 1.0 / 64}) {
        FieldState st = make_state(params(mu, lambda), L, points_for(L, dx), 0.25 * dx);
        sample_oracles(st, p1, p2);
        double w = 0.0;
        evolve(st, exact_ends(p1, p2, L, DefectMode::backlund), 1.0, [&](const FieldState& s) {
            const DefectResiduals r = defect_residuals(s, border);
            w = std::max({w, std::abs(r.d1), std::abs(r.d2)});
        });
        worst.push_back(w);
    }
    EXPECT_GE(worst[0] / worst[1], 3.0);
}

TEST(Step, SpongeAbsorbsEnergy) {
    const ExactSolution s = travelling_wave(0.5, kPi, 0.0, ProbeRegion{});
    FieldState st = make_state(params(0.0, 1.0), 1.0, 65, 0.25 / 64);
    sample_oracles(st, s, s);
    StepConfig c;
    c.defect = DefectMode::none;
    c.boundary = BoundaryMode::sponge;
    const auto l2 = [](const FieldState& f) {
        double e = 0.0;
        for (std::size_t j = 0; j < f.points(); ++j) e += f.pi1[j] * f.pi1[j] + f.pi2[j] * f.pi2[j];
        return e;
    };
    const FieldState out = evolve(st, c, 3.0);
    EXPECT_LT(l2(out), 0.5 * l2(st));
}

// ---- Backlund generation ---------------------------------------------------------

namespace {

struct Generated {
    std::vector<double> liouville, difference, sum, relation;
};

Generated generate(double mu, double lambda, const std::vector<double>& hs) {
    const ProbeRegion pr{-1, 2, -1, 1, 9};
    const auto [p1, p2] = backlund_cosh_pair(mu, lambda, 1.0, 0.3, pr);
    Generated g;
    for (double h : hs) {
        const LightConeGrid grid{0.0, 0.0, h, points_for(1.0, h)};
        const LightConeSamples s1 = sample_lightcone(p1, grid);
        const LightConeSamples s2 = backlund_generate(s1, mu, lambda, p2.phi(grid.t(0, 0), grid.x(0, 0)));
        g.liouville.push_back(lightcone_liouville_residual(s2, mu));
        const BacklundConsistency bc = backlund_consistency(s1, s2, mu);
        g.difference.push_back(bc.difference);
        g.sum.push_back(bc.sum);
        g.relation.push_back(backlund_relation_residual(s1, s2, mu, lambda));
    }
    return g;
}

}  // namespace

TEST(Backlund, GeneratedFieldSolvesBulkAtSecondOrder) {
    const Generated g = generate(1.0, 0.5, {1.0 / 16, 1.0 / 32, 1.0 / 64});
    for (const auto* v : {&g.liouville, &g.difference, &g.sum, &g.relation}) {
        EXPECT_NEAR(std::log2((*v)[0] / (*v)[1]), 2.0, 0.2);
        EXPECT_NEAR(std::log2((*v)[1] / (*v)[2]), 2.0, 0.2);
    }
}

TEST(Backlund, ExactPartnerIsReproduced) {
    const auto [p1, p2] = backlund_cosh_pair(1.0, 0.8, 1.0, -0.2, ProbeRegion{-1, 2, -1, 1, 9});
    const LightConeGrid grid{0.0, 0.0, 1.0 / 64, 65};
    const LightConeSamples s2 = backlund_generate(sample_lightcone(p1, grid), 1.0, 0.8, p2.phi(0.0, 0.0));
    double e = 0.0;
    for (std::size_t a = 0; a < grid.n; ++a)
        for (std::size_t b = 0; b < grid.n; ++b) e = std::max(e, std::abs(s2.at(a, b) - p2.phi(grid.t(a, b), grid.x(a, b))));
    EXPECT_LT(e, 1e-4);
}

TEST(Backlund, FreeFieldLightConeConstants) {
    const ExactSolution w = travelling_wave(0.4, 2.0, 0.0, ProbeRegion{});
    const LightConeGrid grid{0.0, 0.0, 0.05, 21};
    const LightConeSamples s1 = sample_lightcone(w, grid);
    const LightConeSamples s2 = backlund_generate(s1, 0.0, 0.9, 0.3);
    for (std::size_t a = 0; a + 1 < grid.n; ++a) {
        for (std::size_t b = 0; b + 1 < grid.n; ++b) {
            // phi1 - phi2 constant along z, phi1 + phi2 constant along zbar
            EXPECT_NEAR(s1.at(a + 1, b) - s2.at(a + 1, b), s1.at(a, b) - s2.at(a, b), 1e-12);
            EXPECT_NEAR(s1.at(a, b + 1) + s2.at(a, b + 1), s1.at(a, b) + s2.at(a, b), 1e-12);
        }
    }
}

TEST(Backlund, PreconditionsAndDivergence) {
    const ExactSolution s = cosh_time(1.0, 1.0, ProbeRegion{});
    const LightConeSamples s1 = sample_lightcone(s, LightConeGrid{0.0, 0.0, 0.1, 5});
    EXPECT_THROW(backlund_generate(s1, 1.0, 0.0, 0.0), PreconditionError);
    EXPECT_THROW(backlund_generate(s1, 1.0, 1e6, -40.0), IntegrationDiverged);
}
