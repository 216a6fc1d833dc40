#include "liouville/backlund.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "liouville/errors.hpp"

namespace liouville {

LightConeSamples sample_lightcone(const ExactSolution& sol, const LightConeGrid& grid) {
    LightConeSamples s;
    s.grid = grid;
    const std::size_t total = grid.n * grid.n;
    s.phi.resize(total);
    s.phi_z.resize(total);
    s.phi_zbar.resize(total);
    for (std::size_t a = 0; a < grid.n; ++a) {
        for (std::size_t b = 0; b < grid.n; ++b) {
            const double t = grid.t(a, b), x = grid.x(a, b);
            const double ft = sol.phi_t(t, x), fx = sol.phi_x(t, x);
            const std::size_t i = grid.index(a, b);
            s.phi[i] = sol.phi(t, x);
            s.phi_z[i] = 0.5 * (ft + fx);
            s.phi_zbar[i] = 0.5 * (ft - fx);
        }
    }
    return s;
}

namespace {

template <class G, class DG>
double newton(G g, DG dg, double y, const char* where) {
    for (int it = 0; it < 50; ++it) {
        const double r = g(y);
        const double d = dg(y);
        if (!std::isfinite(r) || !std::isfinite(d) || d == 0.0) break;
        const double dy = r / d;
        y -= dy;
        if (std::abs(dy) <= 1e-15 * std::max(1.0, std::abs(y))) return y;
    }
    std::ostringstream msg;
    msg << "Newton iteration failed in " << where;
    throw IntegrationDiverged(msg.str());
}

}  // namespace

LightConeSamples backlund_generate(const LightConeSamples& phi1, double mu, double lambda, double seed) {
    if (lambda == 0.0) throw PreconditionError("backlund_generate needs lambda != 0");
    const LightConeGrid& g = phi1.grid;
    const double h = g.h;
    const double cz = h * mu * lambda;          // trapezoid weight along z
    const double czb = 0.5 * h * mu / lambda;   // trapezoid weight along zbar

    LightConeSamples out;
    out.grid = g;
    out.phi.assign(g.n * g.n, 0.0);
    out.phi_z.assign(g.n * g.n, 0.0);
    out.phi_zbar.assign(g.n * g.n, 0.0);
    out.phi[g.index(0, 0)] = seed;

    // z-direction on b = 0: y = prev + dphi1 - cz (e^{-phi+(a)} + e^{-phi+(a+1)}).
    for (std::size_t a = 0; a + 1 < g.n; ++a) {
        const double f0 = phi1.at(a, 0), f1 = phi1.at(a + 1, 0);
        const double prev = out.phi[g.index(a, 0)];
        const double c = prev + (f1 - f0) - cz * std::exp(-(f0 + prev));
        const double y = newton([&](double v) { return v - c + cz * std::exp(-(f1 + v)); },
                                [&](double v) { return 1.0 + cz * std::exp(-(f1 + v)); }, prev, "z sweep");
        out.phi[g.index(a + 1, 0)] = y;
    }

    // zbar-direction: y = prev - dphi1 + czb (sinh(phi-(b)) + sinh(phi-(b+1))).
    for (std::size_t a = 0; a < g.n; ++a) {
        for (std::size_t b = 0; b + 1 < g.n; ++b) {
            const double f0 = phi1.at(a, b), f1 = phi1.at(a, b + 1);
            const double prev = out.phi[g.index(a, b)];
            const double c = prev - (f1 - f0) + czb * std::sinh(f0 - prev);
            const double y = newton([&](double v) { return v - c - czb * std::sinh(f1 - v); },
                                    [&](double v) { return 1.0 + czb * std::cosh(f1 - v); }, prev, "zbar sweep");
            out.phi[g.index(a, b + 1)] = y;
        }
    }

    for (std::size_t i = 0; i < out.phi.size(); ++i) {
        const double p1 = phi1.phi[i], p2 = out.phi[i];
        if (!std::isfinite(p2)) throw IntegrationDiverged("non-finite phi2");
        out.phi_z[i] = phi1.phi_z[i] - 2.0 * mu * lambda * std::exp(-(p1 + p2));
        out.phi_zbar[i] = -phi1.phi_zbar[i] + (mu / lambda) * std::sinh(p1 - p2);
    }
    return out;
}

namespace {

double mixed(const LightConeSamples& s, std::size_t a, std::size_t b) {
    const double h = s.grid.h;
    return (s.at(a + 1, b + 1) - s.at(a + 1, b) - s.at(a, b + 1) + s.at(a, b)) / (h * h);
}

double corner_exp(const LightConeSamples& s, std::size_t a, std::size_t b) {
    return 0.25 * (std::exp(-2.0 * s.at(a, b)) + std::exp(-2.0 * s.at(a + 1, b)) +
                   std::exp(-2.0 * s.at(a, b + 1)) + std::exp(-2.0 * s.at(a + 1, b + 1)));
}

}  // namespace

double lightcone_liouville_residual(const LightConeSamples& s, double mu) {
    double worst = 0.0;
    for (std::size_t a = 0; a + 1 < s.grid.n; ++a)
        for (std::size_t b = 0; b + 1 < s.grid.n; ++b)
            worst = std::max(worst, std::abs(4.0 * (mixed(s, a, b) - mu * mu * corner_exp(s, a, b))));
    return worst;
}

BacklundConsistency backlund_consistency(const LightConeSamples& phi1, const LightConeSamples& phi2, double mu) {
    BacklundConsistency r;
    for (std::size_t a = 0; a + 1 < phi1.grid.n; ++a) {
        for (std::size_t b = 0; b + 1 < phi1.grid.n; ++b) {
            const double m1 = mixed(phi1, a, b), m2 = mixed(phi2, a, b);
            const double e1 = mu * mu * corner_exp(phi1, a, b), e2 = mu * mu * corner_exp(phi2, a, b);
            r.difference = std::max(r.difference, std::abs((m1 - m2) - (e1 - e2)));
            r.sum = std::max(r.sum, std::abs((m1 + m2) - (e1 + e2)));
        }
    }
    return r;
}

double backlund_relation_residual(const LightConeSamples& phi1, const LightConeSamples& phi2, double mu,
                                  double lambda) {
    const LightConeGrid& g = phi1.grid;
    const double h = g.h;
    double worst = 0.0;
    for (std::size_t a = 1; a + 1 < g.n; ++a) {
        for (std::size_t b = 1; b + 1 < g.n; ++b) {
            const double pp = phi1.at(a, b) + phi2.at(a, b);
            const double pm = phi1.at(a, b) - phi2.at(a, b);
            const double dz = ((phi1.at(a + 1, b) - phi2.at(a + 1, b)) - (phi1.at(a - 1, b) - phi2.at(a - 1, b))) /
                              (2.0 * h);
            const double dzb =
                ((phi1.at(a, b + 1) + phi2.at(a, b + 1)) - (phi1.at(a, b - 1) + phi2.at(a, b - 1))) / (2.0 * h);
            worst = std::max(worst, std::abs(dz - 2.0 * mu * lambda * std::exp(-pp)));
            worst = std::max(worst, std::abs(dzb - (mu / lambda) * std::sinh(pm)));
        }
    }
    return worst;
}

}  // namespace liouville
