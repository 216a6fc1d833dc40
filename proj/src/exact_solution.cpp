#include "liouville/exact_solution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "liouville/errors.hpp"

namespace liouville {

double ExactSolution::residual(double t, double x) const {
    return phi_tt(t, x) - phi_xx(t, x) - 4.0 * mu_ * mu_ * std::exp(-2.0 * phi(t, x));
}

double ExactSolution::max_residual(const ProbeRegion& probe) const {
    double worst = 0.0;
    const int n = std::max(probe.n, 2);
    for (int i = 0; i < n; ++i) {
        const double t = probe.t_min + (probe.t_max - probe.t_min) * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double x = probe.x_min + (probe.x_max - probe.x_min) * j / (n - 1);
            const double r = residual(t, x);
            if (!std::isfinite(r) || !std::isfinite(phi(t, x)) || !std::isfinite(phi_t(t, x)) ||
                !std::isfinite(phi_x(t, x)))
                return std::numeric_limits<double>::infinity();
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

ExactSolution ExactSolution::from_closed_form(std::string name, double mu, Parts parts, const ProbeRegion& probe,
                                              double tol) {
    if (!parts.phi_tx) {
        parts.phi_tx = [f = parts.phi_t](double t, double x) {
            const double h = 1e-5;
            return (f(t, x + h) - f(t, x - h)) / (2.0 * h);
        };
    }
    ExactSolution sol(std::move(name), mu, std::move(parts));
    const double r = sol.max_residual(probe);
    if (!(r < tol)) {
        std::ostringstream msg;
        msg << sol.name() << ": probe residual " << r << " exceeds " << tol;
        throw OracleRejected(msg.str());
    }
    return sol;
}

ExactSolution static_log(double mu, double x0, const ProbeRegion& probe) {
    ExactSolution::Parts p;
    p.phi = [mu, x0](double, double x) { return std::log(2.0 * mu * (x - x0)); };
    p.phi_t = [](double, double) { return 0.0; };
    p.phi_x = [x0](double, double x) { return 1.0 / (x - x0); };
    p.phi_tt = [](double, double) { return 0.0; };
    p.phi_xx = [x0](double, double x) { return -1.0 / ((x - x0) * (x - x0)); };
    p.phi_tx = [](double, double) { return 0.0; };
    return ExactSolution::from_closed_form("static_log", mu, std::move(p), probe);
}

ExactSolution cosh_time(double mu, double omega, const ProbeRegion& probe) {
    if (!(omega > 0.0)) throw OracleRejected("cosh_time needs omega > 0");
    ExactSolution::Parts p;
    p.phi = [mu, omega](double t, double) { return std::log(2.0 * mu / omega * std::cosh(omega * t)); };
    p.phi_t = [omega](double t, double) { return omega * std::tanh(omega * t); };
    p.phi_x = [](double, double) { return 0.0; };
    p.phi_tt = [omega](double t, double) {
        const double c = std::cosh(omega * t);
        return omega * omega / (c * c);
    };
    p.phi_xx = [](double, double) { return 0.0; };
    p.phi_tx = [](double, double) { return 0.0; };
    return ExactSolution::from_closed_form("cosh_time", mu, std::move(p), probe);
}

namespace {

void check_derivatives(const ConeFunction& fn, const char* label, const std::vector<double>& points) {
    const double h = 1e-4;
    const auto mismatch = [h](const std::function<double(double)>& f, const std::function<double(double)>& df,
                              double s) {
        const double fd = (f(s + h) - f(s - h)) / (2.0 * h);
        return std::abs(fd - df(s)) > 1e-6 * std::max(1.0, std::abs(df(s)));
    };
    for (double s : points) {
        if (mismatch(fn.f, fn.d1, s) || mismatch(fn.d1, fn.d2, s) || mismatch(fn.d2, fn.d3, s)) {
            std::ostringstream msg;
            msg << "derivatives of " << label << " are inconsistent at " << s;
            throw OracleRejected(msg.str());
        }
    }
}

}  // namespace

ExactSolution custom_solution(double mu, const ConeFunction& F, const ConeFunction& G, const ProbeRegion& probe) {
    std::vector<double> zs, zbs;
    const int n = std::max(probe.n, 2);
    for (int i = 0; i < n; ++i) {
        const double t = probe.t_min + (probe.t_max - probe.t_min) * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double x = probe.x_min + (probe.x_max - probe.x_min) * j / (n - 1);
            zs.push_back(t + x);
            zbs.push_back(t - x);
        }
    }
    check_derivatives(F, "F", zs);
    check_derivatives(G, "G", zbs);

    // Light-cone derivatives of phi; t/x derivatives are assembled from them.
    struct Cone {
        double d, dz, dzb, dzz, dzbzb, dzzb;
    };
    const auto cone = [F, G](double t, double x) {
        const double z = t + x, zb = t - x;
        const double f1 = F.d1(z), f2 = F.d2(z), f3 = F.d3(z);
        const double g1 = G.d1(zb), g2 = G.d2(zb), g3 = G.d3(zb);
        const double d = F.f(z) - G.f(zb);
        Cone c{};
        c.d = d;
        c.dz = f1 / d - 0.5 * f2 / f1;
        c.dzb = -g1 / d - 0.5 * g2 / g1;
        c.dzz = f2 / d - f1 * f1 / (d * d) - 0.5 * (f3 / f1 - f2 * f2 / (f1 * f1));
        c.dzbzb = -g2 / d - g1 * g1 / (d * d) - 0.5 * (g3 / g1 - g2 * g2 / (g1 * g1));
        c.dzzb = f1 * g1 / (d * d);
        return c;
    };

    ExactSolution::Parts p;
    p.phi = [mu, F, G](double t, double x) {
        const double z = t + x, zb = t - x;
        return std::log(mu) + std::log(std::abs(F.f(z) - G.f(zb))) - 0.5 * std::log(F.d1(z)) -
               0.5 * std::log(G.d1(zb));
    };
    p.phi_t = [cone](double t, double x) {
        const Cone c = cone(t, x);
        return c.dz + c.dzb;
    };
    p.phi_x = [cone](double t, double x) {
        const Cone c = cone(t, x);
        return c.dz - c.dzb;
    };
    p.phi_tt = [cone](double t, double x) {
        const Cone c = cone(t, x);
        return c.dzz + 2.0 * c.dzzb + c.dzbzb;
    };
    p.phi_xx = [cone](double t, double x) {
        const Cone c = cone(t, x);
        return c.dzz - 2.0 * c.dzzb + c.dzbzb;
    };
    p.phi_tx = [cone](double t, double x) {
        const Cone c = cone(t, x);
        return c.dzz - c.dzbzb;
    };
    return ExactSolution::from_closed_form("custom", mu, std::move(p), probe);
}

ExactSolution boosted_cosh(double mu, double omega, double rapidity, double shift, const ProbeRegion& probe) {
    if (!(omega > 0.0)) throw OracleRejected("boosted_cosh needs omega > 0");
    const double ch = std::cosh(rapidity), sh = std::sinh(rapidity);
    const auto arg = [=](double t, double x) { return omega * (t * ch + x * sh) - shift; };
    ExactSolution::Parts p;
    p.phi = [=](double t, double x) { return std::log(2.0 * mu / omega * std::cosh(arg(t, x))); };
    p.phi_t = [=](double t, double x) { return omega * ch * std::tanh(arg(t, x)); };
    p.phi_x = [=](double t, double x) { return omega * sh * std::tanh(arg(t, x)); };
    p.phi_tt = [=](double t, double x) {
        const double c = std::cosh(arg(t, x));
        return omega * omega * ch * ch / (c * c);
    };
    p.phi_xx = [=](double t, double x) {
        const double c = std::cosh(arg(t, x));
        return omega * omega * sh * sh / (c * c);
    };
    p.phi_tx = [=](double t, double x) {
        const double c = std::cosh(arg(t, x));
        return omega * omega * ch * sh / (c * c);
    };
    return ExactSolution::from_closed_form("boosted_cosh", mu, std::move(p), probe);
}

ExactSolution travelling_wave(double amp, double kappa, double offset, const ProbeRegion& probe) {
    ExactSolution::Parts p;
    p.phi = [=](double t, double x) { return offset + amp * std::sin(kappa * (x - t)); };
    p.phi_t = [=](double t, double x) { return -amp * kappa * std::cos(kappa * (x - t)); };
    p.phi_x = [=](double t, double x) { return amp * kappa * std::cos(kappa * (x - t)); };
    p.phi_tt = [=](double t, double x) { return -amp * kappa * kappa * std::sin(kappa * (x - t)); };
    p.phi_xx = p.phi_tt;
    p.phi_tx = [=](double t, double x) { return amp * kappa * kappa * std::sin(kappa * (x - t)); };
    return ExactSolution::from_closed_form("travelling_wave", 0.0, std::move(p), probe);
}

std::pair<ExactSolution, ExactSolution> backlund_cosh_pair(double mu, double lambda, double omega, double rapidity,
                                                           const ProbeRegion& probe) {
    if (!(mu > 0.0)) throw OracleRejected("backlund_cosh_pair needs mu > 0");
    // In the rest frame the pair is t-only with parameter lambda e^{-rapidity}.
    const double shift = std::asinh(lambda * std::exp(-rapidity) * omega / mu);
    return {boosted_cosh(mu, omega, rapidity, 0.0, probe), boosted_cosh(mu, omega, rapidity, shift, probe)};
}

}  // namespace liouville
