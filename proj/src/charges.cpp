#include "liouville/charges.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <tuple>

#include "liouville/errors.hpp"

namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;

double trapezoid(const std::vector<double>& f, double dx) {
    double sum = 0.5 * (f.front() + f.back());
    for (std::size_t j = 1; j + 1 < f.size(); ++j) sum += f[j];
    return sum * dx;
}

}  // namespace

double momentum(const FieldState& s) {
    const auto g1 = gradient(s.phi1, s.dx), g2 = gradient(s.phi2, s.dx);
    std::vector<double> d1(s.points()), d2(s.points());
    for (std::size_t j = 0; j < s.points(); ++j) {
        d1[j] = s.pi1[j] * g1[j];
        d2[j] = s.pi2[j] * g2[j];
    }
    return s.params.k / (4.0 * kPi) * (trapezoid(d1, s.dx) + trapezoid(d2, s.dx));
}

double energy(const FieldState& s) {
    const auto g1 = gradient(s.phi1, s.dx), g2 = gradient(s.phi2, s.dx);
    const double c = s.params.k / (8.0 * kPi);
    std::vector<double> d1(s.points()), d2(s.points());
    for (std::size_t j = 0; j < s.points(); ++j) {
        d1[j] = bulk_potential(s.params, s.phi1[j]) - c * (s.pi1[j] * s.pi1[j] + g1[j] * g1[j]);
        d2[j] = bulk_potential(s.params, s.phi2[j]) - c * (s.pi2[j] * s.pi2[j] + g2[j] * g2[j]);
    }
    return trapezoid(d1, s.dx) + trapezoid(d2, s.dx);
}

std::pair<double, double> border_values(const FieldState& s) {
    const BorderFunction b(s.params);
    return {b.value(s.phi1_at_defect(), s.phi2_at_defect()), b.partner(s.phi1_at_defect(), s.phi2_at_defect())};
}

Flux outer_flux(const FieldState& s, const StepConfig& cfg) {
    const double c = s.params.k / (4.0 * kPi);
    const std::size_t n = s.points();
    const auto g1 = gradient(s.phi1, s.dx), g2 = gradient(s.phi2, s.dx);
    const auto density = [&](double pt, double px, double phi) {
        return c * (0.5 * pt * pt + 0.5 * px * px) + bulk_potential(s.params, phi);
    };
    Flux f;
    f.momentum = density(s.pi2[n - 1], g2[n - 1], s.phi2[n - 1]) - density(s.pi1[0], g1[0], s.phi1[0]);
    f.energy = c * s.pi1[0] * g1[0] - c * s.pi2[n - 1] * g2[n - 1];

    if (cfg.boundary == BoundaryMode::sponge) {
        std::vector<double> e1(n), e2(n), p1(n), p2(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double s1 = sponge_sigma(cfg, s.L, s.x1(j)), s2 = sponge_sigma(cfg, s.L, s.x2(j));
            e1[j] = c * s1 * s.pi1[j] * s.pi1[j];
            e2[j] = c * s2 * s.pi2[j] * s.pi2[j];
            p1[j] = -c * s1 * s.pi1[j] * g1[j];
            p2[j] = -c * s2 * s.pi2[j] * g2[j];
        }
        f.energy += trapezoid(e1, s.dx) + trapezoid(e2, s.dx);
        f.momentum += trapezoid(p1, s.dx) + trapezoid(p2, s.dx);
    }
    return f;
}

ChargeSeries::ChargeSeries(StepConfig cfg) : cfg_(std::move(cfg)) {}

void ChargeSeries::record(const FieldState& s) {
    ChargeReport r;
    r.t = s.t;
    r.P = momentum(s);
    r.E = energy(s);
    if (cfg_.defect == DefectMode::backlund) std::tie(r.B0, r.M0) = border_values(s);
    r.P_mod = r.P + r.M0;
    r.E_mod = r.E - r.B0;
    const Flux now = outer_flux(s, cfg_);
    if (!reports_.empty()) {
        const ChargeReport& prev = reports_.back();
        const double dt = r.t - prev.t;
        r.flux_P = prev.flux_P + 0.5 * dt * (last_.momentum + now.momentum);
        r.flux_E = prev.flux_E + 0.5 * dt * (last_.energy + now.energy);
    }
    last_ = now;
    reports_.push_back(r);
}

DriftStats drift_monitor(const std::vector<ChargeReport>& series) {
    if (series.size() < 2) throw PreconditionError("drift_monitor needs at least 2 reports");
    const ChargeReport& r0 = series.front();
    DriftStats d;
    for (const ChargeReport& r : series) {
        d.P_mod = std::max(d.P_mod, std::abs(r.P_mod - r0.P_mod - (r.flux_P - r0.flux_P)));
        d.E_mod = std::max(d.E_mod, std::abs(r.E_mod - r0.E_mod - (r.flux_E - r0.flux_E)));
        d.P_raw = std::max(d.P_raw, std::abs(r.P - r0.P - (r.flux_P - r0.flux_P)));
        d.E_raw = std::max(d.E_raw, std::abs(r.E - r0.E - (r.flux_E - r0.flux_E)));
    }
    return d;
}

double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

void write_charge_csv(std::ostream& os, const std::vector<ChargeReport>& series) {
    os << "t,P,E,B0,M0,P_mod,E_mod,flux_P,flux_E\n";
    os << std::setprecision(17);
    for (const ChargeReport& r : series)
        os << r.t << ',' << r.P << ',' << r.E << ',' << r.B0 << ',' << r.M0 << ',' << r.P_mod << ',' << r.E_mod
           << ',' << r.flux_P << ',' << r.flux_E << '\n';
}

}  // namespace liouville
