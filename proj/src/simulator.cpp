#include "liouville/simulator.hpp"

#include <cmath>
#include <sstream>

#include "liouville/errors.hpp"

namespace liouville {

BoundaryData oracle_boundary(const ExactSolution& sol, double x) {
    return {[sol, x](double t) { return sol.phi(t, x); }, [sol, x](double t) { return sol.phi_t(t, x); }};
}

double sponge_sigma(const StepConfig& cfg, double L, double x) {
    if (cfg.boundary != BoundaryMode::sponge) return 0.0;
    const double w = cfg.sponge_width * L;
    const double depth = std::abs(x) - (L - w);
    if (depth <= 0.0 || w <= 0.0) return 0.0;
    const double s = depth / w;
    return cfg.sponge_strength * s * s;
}

std::vector<double> bulk_rhs(const std::vector<double>& phi, double dx, double mu) {
    const std::size_t n = phi.size();
    std::vector<double> out(n >= 2 ? n - 2 : 0);
    const double inv = 1.0 / (dx * dx);
    for (std::size_t j = 1; j + 1 < n; ++j)
        out[j - 1] = (phi[j + 1] - 2.0 * phi[j] + phi[j - 1]) * inv + 4.0 * mu * mu * std::exp(-2.0 * phi[j]);
    return out;
}

std::pair<double, double> defect_closure(const Params& p, double phi1, double phi2, double phi1_t, double phi2_t) {
    const BorderFunction b(p);
    return {phi2_t - b.scaled_d_phi1(phi1, phi2), phi1_t + b.scaled_d_phi2(phi1, phi2)};
}

std::pair<double, double> defect_closure(const FieldState& s) {
    return defect_closure(s.params, s.phi1_at_defect(), s.phi2_at_defect(), s.pi1_at_defect(), s.pi2_at_defect());
}

namespace {

double potential_force(double mu, double phi) { return 4.0 * mu * mu * std::exp(-2.0 * phi); }

// Acceleration without the sponge term and without the velocity-dependent
// part of the defect closure. At x = 0 in backlund mode the closure adds
// +(2/dx) pi2 to field 1 and -(2/dx) pi1 to field 2; those are applied by
// the caller so the closing half-kick can treat them implicitly.
struct Accel {
    std::vector<double> a1, a2;
};

Accel conservative_accel(const FieldState& s, const StepConfig& cfg) {
    const std::size_t n = s.points();
    const double mu = s.params.mu;
    const double inv = 1.0 / (s.dx * s.dx);
    Accel acc{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};

    for (std::size_t j = 1; j + 1 < n; ++j) {
        acc.a1[j] = (s.phi1[j + 1] - 2.0 * s.phi1[j] + s.phi1[j - 1]) * inv + potential_force(mu, s.phi1[j]);
        acc.a2[j] = (s.phi2[j + 1] - 2.0 * s.phi2[j] + s.phi2[j - 1]) * inv + potential_force(mu, s.phi2[j]);
    }

    if (cfg.boundary == BoundaryMode::sponge) {
        acc.a1[0] = 2.0 * (s.phi1[1] - s.phi1[0]) * inv + potential_force(mu, s.phi1[0]);
        acc.a2[n - 1] = 2.0 * (s.phi2[n - 2] - s.phi2[n - 1]) * inv + potential_force(mu, s.phi2[n - 1]);
    }

    if (cfg.defect == DefectMode::none) {
        const double phi0 = s.phi1[n - 1];
        const double a0 = (s.phi1[n - 2] - 2.0 * phi0 + s.phi2[1]) * inv + potential_force(mu, phi0);
        acc.a1[n - 1] = a0;
        acc.a2[0] = a0;
    } else {
        const BorderFunction b(s.params);
        const double p1 = s.phi1[n - 1], p2 = s.phi2[0];
        acc.a1[n - 1] = 2.0 * (s.phi1[n - 2] - p1) * inv - 2.0 / s.dx * b.scaled_d_phi1(p1, p2) +
                        potential_force(mu, p1);
        acc.a2[0] = 2.0 * (s.phi2[1] - p2) * inv - 2.0 / s.dx * b.scaled_d_phi2(p1, p2) + potential_force(mu, p2);
    }
    return acc;
}

void check_bounds(const FieldState& s, double phi_max) {
    const auto scan = [&](const std::vector<double>& f, const char* name) {
        for (std::size_t j = 0; j < f.size(); ++j) {
            if (!std::isfinite(f[j]) || std::abs(f[j]) > phi_max) {
                std::ostringstream msg;
                msg << name << "[" << j << "] = " << f[j] << " at t = " << s.t << " exceeds phi_max = " << phi_max;
                throw BlowupError(msg.str());
            }
        }
    };
    scan(s.phi1, "phi1");
    scan(s.phi2, "phi2");
}

}  // namespace

FieldState step(const FieldState& s, const StepConfig& cfg) {
    const std::size_t n = s.points();
    if (n < 3 || s.phi2.size() != n || s.pi1.size() != n || s.pi2.size() != n)
        throw PreconditionError("field arrays must share a length of at least 3");
    const double dt = s.dt, h = 0.5 * s.dt;
    const bool exact = cfg.boundary == BoundaryMode::exact;
    const bool backlund = cfg.defect == DefectMode::backlund;
    if (exact && (!cfg.left.phi || !cfg.right.phi))
        throw PreconditionError("exact boundaries need left and right boundary data");

    std::vector<double> sig1(n), sig2(n);
    for (std::size_t j = 0; j < n; ++j) {
        sig1[j] = sponge_sigma(cfg, s.L, s.x1(j));
        sig2[j] = sponge_sigma(cfg, s.L, s.x2(j));
    }

    // First half-kick, explicit.
    FieldState out = s;
    Accel a = conservative_accel(s, cfg);
    if (backlund) {
        a.a1[n - 1] += 2.0 / s.dx * s.pi2[0];
        a.a2[0] -= 2.0 / s.dx * s.pi1[n - 1];
    }
    for (std::size_t j = 0; j < n; ++j) {
        out.pi1[j] += h * (a.a1[j] - sig1[j] * s.pi1[j]);
        out.pi2[j] += h * (a.a2[j] - sig2[j] * s.pi2[j]);
    }
    if (!backlund) out.pi2[0] = out.pi1[n - 1];

    // Drift.
    for (std::size_t j = 0; j < n; ++j) {
        out.phi1[j] += dt * out.pi1[j];
        out.phi2[j] += dt * out.pi2[j];
    }
    out.t = s.t + dt;
    if (exact) {
        out.phi1[0] = cfg.left.phi(out.t);
        out.phi2[n - 1] = cfg.right.phi(out.t);
    }
    check_bounds(out, cfg.phi_max);

    // Second half-kick, implicit in the damping and in the x = 0 coupling.
    a = conservative_accel(out, cfg);
    for (std::size_t j = 0; j < n; ++j) {
        out.pi1[j] = (out.pi1[j] + h * a.a1[j]) / (1.0 + h * sig1[j]);
        out.pi2[j] = (out.pi2[j] + h * a.a2[j]) / (1.0 + h * sig2[j]);
    }
    if (backlund) {
        // pi1' = beta1 + r pi2',  pi2' = beta2 - r pi1'  with r = dt / dx.
        const double r = dt / s.dx;
        const double beta1 = out.pi1[n - 1], beta2 = out.pi2[0];
        const double p1 = (beta1 + r * beta2) / (1.0 + r * r);
        out.pi1[n - 1] = p1;
        out.pi2[0] = beta2 - r * p1;
    } else {
        out.pi2[0] = out.pi1[n - 1];
    }
    if (exact) {
        out.pi1[0] = cfg.left.phi_t(out.t);
        out.pi2[n - 1] = cfg.right.phi_t(out.t);
    }
    return out;
}

FieldState evolve(FieldState s, const StepConfig& cfg, double t_end,
                  const std::function<void(const FieldState&)>& observe) {
    if (observe) observe(s);
    const double span = t_end - s.t;
    if (span <= 0.0) return s;
    if (!(s.dt > 0.0)) throw PreconditionError("dt must be positive");
    const auto steps = static_cast<long long>(std::ceil(span / s.dt - 1e-9));
    const double t0 = s.t;
    s.dt = span / static_cast<double>(steps);
    for (long long i = 0; i < steps; ++i) {
        s = step(s, cfg);
        s.t = t0 + static_cast<double>(i + 1) * s.dt;
        if (observe) observe(s);
    }
    return s;
}

void sample_oracles(FieldState& s, const ExactSolution& sol1, const ExactSolution& sol2) {
    for (std::size_t j = 0; j < s.points(); ++j) {
        s.phi1[j] = sol1.phi(s.t, s.x1(j));
        s.pi1[j] = sol1.phi_t(s.t, s.x1(j));
        s.phi2[j] = sol2.phi(s.t, s.x2(j));
        s.pi2[j] = sol2.phi_t(s.t, s.x2(j));
    }
}

}  // namespace liouville
