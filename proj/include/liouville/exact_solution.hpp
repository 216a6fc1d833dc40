#pragma once

// Closed-form solutions of phi_tt - phi_xx = 4 mu^2 exp(-2 phi), used as
// oracles for the simulator and as Dirichlet data. Every factory checks the
// residual on a probe grid before handing the solution out.

#include <functional>
#include <string>
#include <utility>

namespace liouville {

struct ProbeRegion {
    double t_min = -1.0, t_max = 1.0;
    double x_min = -1.0, x_max = 1.0;
    int n = 9;  // probe points per axis
};

class ExactSolution {
public:
    using Field = std::function<double(double t, double x)>;

    struct Parts {
        Field phi, phi_t, phi_x, phi_tt, phi_xx, phi_tx;
    };

    const std::string& name() const { return name_; }
    double mu() const { return mu_; }

    double phi(double t, double x) const { return parts_.phi(t, x); }
    double phi_t(double t, double x) const { return parts_.phi_t(t, x); }
    double phi_x(double t, double x) const { return parts_.phi_x(t, x); }
    double phi_tt(double t, double x) const { return parts_.phi_tt(t, x); }
    double phi_xx(double t, double x) const { return parts_.phi_xx(t, x); }
    double phi_tx(double t, double x) const { return parts_.phi_tx(t, x); }

    /// phi_tt - phi_xx - 4 mu^2 exp(-2 phi), from the analytic derivatives.
    double residual(double t, double x) const;

    /// Max |residual| over the probe grid; infinity if any sample is not finite.
    double max_residual(const ProbeRegion& probe) const;

    /// Validates parts against the field equation on the probe region and
    /// throws OracleRejected if the residual exceeds tol.
    static ExactSolution from_closed_form(std::string name, double mu, Parts parts, const ProbeRegion& probe,
                                          double tol = 1e-8);

private:
    ExactSolution(std::string name, double mu, Parts parts)
        : name_(std::move(name)), mu_(mu), parts_(std::move(parts)) {}

    std::string name_;
    double mu_ = 1.0;
    Parts parts_;
};

/// phi = ln(2 mu (x - x0)); the probe region must stay to the right of x0.
ExactSolution static_log(double mu, double x0, const ProbeRegion& probe);

/// phi = ln((2 mu / omega) cosh(omega t)), omega > 0.
ExactSolution cosh_time(double mu, double omega, const ProbeRegion& probe);

/// A function of one light-cone variable with three derivatives.
struct ConeFunction {
    std::function<double(double)> f, d1, d2, d3;
};

/// General solution phi = ln mu + ln|F(z) - G(zbar)| - ln F'(z)/2 - ln G'(zbar)/2
/// with z = t + x, zbar = t - x and F', G' > 0. The derivative callables are
/// cross-checked against finite differences of F and G.
ExactSolution custom_solution(double mu, const ConeFunction& F, const ConeFunction& G, const ProbeRegion& probe);

/// Boosted cosh_time: phi = ln((2 mu / omega) cosh(omega T - shift)),
/// T = t cosh(rapidity) + x sinh(rapidity).
ExactSolution boosted_cosh(double mu, double omega, double rapidity, double shift, const ProbeRegion& probe);

/// Free field (mu = 0): phi = offset + amp sin(kappa (x - t)).
ExactSolution travelling_wave(double amp, double kappa, double offset, const ProbeRegion& probe);

/// An exact pair related by the Backlund transformation at every (t, x):
///
///     d(phi1 - phi2)    = 2 mu lambda exp(-(phi1 + phi2)),
///     dbar(phi1 + phi2) = (mu / lambda) sinh(phi1 - phi2).
///
/// phi1 is boosted_cosh with zero shift; phi2 is the same with shift delta,
/// sinh(delta) = lambda exp(-rapidity) omega / mu.
std::pair<ExactSolution, ExactSolution> backlund_cosh_pair(double mu, double lambda, double omega, double rapidity,
                                                           const ProbeRegion& probe);

}  // namespace liouville
