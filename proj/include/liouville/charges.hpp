#pragma once

// Momentum, energy and their defect-corrected versions P + M(t, 0) and
// E - B(t, 0), with the fluxes through the outer ends of the finite domain.

#include <iosfwd>
#include <utility>
#include <vector>

#include "liouville/field_state.hpp"
#include "liouville/simulator.hpp"

namespace liouville {

/// P = (k/4pi) sum_p int phi_t phi_x dx (trapezoid; one-sided derivatives at the ends).
double momentum(const FieldState& s);

/// E = sum_p int [V_p - (k/8pi)(phi_t^2 + phi_x^2)] dx.
double energy(const FieldState& s);

/// (B, M) evaluated at x = 0. Throws DivisionByZero if lambda == 0 and mu != 0.
std::pair<double, double> border_values(const FieldState& s);

/// Instantaneous rates dP/dt and dE/dt carried in through x = -L and x = +L,
/// plus the work done by the sponge layer.
struct Flux {
    double momentum = 0.0;
    double energy = 0.0;
};
Flux outer_flux(const FieldState& s, const StepConfig& cfg);

struct ChargeReport {
    double t = 0.0;
    double P = 0.0;
    double E = 0.0;
    double B0 = 0.0;
    double M0 = 0.0;
    double P_mod = 0.0;
    double E_mod = 0.0;
    double flux_P = 0.0;  // accumulated int dP/dt|outer dt since the first report
    double flux_E = 0.0;
};

/// Builds ChargeReports along a run, integrating the outer flux with the
/// trapezoid rule in time. Without a defect B0 and M0 are recorded as zero.
class ChargeSeries {
public:
    explicit ChargeSeries(StepConfig cfg);

    void record(const FieldState& s);
    const std::vector<ChargeReport>& reports() const { return reports_; }

private:
    StepConfig cfg_;
    std::vector<ChargeReport> reports_;
    Flux last_{};
};

struct DriftStats {
    double P_mod = 0.0;  // max |P_mod(t) - P_mod(0) - flux_P(t)|
    double E_mod = 0.0;
    double P_raw = 0.0;  // same for P without the M correction
    double E_raw = 0.0;
};

/// Needs at least 2 reports; throws PreconditionError otherwise.
DriftStats drift_monitor(const std::vector<ChargeReport>& series);

/// log2(coarse / fine): the convergence order for a halved step.
double observed_order(double coarse, double fine);

/// CSV with header t,P,E,B0,M0,P_mod,E_mod,flux_P,flux_E and 17 significant digits.
void write_charge_csv(std::ostream& os, const std::vector<ChargeReport>& series);

}  // namespace liouville
