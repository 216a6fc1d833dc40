#pragma once

#include <numbers>

namespace liouville {

/// Couplings shared by the bulk and the defect.
struct Params {
    double mu = 1.0;      // mass scale
    double k = -4.0 * std::numbers::pi;  // normalization; negative k keeps E bounded below
    double lambda = 1.0;  // defect / Backlund parameter
};

/// Border function B(phi1, phi2) = B+(phi+) + B-(phi-) with
///
///     B+ = (k / 2pi) mu lambda exp(-phi+),
///     B- = (k / 4pi) (mu / lambda) cosh(phi-),
///
/// phi+ = phi1 + phi2, phi- = phi1 - phi2, and its partner M = B+ - B-.
class BorderFunction {
public:
    /// Throws DivisionByZero if lambda == 0 while mu != 0.
    explicit BorderFunction(const Params& p);

    double b_plus(double phi_plus) const;
    double b_minus(double phi_minus) const;
    double db_plus(double phi_plus) const;    // dB+/dphi+
    double db_minus(double phi_minus) const;  // dB-/dphi-
    double d2b_plus(double phi_plus) const;
    double d2b_minus(double phi_minus) const;

    double value(double phi1, double phi2) const;
    double partner(double phi1, double phi2) const;  // M

    // Chain rule through phi± = phi1 ± phi2.
    double d_phi1(double phi1, double phi2) const;
    double d_phi2(double phi1, double phi2) const;
    double d2_phi1_phi1(double phi1, double phi2) const;
    double d2_phi1_phi2(double phi1, double phi2) const;
    double d2_phi2_phi2(double phi1, double phi2) const;
    double partner_d_phi1(double phi1, double phi2) const;
    double partner_d_phi2(double phi1, double phi2) const;

    /// (4pi/k) dB/dphi_p with k cancelled analytically; these are what the
    /// defect conditions use, so the closure does not depend on k.
    double scaled_d_phi1(double phi1, double phi2) const;
    double scaled_d_phi2(double phi1, double phi2) const;

    const Params& params() const { return p_; }

private:
    Params p_;
};

/// Bulk potential V = -(k mu^2 / 2pi) exp(-2 phi).
double bulk_potential(const Params& p, double phi);

}  // namespace liouville
