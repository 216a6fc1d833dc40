#pragma once

#include <cstddef>
#include <vector>

#include "liouville/border.hpp"

namespace liouville {

/// Two half-line fields joined at the defect x = 0.
///
/// phi1/pi1 live on x_j = -L + j dx (j = 0..n-1, last point x = 0) and
/// phi2/pi2 on y_j = j dx (first point y = 0). Both grids carry their own
/// value at x = 0; nothing forces phi1(0) == phi2(0).
struct FieldState {
    std::vector<double> phi1, pi1;
    std::vector<double> phi2, pi2;
    Params params;
    double t = 0.0;
    double L = 1.0;
    double dx = 0.0;
    double dt = 0.0;

    /// Points per half-line, including x = 0.
    std::size_t points() const { return phi1.size(); }

    double x1(std::size_t j) const { return -L + static_cast<double>(j) * dx; }
    double x2(std::size_t j) const { return static_cast<double>(j) * dx; }

    double phi1_at_defect() const { return phi1.back(); }
    double phi2_at_defect() const { return phi2.front(); }
    double pi1_at_defect() const { return pi1.back(); }
    double pi2_at_defect() const { return pi2.front(); }

    double phi_plus() const { return phi1_at_defect() + phi2_at_defect(); }
    double phi_minus() const { return phi1_at_defect() - phi2_at_defect(); }

    /// Second-order one-sided x-derivatives at the defect.
    double phi1_x_at_defect() const;
    double phi2_x_at_defect() const;

    /// Light-cone derivatives d = (dt + dx)/2, dbar = (dt - dx)/2 at x = 0.
    double d_phi1_at_defect() const { return 0.5 * (pi1_at_defect() + phi1_x_at_defect()); }
    double dbar_phi1_at_defect() const { return 0.5 * (pi1_at_defect() - phi1_x_at_defect()); }
    double d_phi2_at_defect() const { return 0.5 * (pi2_at_defect() + phi2_x_at_defect()); }
    double dbar_phi2_at_defect() const { return 0.5 * (pi2_at_defect() - phi2_x_at_defect()); }
};

/// Allocates a state with n points per half-line over [-L, L] (dx = L / (n - 1)).
FieldState make_state(const Params& p, double L, std::size_t n, double dt, double t0 = 0.0);

/// Centered first derivative, second-order one-sided at both ends.
std::vector<double> gradient(const std::vector<double>& f, double dx);

}  // namespace liouville
