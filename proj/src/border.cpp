#include "liouville/border.hpp"

#include <cmath>
#include <numbers>

#include "liouville/errors.hpp"

namespace liouville {

namespace {
constexpr double kPi = std::numbers::pi;
}

BorderFunction::BorderFunction(const Params& p) : p_(p) {
    if (p.lambda == 0.0 && p.mu != 0.0) throw DivisionByZero("border function needs lambda != 0 when mu != 0");
}

double BorderFunction::b_plus(double phi_plus) const {
    return p_.k / (2.0 * kPi) * p_.mu * p_.lambda * std::exp(-phi_plus);
}

double BorderFunction::b_minus(double phi_minus) const {
    if (p_.mu == 0.0) return 0.0;
    return p_.k / (4.0 * kPi) * (p_.mu / p_.lambda) * std::cosh(phi_minus);
}

double BorderFunction::db_plus(double phi_plus) const { return -b_plus(phi_plus); }

double BorderFunction::db_minus(double phi_minus) const {
    if (p_.mu == 0.0) return 0.0;
    return p_.k / (4.0 * kPi) * (p_.mu / p_.lambda) * std::sinh(phi_minus);
}

double BorderFunction::d2b_plus(double phi_plus) const { return b_plus(phi_plus); }
double BorderFunction::d2b_minus(double phi_minus) const { return b_minus(phi_minus); }

double BorderFunction::value(double phi1, double phi2) const {
    return b_plus(phi1 + phi2) + b_minus(phi1 - phi2);
}

double BorderFunction::partner(double phi1, double phi2) const {
    return b_plus(phi1 + phi2) - b_minus(phi1 - phi2);
}

double BorderFunction::d_phi1(double phi1, double phi2) const {
    return db_plus(phi1 + phi2) + db_minus(phi1 - phi2);
}

double BorderFunction::d_phi2(double phi1, double phi2) const {
    return db_plus(phi1 + phi2) - db_minus(phi1 - phi2);
}

double BorderFunction::d2_phi1_phi1(double phi1, double phi2) const {
    return d2b_plus(phi1 + phi2) + d2b_minus(phi1 - phi2);
}

double BorderFunction::d2_phi1_phi2(double phi1, double phi2) const {
    return d2b_plus(phi1 + phi2) - d2b_minus(phi1 - phi2);
}

double BorderFunction::d2_phi2_phi2(double phi1, double phi2) const {
    return d2b_plus(phi1 + phi2) + d2b_minus(phi1 - phi2);
}

double BorderFunction::partner_d_phi1(double phi1, double phi2) const {
    return db_plus(phi1 + phi2) - db_minus(phi1 - phi2);
}

double BorderFunction::partner_d_phi2(double phi1, double phi2) const {
    return db_plus(phi1 + phi2) + db_minus(phi1 - phi2);
}

double BorderFunction::scaled_d_phi1(double phi1, double phi2) const {
    // (4pi/k) dB+/dphi+ = -2 mu lambda e^{-phi+},  (4pi/k) dB-/dphi- = (mu/lambda) sinh phi-
    const double plus = -2.0 * p_.mu * p_.lambda * std::exp(-(phi1 + phi2));
    const double minus = p_.mu == 0.0 ? 0.0 : (p_.mu / p_.lambda) * std::sinh(phi1 - phi2);
    return plus + minus;
}

double BorderFunction::scaled_d_phi2(double phi1, double phi2) const {
    const double plus = -2.0 * p_.mu * p_.lambda * std::exp(-(phi1 + phi2));
    const double minus = p_.mu == 0.0 ? 0.0 : (p_.mu / p_.lambda) * std::sinh(phi1 - phi2);
    return plus - minus;
}

double bulk_potential(const Params& p, double phi) {
    return -p.k * p.mu * p.mu / (2.0 * kPi) * std::exp(-2.0 * phi);
}

}  // namespace liouville
