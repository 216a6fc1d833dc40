#pragma once

// Backlund transformation integrated over a patch of the light-cone plane
// z = t + x, zbar = t - x:
//
//     d(phi1 - phi2)    = 2 mu lambda exp(-(phi1 + phi2)),
//     dbar(phi1 + phi2) = (mu / lambda) sinh(phi1 - phi2),
//
// with d = d/dz, dbar = d/dzbar.

#include <cstddef>
#include <vector>

#include "liouville/exact_solution.hpp"

namespace liouville {

/// Node (a, b) sits at z = z0 + a h, zbar = zbar0 + b h, a, b = 0..n-1.
struct LightConeGrid {
    double z0 = 0.0;
    double zbar0 = 0.0;
    double h = 0.1;
    std::size_t n = 11;

    double z(std::size_t a) const { return z0 + static_cast<double>(a) * h; }
    double zbar(std::size_t b) const { return zbar0 + static_cast<double>(b) * h; }
    double t(std::size_t a, std::size_t b) const { return 0.5 * (z(a) + zbar(b)); }
    double x(std::size_t a, std::size_t b) const { return 0.5 * (z(a) - zbar(b)); }
    std::size_t index(std::size_t a, std::size_t b) const { return a * n + b; }
};

/// A field and its light-cone derivatives on a LightConeGrid.
struct LightConeSamples {
    LightConeGrid grid;
    std::vector<double> phi, phi_z, phi_zbar;

    double at(std::size_t a, std::size_t b) const { return phi[grid.index(a, b)]; }
};

LightConeSamples sample_lightcone(const ExactSolution& sol, const LightConeGrid& grid);

/// Integrates phi2 from phi2(0, 0) = seed: trapezoid steps along z on the
/// b = 0 edge, then along zbar for every a. Each trapezoid step is implicit
/// and solved by a scalar Newton iteration. Derivatives of phi2 are filled
/// from the Backlund relations. Throws IntegrationDiverged if Newton fails
/// or a value becomes non-finite; PreconditionError if lambda == 0.
LightConeSamples backlund_generate(const LightConeSamples& phi1, double mu, double lambda, double seed);

/// Max over cells of |4 D phi - 4 mu^2 <exp(-2 phi)>| where D is the mixed
/// difference [phi(a+1,b+1) - phi(a+1,b) - phi(a,b+1) + phi(a,b)] / h^2 and
/// <.> is the corner average. Normalised like phi_tt - phi_xx - 4 mu^2 e^{-2 phi}.
double lightcone_liouville_residual(const LightConeSamples& s, double mu);

struct BacklundConsistency {
    double difference = 0.0;  // dbar d (phi1 - phi2) vs mu^2 (e^{-2 phi1} - e^{-2 phi2})
    double sum = 0.0;         // dbar d (phi1 + phi2) vs mu^2 (e^{-2 phi1} + e^{-2 phi2})
};

/// Discrete check of the cross-derivative identities, same stencil as above.
BacklundConsistency backlund_consistency(const LightConeSamples& phi1, const LightConeSamples& phi2, double mu);

/// Max |d(phi1 - phi2) - 2 mu lambda e^{-phi+}| and |dbar(phi1 + phi2) - (mu/lambda) sinh phi-|
/// using centered differences of the sampled values along each direction.
double backlund_relation_residual(const LightConeSamples& phi1, const LightConeSamples& phi2, double mu,
                                  double lambda);

}  // namespace liouville
