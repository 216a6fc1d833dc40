#pragma once

// Gauge potentials of the Liouville model, their curvature on a space-time
// grid, gauge transformations, the defect residuals D1, D2 and the group
// element relating the two patch connections on their overlap.

#include <array>
#include <cstddef>
#include <vector>

#include "liouville/border.hpp"
#include "liouville/exact_solution.hpp"
#include "liouville/field_state.hpp"
#include "liouville/lie_sl2.hpp"

namespace liouville {

using lie::GroupElement;
using lie::LieElement;

/// Value and first/second derivatives of a scalar field at one point.
struct FieldJet {
    double phi = 0.0;
    double t = 0.0;
    double x = 0.0;
    double tt = 0.0;
    double tx = 0.0;
    double xx = 0.0;
};

FieldJet exact_jet(const ExactSolution& sol, double t, double x);

/// A Lie-algebra valued function with its t and x derivatives at a point.
struct LieJet {
    LieElement value, d_t, d_x;
};

struct BulkConnection {
    LieElement a_t, a_x;
};

/// A_t = -m E+ + m E- + (phi_x / 2) h,  A_x = m E+ + m E- + (phi_t / 2) h,  m = mu e^{-phi}.
BulkConnection bulk_connection(double phi, double phi_t, double phi_x, double mu);

/// Same potentials with their derivatives, from a field jet.
std::pair<LieJet, LieJet> bulk_connection_jet(const FieldJet& f, double mu);

/// d_t A_x - d_x A_t + [A_t, A_x] evaluated exactly from a jet; equals
/// (phi_tt - phi_xx - 4 mu^2 e^{-2 phi}) / 2 times h.
LieElement bulk_curvature(const FieldJet& f, double mu);

/// Uniform grid t_i = t0 + i dt, x_j = x0 + j dx.
struct SpaceTimeGrid {
    double t0 = 0.0, x0 = 0.0;
    double dt = 0.1, dx = 0.1;
    std::size_t nt = 0, nx = 0;

    double t(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
    double x(std::size_t j) const { return x0 + static_cast<double>(j) * dx; }
    std::size_t index(std::size_t i, std::size_t j) const { return i * nx + j; }
};

/// Where a patch connection lives: x < edge (left_of) or x > edge (right_of).
struct HalfLine {
    enum class Side { left_of, right_of, whole } side = Side::whole;
    double edge = 0.0;

    bool contains(double x) const {
        return side == Side::whole || (side == Side::left_of ? x < edge : x > edge);
    }
};

/// Grid-sampled (A_t, A_x); samples are indexed by SpaceTimeGrid::index.
struct Connection {
    SpaceTimeGrid grid;
    HalfLine domain;
    std::vector<LieElement> a_t, a_x;
};

/// Samples the bulk connection of an exact solution. Throws DomainError if a
/// grid point falls outside domain.
Connection sample_connection(const ExactSolution& sol, const SpaceTimeGrid& grid, double mu, HalfLine domain = {});

/// Curvature on the interior (nt - 2) x (nx - 2) points, centered differences.
/// Throws GridTooSmall if nt < 3 or nx < 3.
std::vector<LieElement> curvature_residual(const Connection& c);

/// A' = g A g^-1 - (dg) g^-1 with dg from centered (one-sided at edges)
/// differences. g is sampled on c.grid.
Connection gauge_transform(const std::vector<GroupElement>& g, const Connection& c);

struct DefectResiduals {
    double d1 = 0.0;
    double d2 = 0.0;
};

/// d1 = phi1_x - phi2_t + (4pi/k) dB/dphi1,  d2 = phi2_x - phi1_t - (4pi/k) dB/dphi2.
DefectResiduals defect_residuals(const FieldJet& f1, const FieldJet& f2, const BorderFunction& b);
DefectResiduals defect_residuals(const FieldState& s, const BorderFunction& b);

/// exp(-phi2 h / 2) exp(2 lambda E+) exp(phi1 h / 2)
GroupElement defect_gauge_element(double phi1, double phi2, double lambda);

/// Field data at one time on the overlap a < x < b.
struct OverlapState {
    double phi1 = 0.0, phi2 = 0.0;
    double phi1_t = 0.0, phi2_t = 0.0;
    double phi1_x = 0.0, phi2_x = 0.0;
};

OverlapState overlap_state(const FieldState& s);

/// Residual of  A1_t^ - [g A2_t^ g^-1 - (d_t g) g^-1]  for
/// g = exp(-phi2 h / 2) gc exp(phi1 h / 2), with d_t g from the product rule.
/// Throws PreconditionError if |phi_x| exceeds xtol on either field.
LieElement gauge_relation_residual(const OverlapState& s, const Params& p, const GroupElement& gc,
                                   double xtol = 1e-12);

/// The same with gc = exp(2 lambda E+).
LieElement verify_gauge_relation(const OverlapState& s, const Params& p, double xtol = 1e-12);

/// Solves for (l1, l2, l3) with gc = exp(l1 E+) exp(l2 h) exp(l3 E-) such that the
/// overlap relation holds at every sample (phi1, phi2). Each sample gives three
/// equations, scaled by lambda / mu and by the sample's largest exponential.
/// Damped Gauss-Newton from (0, 0, 0); NoSolution after 100 iterations without
/// reaching tol. PreconditionError if mu == 0 or the samples do not separate
/// the three exponential factors.
std::array<double, 3> solve_gauss_parameters(double mu, double lambda,
                                             const std::vector<std::pair<double, double>>& samples,
                                             double tol = 1e-10);

}  // namespace liouville
