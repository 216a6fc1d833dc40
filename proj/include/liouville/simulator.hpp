#pragma once

// Method-of-lines evolution of the two half-line Liouville fields coupled
// through the defect conditions at x = 0.

#include <functional>
#include <utility>
#include <vector>

#include "liouville/exact_solution.hpp"
#include "liouville/field_state.hpp"

namespace liouville {

enum class DefectMode {
    backlund,  // frozen Backlund sewing conditions at x = 0
    none,      // the two grids are glued into one bulk field
};

enum class BoundaryMode {
    exact,   // Dirichlet data for (phi, phi_t) at x = -L and x = +L
    sponge,  // Neumann ends plus a damping layer
};

/// Time history of (phi, phi_t) at one outer end.
struct BoundaryData {
    std::function<double(double t)> phi;
    std::function<double(double t)> phi_t;
};

/// Samples an oracle at fixed x.
BoundaryData oracle_boundary(const ExactSolution& sol, double x);

struct StepConfig {
    DefectMode defect = DefectMode::backlund;
    BoundaryMode boundary = BoundaryMode::exact;
    BoundaryData left;   // x = -L
    BoundaryData right;  // x = +L
    double sponge_width = 0.25;     // fraction of L
    double sponge_strength = 20.0;  // peak damping rate
    double phi_max = 30.0;
};

/// Damping rate sigma(x) used by the sponge; zero for exact boundaries.
double sponge_sigma(const StepConfig& cfg, double L, double x);

/// phi_xx + 4 mu^2 exp(-2 phi) at the interior points (size n - 2).
std::vector<double> bulk_rhs(const std::vector<double>& phi, double dx, double mu);

/// (phi1_x(0), phi2_x(0)) demanded by the defect conditions given the
/// field values and time derivatives at x = 0.
std::pair<double, double> defect_closure(const Params& p, double phi1, double phi2, double phi1_t, double phi2_t);
std::pair<double, double> defect_closure(const FieldState& s);

/// Advances one dt by velocity Stormer-Verlet. Throws BlowupError when any
/// |phi| exceeds cfg.phi_max or turns non-finite.
FieldState step(const FieldState& s, const StepConfig& cfg);

/// Steps until t_end. If dt does not divide the span, dt is shrunk uniformly.
/// observe (optional) sees the initial state and every stepped state.
FieldState evolve(FieldState s, const StepConfig& cfg, double t_end,
                  const std::function<void(const FieldState&)>& observe = {});

/// Fills phi1 from sol1 on [-L, 0] and phi2 from sol2 on [0, L] at time s.t.
void sample_oracles(FieldState& s, const ExactSolution& sol1, const ExactSolution& sol2);

}  // namespace liouville
