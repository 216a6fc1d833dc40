#include "liouville/field_state.hpp"

#include "liouville/errors.hpp"

namespace liouville {

double FieldState::phi1_x_at_defect() const {
    const std::size_t n = phi1.size();
    return (3.0 * phi1[n - 1] - 4.0 * phi1[n - 2] + phi1[n - 3]) / (2.0 * dx);
}

double FieldState::phi2_x_at_defect() const {
    return (-3.0 * phi2[0] + 4.0 * phi2[1] - phi2[2]) / (2.0 * dx);
}

FieldState make_state(const Params& p, double L, std::size_t n, double dt, double t0) {
    if (n < 3) throw PreconditionError("need at least 3 points per half-line");
    if (L <= 0.0) throw PreconditionError("L must be positive");
    FieldState s;
    s.params = p;
    s.L = L;
    s.dx = L / static_cast<double>(n - 1);
    s.dt = dt;
    s.t = t0;
    s.phi1.assign(n, 0.0);
    s.pi1.assign(n, 0.0);
    s.phi2.assign(n, 0.0);
    s.pi2.assign(n, 0.0);
    return s;
}

std::vector<double> gradient(const std::vector<double>& f, double dx) {
    const std::size_t n = f.size();
    if (n < 3) throw PreconditionError("gradient needs at least 3 samples");
    std::vector<double> g(n);
    g[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
    for (std::size_t j = 1; j + 1 < n; ++j) g[j] = (f[j + 1] - f[j - 1]) / (2.0 * dx);
    g[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
    return g;
}

}  // namespace liouville
