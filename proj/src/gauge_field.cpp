#include "liouville/gauge_field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "liouville/errors.hpp"

namespace liouville {

using lie::commutator;
using lie::Mat2;

FieldJet exact_jet(const ExactSolution& sol, double t, double x) {
    return {sol.phi(t, x), sol.phi_t(t, x), sol.phi_x(t, x), sol.phi_tt(t, x), sol.phi_tx(t, x), sol.phi_xx(t, x)};
}

BulkConnection bulk_connection(double phi, double phi_t, double phi_x, double mu) {
    const double m = mu * std::exp(-phi);
    return {{0.5 * phi_x, -m, m}, {0.5 * phi_t, m, m}};
}

std::pair<LieJet, LieJet> bulk_connection_jet(const FieldJet& f, double mu) {
    const double m = mu * std::exp(-f.phi);
    const double m_t = -m * f.t, m_x = -m * f.x;
    LieJet at{{0.5 * f.x, -m, m}, {0.5 * f.tx, -m_t, m_t}, {0.5 * f.xx, -m_x, m_x}};
    LieJet ax{{0.5 * f.t, m, m}, {0.5 * f.tt, m_t, m_t}, {0.5 * f.tx, m_x, m_x}};
    return {at, ax};
}

LieElement bulk_curvature(const FieldJet& f, double mu) {
    const auto [at, ax] = bulk_connection_jet(f, mu);
    return ax.d_t - at.d_x + commutator(at.value, ax.value);
}

Connection sample_connection(const ExactSolution& sol, const SpaceTimeGrid& grid, double mu, HalfLine domain) {
    Connection c;
    c.grid = grid;
    c.domain = domain;
    c.a_t.resize(grid.nt * grid.nx);
    c.a_x.resize(grid.nt * grid.nx);
    for (std::size_t i = 0; i < grid.nt; ++i) {
        for (std::size_t j = 0; j < grid.nx; ++j) {
            const double t = grid.t(i), x = grid.x(j);
            if (!domain.contains(x)) {
                std::ostringstream msg;
                msg << "grid point x = " << x << " lies outside the connection's half-line";
                throw DomainError(msg.str());
            }
            const BulkConnection a = bulk_connection(sol.phi(t, x), sol.phi_t(t, x), sol.phi_x(t, x), mu);
            c.a_t[grid.index(i, j)] = a.a_t;
            c.a_x[grid.index(i, j)] = a.a_x;
        }
    }
    return c;
}

std::vector<LieElement> curvature_residual(const Connection& c) {
    const SpaceTimeGrid& g = c.grid;
    if (g.nt < 3 || g.nx < 3) throw GridTooSmall("curvature needs at least 3 x 3 samples");
    if (c.a_t.size() != g.nt * g.nx || c.a_x.size() != g.nt * g.nx)
        throw GridTooSmall("connection samples do not match the grid");
    std::vector<LieElement> out;
    out.reserve((g.nt - 2) * (g.nx - 2));
    for (std::size_t i = 1; i + 1 < g.nt; ++i) {
        for (std::size_t j = 1; j + 1 < g.nx; ++j) {
            const LieElement dt_ax = (c.a_x[g.index(i + 1, j)] - c.a_x[g.index(i - 1, j)]) * (0.5 / g.dt);
            const LieElement dx_at = (c.a_t[g.index(i, j + 1)] - c.a_t[g.index(i, j - 1)]) * (0.5 / g.dx);
            out.push_back(dt_ax - dx_at + commutator(c.a_t[g.index(i, j)], c.a_x[g.index(i, j)]));
        }
    }
    return out;
}

namespace {

// Second-order derivative of a sampled matrix along one axis.
Mat2 derivative(const std::vector<GroupElement>& g, std::size_t n, std::size_t k,
                const std::function<std::size_t(std::size_t)>& at, double h) {
    const auto m = [&](std::size_t q) { return g[at(q)].matrix(); };
    if (k == 0) return (m(0) * -3.0 + m(1) * 4.0 - m(2)) * (0.5 / h);
    if (k + 1 == n) return (m(n - 1) * 3.0 - m(n - 2) * 4.0 + m(n - 3)) * (0.5 / h);
    return (m(k + 1) - m(k - 1)) * (0.5 / h);
}

}  // namespace

Connection gauge_transform(const std::vector<GroupElement>& g, const Connection& c) {
    const SpaceTimeGrid& grid = c.grid;
    if (g.size() != grid.nt * grid.nx) throw PreconditionError("gauge samples do not match the connection grid");
    if (grid.nt < 3 || grid.nx < 3) throw GridTooSmall("gauge_transform needs at least 3 x 3 samples");
    Connection out = c;
    for (std::size_t i = 0; i < grid.nt; ++i) {
        for (std::size_t j = 0; j < grid.nx; ++j) {
            const std::size_t k = grid.index(i, j);
            const Mat2 ginv = g[k].inverse().matrix();
            const Mat2 gt = derivative(g, grid.nt, i, [&](std::size_t q) { return grid.index(q, j); }, grid.dt);
            const Mat2 gx = derivative(g, grid.nx, j, [&](std::size_t q) { return grid.index(i, q); }, grid.dx);
            out.a_t[k] = lie::adjoint(g[k], c.a_t[k]) - lie::traceless_part(gt * ginv);
            out.a_x[k] = lie::adjoint(g[k], c.a_x[k]) - lie::traceless_part(gx * ginv);
        }
    }
    return out;
}

DefectResiduals defect_residuals(const FieldJet& f1, const FieldJet& f2, const BorderFunction& b) {
    return {f1.x - f2.t + b.scaled_d_phi1(f1.phi, f2.phi), f2.x - f1.t - b.scaled_d_phi2(f1.phi, f2.phi)};
}

DefectResiduals defect_residuals(const FieldState& s, const BorderFunction& b) {
    FieldJet f1, f2;
    f1.phi = s.phi1_at_defect();
    f1.t = s.pi1_at_defect();
    f1.x = s.phi1_x_at_defect();
    f2.phi = s.phi2_at_defect();
    f2.t = s.pi2_at_defect();
    f2.x = s.phi2_x_at_defect();
    return defect_residuals(f1, f2, b);
}

GroupElement defect_gauge_element(double phi1, double phi2, double lambda) {
    return lie::exp_alg(LieElement::h() * (-0.5 * phi2)) * lie::exp_alg(LieElement::e_plus() * (2.0 * lambda)) *
           lie::exp_alg(LieElement::h() * (0.5 * phi1));
}

OverlapState overlap_state(const FieldState& s) {
    return {s.phi1_at_defect(), s.phi2_at_defect(), s.pi1_at_defect(),
            s.pi2_at_defect(),  s.phi1_x_at_defect(), s.phi2_x_at_defect()};
}

namespace {

// The relation is evaluated in extended precision: at |phi| ~ 5 its terms reach
// e^{15} and cancel analytically, which double rounding cannot resolve to 1e-10.
using Real = long double;

struct Coeffs {
    Real h = 0, p = 0, m = 0;

    Coeffs operator+(const Coeffs& o) const { return {h + o.h, p + o.p, m + o.m}; }
    Coeffs operator-(const Coeffs& o) const { return {h - o.h, p - o.p, m - o.m}; }
    Coeffs operator*(Real s) const { return {h * s, p * s, m * s}; }
};

// Ad of exp(s h) scales E+ by e^{2s} and E- by e^{-2s}.
Coeffs scale_by_h(const Coeffs& a, Real s) { return {a.h, a.p * std::exp(2 * s), a.m * std::exp(-2 * s)}; }

Coeffs adjoint_ext(const Mat2& g, const Coeffs& a) {
    const Real ga = g.a, gb = g.b, gc = g.c, gd = g.d;
    const Real det = ga * gd - gb * gc;
    // X = [[h, p], [m, -h]];  g X adj(g) / det
    const Real x00 = ga * a.h + gb * a.m, x01 = ga * a.p - gb * a.h;
    const Real x10 = gc * a.h + gd * a.m, x11 = gc * a.p - gd * a.h;
    const Real y00 = x00 * gd - x01 * gc, y01 = -x00 * gb + x01 * ga;
    const Real y10 = x10 * gd - x11 * gc, y11 = -x10 * gb + x11 * ga;
    return {(y00 - y11) / (2 * det), y01 / det, y10 / det};
}

// g a g^-1 for g = exp(-phi2 h / 2) gc exp(phi1 h / 2), one factor at a time.
Coeffs sandwich(Real phi1, Real phi2, const GroupElement& gc, const Coeffs& a) {
    return scale_by_h(adjoint_ext(gc.matrix(), scale_by_h(a, phi1 / 2)), -phi2 / 2);
}

}  // namespace

LieElement gauge_relation_residual(const OverlapState& s, const Params& p, const GroupElement& gc, double xtol) {
    if (std::abs(s.phi1_x) > xtol || std::abs(s.phi2_x) > xtol) {
        std::ostringstream msg;
        msg << "overlap relation needs phi_x = 0, got (" << s.phi1_x << ", " << s.phi2_x << ")";
        throw PreconditionError(msg.str());
    }
    const BorderFunction border(p);  // validates lambda
    const Real mu = p.mu, lam = p.lambda;
    const Real f1 = s.phi1, f2 = s.phi2;
    // (4pi/k) dB/dphi_p with k cancelled, as in BorderFunction::scaled_d_phi*.
    const Real plus = -2 * mu * lam * std::exp(-(f1 + f2));
    const Real minus = mu == 0 ? Real(0) : (mu / lam) * std::sinh(f1 - f2);
    const Real d1 = s.phi1_x - s.phi2_t + (plus + minus);
    const Real d2 = s.phi2_x - s.phi1_t - (plus - minus);

    // On a < x < b both step prefactors equal one.
    const Real m1 = mu * std::exp(-f1), m2 = mu * std::exp(-f2);
    const Coeffs a1{Real(s.phi1_x) / 2 - d1 / 2, -m1, m1};
    const Coeffs a2{Real(s.phi2_x) / 2 - d2 / 2, -m2, m2};
    const Coeffs h{1, 0, 0};

    // d_t g g^-1 = -(phi2_t / 2) h + (phi1_t / 2) g h g^-1 by the product rule.
    const Coeffs dg = h * (-Real(s.phi2_t) / 2) + sandwich(f1, f2, gc, h) * (Real(s.phi1_t) / 2);
    const Coeffs r = a1 - (sandwich(f1, f2, gc, a2) - dg);
    return {static_cast<double>(r.h), static_cast<double>(r.p), static_cast<double>(r.m)};
}

LieElement verify_gauge_relation(const OverlapState& s, const Params& p, double xtol) {
    return gauge_relation_residual(s, p, lie::exp_alg(LieElement::e_plus() * (2.0 * p.lambda)), xtol);
}

namespace {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

double det3(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

bool solve3(const Mat3& m, const Vec3& r, Vec3& x) {
    const double d = det3(m);
    if (!std::isfinite(d) || d == 0.0) return false;
    for (int c = 0; c < 3; ++c) {
        Mat3 mc = m;
        for (int i = 0; i < 3; ++i) mc[i][c] = r[i];
        x[c] = det3(mc) / d;
    }
    return true;
}

struct GaussSystem {
    double lambda;
    std::vector<std::pair<double, double>> samples;

    // Residual (3 per sample) and optionally its Jacobian (rows of 3).
    void eval(const Vec3& l, std::vector<double>& r, std::vector<Vec3>* jac) const {
        const GroupElement gc = lie::gauss_compose(l[0], l[1], l[2]);
        const LieElement ep = LieElement::e_plus(), em = LieElement::e_minus(), h = LieElement::h();
        const LieElement ad_ep = lie::adjoint(gc, ep), ad_em = lie::adjoint(gc, em), ad_h = lie::adjoint(gc, h);
        const std::array<LieElement, 3> y{ep, h - ep * (2.0 * l[0]), ad_em};
        r.clear();
        if (jac) jac->clear();
        for (const auto& [p1, p2] : samples) {
            const double ea = std::exp(p1 - p2), eb = std::exp(p2 - p1), ec = std::exp(-p1 - p2);
            const double sh = std::sinh(p1 - p2);
            const double scale = 1.0 / std::max({ea, eb, ec});
            const double ch = -lambda * lambda * ec - 0.5 * sh;
            const LieElement f = (ad_ep * (-lambda * ea) + em * (-lambda * ec) + ad_em * (lambda * ec) +
                                  ep * (lambda * eb) + h * (-lambda * lambda * ec + 0.5 * sh) + ad_h * ch) *
                                 scale;
            r.push_back(f.c_h);
            r.push_back(f.c_p);
            r.push_back(f.c_m);
            if (!jac) continue;
            std::array<LieElement, 3> cols;
            for (int i = 0; i < 3; ++i)
                cols[i] = (commutator(y[i], ad_ep) * (-lambda * ea) + commutator(y[i], ad_em) * (lambda * ec) +
                           commutator(y[i], ad_h) * ch) *
                          scale;
            jac->push_back({cols[0].c_h, cols[1].c_h, cols[2].c_h});
            jac->push_back({cols[0].c_p, cols[1].c_p, cols[2].c_p});
            jac->push_back({cols[0].c_m, cols[1].c_m, cols[2].c_m});
        }
    }
};

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double sum_sq(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

Vec3 gauss_newton(const GaussSystem& sys, Vec3 l, double tol);

}  // namespace

std::array<double, 3> solve_gauss_parameters(double mu, double lambda,
                                             const std::vector<std::pair<double, double>>& samples, double tol) {
    if (mu == 0.0) throw PreconditionError("solve_gauss_parameters needs mu != 0");
    if (samples.size() < 3) throw PreconditionError("solve_gauss_parameters needs at least 3 samples");

    // The three exponential factors must be linearly independent over the samples.
    Mat3 gram{};
    for (const auto& [p1, p2] : samples) {
        Vec3 v{std::exp(p1 - p2), std::exp(p2 - p1), std::exp(-p1 - p2)};
        const double n = std::max({v[0], v[1], v[2]});
        for (double& c : v) c /= n;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) gram[i][j] += v[i] * v[j];
    }
    const double tr = gram[0][0] + gram[1][1] + gram[2][2];
    if (!(det3(gram) > 1e-12 * tr * tr * tr))
        throw PreconditionError("samples are not in general position (exponential factors are dependent)");

    // Continuation in lambda from (0, 0, 0): each stage is seeded by the last.
    const int stages = std::max(1, static_cast<int>(std::ceil(std::abs(lambda) / 0.25)));
    Vec3 l{0.0, 0.0, 0.0};
    for (int k = 1; k <= stages; ++k) {
        const double lk = lambda * static_cast<double>(k) / static_cast<double>(stages);
        l = gauss_newton({lk, samples}, l, k == stages ? tol : 1e-6);
    }
    return l;
}

namespace {

Vec3 gauss_newton(const GaussSystem& sys, Vec3 l, double tol) {
    std::vector<double> r, r_try;
    std::vector<Vec3> jac;
    sys.eval(l, r, &jac);
    double damping = 1e-6;
    for (int it = 0; it < 100; ++it) {
        if (max_abs(r) < 1e-15) return l;
        Mat3 jtj{};
        Vec3 jtr{};
        for (std::size_t k = 0; k < r.size(); ++k) {
            for (int i = 0; i < 3; ++i) {
                jtr[i] -= jac[k][i] * r[k];
                for (int j = 0; j < 3; ++j) jtj[i][j] += jac[k][i] * jac[k][j];
            }
        }
        bool accepted = false;
        Vec3 step{};
        for (int tries = 0; tries < 30 && !accepted; ++tries) {
            Mat3 a = jtj;
            for (int i = 0; i < 3; ++i) a[i][i] += damping * std::max(jtj[i][i], 1e-12);
            if (!solve3(a, jtr, step)) {
                damping *= 10.0;
                continue;
            }
            const Vec3 trial{l[0] + step[0], l[1] + step[1], l[2] + step[2]};
            sys.eval(trial, r_try, nullptr);
            if (std::isfinite(sum_sq(r_try)) && sum_sq(r_try) <= sum_sq(r)) {
                l = trial;
                accepted = true;
                damping = std::max(damping * 0.1, 1e-12);
            } else {
                damping *= 10.0;
            }
        }
        if (!accepted) break;
        sys.eval(l, r, &jac);
        const double size = std::max({std::abs(step[0]), std::abs(step[1]), std::abs(step[2])});
        if (max_abs(r) < tol && size < 1e-12 * (1.0 + std::abs(l[0]) + std::abs(l[1]) + std::abs(l[2]))) return l;
    }
    if (max_abs(r) < tol) return l;
    std::ostringstream msg;
    msg << "Gauss parameters did not converge; residual " << max_abs(r);
    throw NoSolution(msg.str());
}

}  // namespace

}  // namespace liouville
