#include "liouville/distributional.hpp"

#include <cmath>

#include "liouville/errors.hpp"

namespace liouville {

using lie::commutator;

double step_value(Step s, double x, double c) {
    switch (s) {
        case Step::both: return x != c ? 1.0 : 0.0;
        case Step::left: return x < c ? 1.0 : 0.0;
        case Step::right: return x > c ? 1.0 : 0.0;
        case Step::product: return 0.0;
    }
    return 0.0;
}

LieElement DistributionalExpr::smooth_at(double x) const {
    LieElement out;
    for (Step s : {Step::both, Step::left, Step::right, Step::product}) out += (*this)[s] * step_value(s, x, center);
    return out;
}

namespace {

constexpr std::array<Step, 4> kSteps{Step::both, Step::left, Step::right, Step::product};

// Expands step_i * step_j over the basis (squares of one-sided steps are
// themselves; theta(x-c) theta(c-x) is kept as its own basis element).
std::array<double, 4> multiply(Step i, Step j) {
    std::array<double, 4> m{};
    const auto add = [&m](Step s, double w) { m[static_cast<int>(s)] += w; };
    if (i == Step::product || j == Step::product) {
        add(Step::product, i == Step::both || j == Step::both ? 2.0 : 1.0);
        return m;
    }
    if (i == Step::both && j == Step::both) {
        add(Step::both, 1.0);
        add(Step::product, 2.0);
    } else if (i == Step::both || j == Step::both) {
        add(i == Step::both ? j : i, 1.0);
        add(Step::product, 1.0);
    } else if (i == j) {
        add(i, 1.0);
    } else {
        add(Step::product, 1.0);
    }
    return m;
}

// D1 or D2 with derivatives, from the defect-point jets.
LieJet defect_term(int patch, const FieldJet& f1, const FieldJet& f2, const Params& p) {
    const BorderFunction b(p);
    const double pp = p.mu == 0.0 ? 0.0 : 2.0 * p.mu * p.lambda * std::exp(-(f1.phi + f2.phi));
    const double qp = p.mu == 0.0 ? 0.0 : (p.mu / p.lambda) * std::cosh(f1.phi - f2.phi);
    double d, d_t, d_x;
    if (patch == 1) {
        d = f1.x - f2.t + b.scaled_d_phi1(f1.phi, f2.phi);
        d_t = f1.tx - f2.tt + (pp + qp) * f1.t + (pp - qp) * f2.t;
        d_x = f1.xx - f2.tx + (pp + qp) * f1.x + (pp - qp) * f2.x;
    } else {
        d = f2.x - f1.t - b.scaled_d_phi2(f1.phi, f2.phi);
        d_t = f2.tx - f1.tt - ((pp - qp) * f1.t + (pp + qp) * f2.t);
        d_x = f2.xx - f1.tx - ((pp - qp) * f1.x + (pp + qp) * f2.x);
    }
    const LieElement h = LieElement::h();
    return {h * (-0.5 * d), h * (-0.5 * d_t), h * (-0.5 * d_x)};
}

}  // namespace

HattedConnection::HattedConnection(int patch, double a, double b, const BorderFunction& border)
    : patch_(patch), a_(a), b_(b), border_(border) {
    if (patch != 1 && patch != 2) throw PreconditionError("patch must be 1 or 2");
    if (!(a < 0.0 && 0.0 < b)) throw PreconditionError("need a < 0 < b");
}

std::pair<StepField, StepField> HattedConnection::components(double x, const PatchJets& jets) const {
    if (!contains(x)) throw DomainError(patch_ == 1 ? "patch 1 is defined for x < b" : "patch 2 is defined for x > a");
    const auto [at, ax] = bulk_connection_jet(jets.own, border_.params().mu);
    StepField t, s;
    t.center = s.center = center();
    t[Step::both] = at;
    if (patch_ == 1) {
        t[Step::right] = defect_term(1, jets.defect1, jets.defect2, border_.params());
        s[Step::left] = ax;
    } else {
        t[Step::left] = defect_term(2, jets.defect1, jets.defect2, border_.params());
        s[Step::right] = ax;
    }
    return {t, s};
}

BulkConnection HattedConnection::value(double x, const PatchJets& jets) const {
    const auto [t, s] = components(x, jets);
    BulkConnection out;
    for (Step k : kSteps) {
        out.a_t += t[k].value * step_value(k, x, center());
        out.a_x += s[k].value * step_value(k, x, center());
    }
    return out;
}

DistributionalExpr HattedConnection::curvature(double x, const PatchJets& jets) const {
    const auto [t, s] = components(x, jets);
    DistributionalExpr e;
    e.center = center();
    for (Step k : kSteps) {
        e[k] += s[k].d_t;
        e[k] = e[k] - t[k].d_x;
        const LieElement& v = t[k].value;
        switch (k) {
            case Step::both:  // d/dx [theta(x-c) + theta(c-x)] = delta(x-c) - delta(c-x)
                e.delta_right = e.delta_right - v;
                e.delta_left += v;
                break;
            case Step::left: e.delta_left += v; break;
            case Step::right: e.delta_right = e.delta_right - v; break;
            case Step::product: break;
        }
    }
    for (Step i : kSteps) {
        for (Step j : kSteps) {
            const LieElement c = commutator(t[i].value, s[j].value);
            const auto m = multiply(i, j);
            for (Step k : kSteps) e[k] += c * m[static_cast<int>(k)];
        }
    }
    return e;
}

namespace {

double time_span(const StateWindow& w) {
    const double span = w.next.t - w.prev.t;
    if (!(span > 0.0)) throw PreconditionError("state window must be ordered in time");
    return span;
}

FieldJet interior_jet(const std::vector<double>& f, const std::vector<double>& pi, const std::vector<double>& pp,
                      const std::vector<double>& pn, std::size_t j, double dx, double span) {
    if (j == 0 || j + 1 >= f.size()) throw PreconditionError("interior jet needs both neighbours");
    FieldJet out;
    out.phi = f[j];
    out.t = pi[j];
    out.x = (f[j + 1] - f[j - 1]) / (2.0 * dx);
    out.xx = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / (dx * dx);
    out.tx = (pi[j + 1] - pi[j - 1]) / (2.0 * dx);
    out.tt = (pn[j] - pp[j]) / span;
    return out;
}

// One-sided jet at index 0 looking in direction +1, or at index n-1 looking -1.
FieldJet edge_jet(const std::vector<double>& f, const std::vector<double>& pi, const std::vector<double>& pp,
                  const std::vector<double>& pn, bool at_end, double dx, double span) {
    const std::size_t n = f.size();
    if (n < 4) throw PreconditionError("defect jets need at least 4 points per half-line");
    const auto F = [&](const std::vector<double>& v, std::size_t k) { return at_end ? v[n - 1 - k] : v[k]; };
    const double sgn = at_end ? -1.0 : 1.0;
    FieldJet out;
    out.phi = F(f, 0);
    out.t = F(pi, 0);
    out.x = sgn * (-3.0 * F(f, 0) + 4.0 * F(f, 1) - F(f, 2)) / (2.0 * dx);
    out.xx = (2.0 * F(f, 0) - 5.0 * F(f, 1) + 4.0 * F(f, 2) - F(f, 3)) / (dx * dx);
    out.tx = sgn * (-3.0 * F(pi, 0) + 4.0 * F(pi, 1) - F(pi, 2)) / (2.0 * dx);
    out.tt = (F(pn, 0) - F(pp, 0)) / span;
    return out;
}

FieldJet flatten(FieldJet f) {
    f.x = f.xx = f.tx = 0.0;
    return f;
}

}  // namespace

FieldJet jet1(const StateWindow& w, std::size_t j) {
    return interior_jet(w.cur.phi1, w.cur.pi1, w.prev.pi1, w.next.pi1, j, w.cur.dx, time_span(w));
}

FieldJet jet2(const StateWindow& w, std::size_t j) {
    return interior_jet(w.cur.phi2, w.cur.pi2, w.prev.pi2, w.next.pi2, j, w.cur.dx, time_span(w));
}

FieldJet defect_jet1(const StateWindow& w) {
    return edge_jet(w.cur.phi1, w.cur.pi1, w.prev.pi1, w.next.pi1, true, w.cur.dx, time_span(w));
}

FieldJet defect_jet2(const StateWindow& w) {
    return edge_jet(w.cur.phi2, w.cur.pi2, w.prev.pi2, w.next.pi2, false, w.cur.dx, time_span(w));
}

const RegionEntry& RegionReport::at(const std::string& name) const {
    for (const RegionEntry& r : regions)
        if (r.region == name) return r;
    throw OutOfRange("no region named " + name);
}

RegionReport distributional_curvature(int patch, const StateWindow& w, double a, double b,
                                      const BorderFunction& border, OverlapMode mode) {
    const HattedConnection conn(patch, a, b, border);
    RegionReport rep;
    rep.patch = patch;
    rep.a = a;
    rep.b = b;

    FieldJet d1 = defect_jet1(w), d2 = defect_jet2(w);
    const FieldState& s = w.cur;
    const std::size_t n = s.points();

    RegionEntry bulk;
    bulk.region = patch == 1 ? "x<a" : "x>b";
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double x = patch == 1 ? s.x1(j) : s.x2(j);
        if (patch == 1 ? !(x < a) : !(x > b)) continue;
        const FieldJet own = patch == 1 ? jet1(w, j) : jet2(w, j);
        const LieElement v = conn.curvature(x, {own, d1, d2}).smooth_at(x);
        ++bulk.samples;
        if (v.norm() >= bulk.smooth_norm) {
            bulk.smooth_norm = v.norm();
            bulk.smooth_sample = v;
        }
    }

    RegionEntry point;
    point.region = patch == 1 ? "x=a" : "x=b";
    {
        const double c = patch == 1 ? a : b;
        const DistributionalExpr e = conn.curvature(c, {patch == 1 ? d1 : d2, d1, d2});
        point.samples = 1;
        point.smooth_sample = e.smooth_at(c);
        point.smooth_norm = point.smooth_sample.norm();
        point.delta = e.delta_at_center();
    }

    RegionEntry overlap;
    overlap.region = "a<x<b";
    {
        if (mode == OverlapMode::injected) {
            d1 = flatten(d1);
            d2 = flatten(d2);
        }
        const DistributionalExpr e = conn.curvature(0.0, {patch == 1 ? d1 : d2, d1, d2});
        overlap.samples = 1;
        overlap.smooth_sample = e.smooth_at(0.0);
        overlap.smooth_norm = overlap.smooth_sample.norm();
    }

    if (patch == 1)
        rep.regions = {bulk, point, overlap};
    else
        rep.regions = {overlap, point, bulk};
    return rep;
}

}  // namespace liouville
