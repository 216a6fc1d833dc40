#include "liouville/circle_bundle.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "liouville/errors.hpp"
#include "liouville/gauge_field.hpp"

namespace liouville {

Cover build_cover(double r, std::size_t n) {
    if (!(r > 0.0)) throw PreconditionError("circle radius must be positive");
    if (n < 8) throw PreconditionError("a cover needs at least 8 samples");
    Cover c;
    c.r = r;
    c.points.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        CirclePoint& p = c.points[k];
        p.angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        p.t = r * std::sin(p.angle);
        p.x = r * std::cos(p.angle);
        if ((4 * k) % n == 0) {
            switch ((4 * k) / n) {
                case 0: p.t = 0.0, p.x = r; break;
                case 1: p.t = r, p.x = 0.0; break;
                case 2: p.t = 0.0, p.x = -r; break;
                case 3: p.t = -r, p.x = 0.0; break;
            }
        }
        p.in_u1 = !(p.t == 0.0 && p.x < 0.0);
        p.in_u2 = !(p.t == 0.0 && p.x > 0.0);
    }
    return c;
}

std::string to_string(TransitionAtlas::Source s) {
    switch (s) {
        case TransitionAtlas::Source::identity: return "identity";
        case TransitionAtlas::Source::defect: return "defect";
        case TransitionAtlas::Source::custom: return "custom";
    }
    return "unknown";
}

TransitionAtlas identity_atlas(const Cover& cover) {
    TransitionAtlas a;
    a.cover = cover;
    const std::size_t n = cover.points.size();
    a.t11.assign(n, GroupElement());
    a.t22.assign(n, GroupElement());
    a.t12.assign(n, GroupElement());
    a.t21.assign(n, GroupElement());
    return a;
}

TransitionAtlas custom_atlas(const Cover& cover, const std::function<GroupElement(const CirclePoint&)>& f) {
    TransitionAtlas a = identity_atlas(cover);
    a.source = TransitionAtlas::Source::custom;
    for (std::size_t k = 0; k < cover.points.size(); ++k) {
        if (!cover.points[k].in_overlap()) continue;
        a.t12[k] = f(cover.points[k]);
        a.t21[k] = a.t12[k].inverse();
    }
    return a;
}

namespace {

struct Trace {
    std::vector<double> t, phi1, phi2, pi1, pi2;
};

Trace defect_trace(const std::vector<FieldState>& history, double ratio) {
    Trace tr;
    for (const FieldState& s : history) {
        tr.t.push_back(s.t);
        tr.phi1.push_back(s.phi1_at_defect());
        tr.phi2.push_back(s.phi2_at_defect());
        tr.pi1.push_back(s.pi1_at_defect());
        tr.pi2.push_back(s.pi2_at_defect());
    }
    if (tr.t.size() < 2) throw InterpolationError("history needs at least 2 states");
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        if (!std::isfinite(tr.t[i]) || !std::isfinite(tr.phi1[i]) || !std::isfinite(tr.phi2[i]) ||
            !std::isfinite(tr.pi1[i]) || !std::isfinite(tr.pi2[i]))
            throw InterpolationError("history contains non-finite values");
        if (i == 0) continue;
        const double dt = tr.t[i] - tr.t[i - 1];
        if (!(dt > 0.0)) throw InterpolationError("history times must increase strictly");
        const auto check = [&](const std::vector<double>& f, const std::vector<double>& df, const char* name) {
            const double secant = (f[i] - f[i - 1]) / dt;
            if (std::abs(secant - 0.5 * (df[i] + df[i - 1])) > ratio * std::max(1.0, std::abs(secant))) {
                std::ostringstream msg;
                msg << name << " is not smooth near t = " << tr.t[i];
                throw InterpolationError(msg.str());
            }
        };
        check(tr.phi1, tr.pi1, "phi1");
        check(tr.phi2, tr.pi2, "phi2");
    }
    return tr;
}

double hermite(double t0, double t1, double f0, double f1, double d0, double d1, double t) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * f1 + (s3 - s2) * h * d1;
}

}  // namespace

TransitionAtlas transition_from_defect(const Cover& cover, const std::vector<FieldState>& history, double lambda,
                                       const TransitionOptions& opt) {
    const Trace tr = defect_trace(history, opt.smoothness_ratio);
    const double L = history.front().L;
    TransitionAtlas a = identity_atlas(cover);
    a.source = TransitionAtlas::Source::defect;
    const double slack = 1e-12 * std::max(1.0, std::abs(tr.t.back()) + std::abs(tr.t.front()));
    for (std::size_t k = 0; k < cover.points.size(); ++k) {
        const CirclePoint& p = cover.points[k];
        if (!p.in_overlap()) continue;
        if (p.t < tr.t.front() - slack || p.t > tr.t.back() + slack || std::abs(p.x - opt.offset) > L) {
            std::ostringstream msg;
            msg << "history covers t in [" << tr.t.front() << ", " << tr.t.back() << "] and |x| <= " << L
                << " but the cover needs (t, x) = (" << p.t << ", " << p.x
                << "); start the run at t = -r and run to t >= r";
            throw OutOfRange(msg.str());
        }
        const double t = std::clamp(p.t, tr.t.front(), tr.t.back());
        std::size_t i = static_cast<std::size_t>(std::upper_bound(tr.t.begin(), tr.t.end(), t) - tr.t.begin());
        i = std::clamp<std::size_t>(i, 1, tr.t.size() - 1);
        const double f1 = hermite(tr.t[i - 1], tr.t[i], tr.phi1[i - 1], tr.phi1[i], tr.pi1[i - 1], tr.pi1[i], t);
        const double f2 = hermite(tr.t[i - 1], tr.t[i], tr.phi2[i - 1], tr.phi2[i], tr.pi2[i - 1], tr.pi2[i], t);
        a.t12[k] = defect_gauge_element(f1, f2, lambda);
        a.t21[k] = a.t12[k].inverse();
    }
    return a;
}

TransitionAtlas transition_without_defect(const Cover& cover, const std::vector<FieldState>& history, double tol) {
    for (const FieldState& s : history) {
        const double d = std::max(std::abs(s.phi1_at_defect() - s.phi2_at_defect()),
                                  std::abs(s.pi1_at_defect() - s.pi2_at_defect()));
        if (d > tol) {
            std::ostringstream msg;
            msg << "fields differ at x = 0 by " << d << " at t = " << s.t << "; the run has a defect";
            throw CocycleViolation(msg.str());
        }
    }
    TransitionAtlas a = identity_atlas(cover);
    a.source = TransitionAtlas::Source::defect;
    return a;
}

CocycleReport cocycle_check(const TransitionAtlas& atlas, double tol) {
    CocycleReport r;
    r.tolerance = tol;
    const GroupElement e;
    for (std::size_t k = 0; k < atlas.cover.points.size(); ++k) {
        const CirclePoint& p = atlas.cover.points[k];
        if (p.in_u1) r.max_diagonal_deviation = std::max(r.max_diagonal_deviation, lie::distance(atlas.t11[k], e));
        if (p.in_u2) r.max_diagonal_deviation = std::max(r.max_diagonal_deviation, lie::distance(atlas.t22[k], e));
        if (!p.in_overlap()) continue;
        ++r.overlap_points;
        r.max_inverse_deviation = std::max(r.max_inverse_deviation, lie::distance(atlas.t12[k] * atlas.t21[k], e));
        r.max_inverse_deviation = std::max(r.max_inverse_deviation, lie::distance(atlas.t21[k] * atlas.t12[k], e));
    }
    r.pass = r.max_diagonal_deviation <= tol && r.max_inverse_deviation <= tol;
    return r;
}

namespace {

struct DisjointSets {
    std::vector<std::size_t> parent;

    std::size_t add() {
        parent.push_back(parent.size());
        return parent.size() - 1;
    }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

std::string describe(const QuotientElement& e, const Cover& cover) {
    const CirclePoint& p = cover.points[e.point];
    const auto& m = e.fibre.matrix();
    std::ostringstream os;
    os << std::setprecision(12) << e.chart << '@' << p.t << ',' << p.x << ':' << m.a << ',' << m.b << ',' << m.c
       << ',' << m.d;
    return os.str();
}

}  // namespace

std::vector<std::vector<std::string>> QuotientSample::signature(
    const std::function<bool(const CirclePoint&)>& keep, const Cover& cover) const {
    std::map<std::size_t, std::vector<std::string>> groups;
    for (std::size_t i = 0; i < elements.size(); ++i)
        if (keep(cover.points[elements[i].point])) groups[class_of[i]].push_back(describe(elements[i], cover));
    std::vector<std::vector<std::string>> out;
    for (auto& [label, members] : groups) {
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end());
    return out;
}

QuotientSample quotient_build(const TransitionAtlas& atlas, const std::vector<GroupElement>& fibre_samples,
                              bool u2_first) {
    const CocycleReport cc = cocycle_check(atlas);
    if (!cc.pass) {
        std::ostringstream msg;
        msg << "atlas fails the cocycle conditions (deviation " << std::max(cc.max_diagonal_deviation,
                                                                             cc.max_inverse_deviation)
            << ")";
        throw CocycleViolation(msg.str());
    }
    const Cover& cover = atlas.cover;
    QuotientSample q;
    DisjointSets sets;
    // Elements are bucketed by (chart, point) so identical fibres coincide.
    std::map<std::pair<int, std::size_t>, std::vector<std::size_t>> bucket;
    const auto intern = [&](int chart, std::size_t point, const GroupElement& f) {
        auto& list = bucket[{chart, point}];
        for (std::size_t idx : list)
            if (lie::distance(q.elements[idx].fibre, f) <= 1e-12) return idx;
        q.elements.push_back({chart, point, f});
        sets.add();
        list.push_back(q.elements.size() - 1);
        return q.elements.size() - 1;
    };

    const std::array<int, 2> order = u2_first ? std::array<int, 2>{2, 1} : std::array<int, 2>{1, 2};
    for (int chart : order) {
        for (std::size_t k = 0; k < cover.points.size(); ++k) {
            const CirclePoint& p = cover.points[k];
            if (chart == 1 ? !p.in_u1 : !p.in_u2) continue;
            for (const GroupElement& f : fibre_samples) {
                const std::size_t self = intern(chart, k, f);
                if (!p.in_overlap()) continue;
                // (p, f) in U2 ~ (p, t12 f) in U1, and (p, f) in U1 ~ (p, t21 f) in U2.
                const std::size_t partner = chart == 2 ? intern(1, k, atlas.t12[k] * f) : intern(2, k, atlas.t21[k] * f);
                sets.unite(self, partner);
            }
        }
    }

    // Canonical labels: order of first appearance when elements are sorted by description.
    std::vector<std::size_t> idx(q.elements.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::string> desc(q.elements.size());
    for (std::size_t i = 0; i < q.elements.size(); ++i) desc[i] = describe(q.elements[i], cover);
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return desc[x] < desc[y]; });
    std::map<std::size_t, std::size_t> label;
    q.class_of.assign(q.elements.size(), 0);
    for (std::size_t i : idx) {
        const std::size_t root = sets.find(i);
        auto it = label.find(root);
        if (it == label.end()) it = label.emplace(root, label.size()).first;
        q.class_of[i] = it->second;
    }
    q.class_count = label.size();

    // Every class projects to one point, and chart-1 / chart-2 members differ by t12.
    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < q.elements.size(); ++i) members[q.class_of[i]].push_back(i);
    for (const auto& [c, list] : members) {
        for (std::size_t i : list) {
            const QuotientElement& ei = q.elements[i];
            for (std::size_t j : list) {
                const QuotientElement& ej = q.elements[j];
                if (ei.point != ej.point) throw CocycleViolation("a class projects to more than one point");
                if (ei.chart == 1 && ej.chart == 2) {
                    const double dev = lie::distance(ei.fibre, atlas.t12[ei.point] * ej.fibre);
                    q.max_transition_deviation = std::max(q.max_transition_deviation, dev);
                }
            }
        }
    }
    if (q.max_transition_deviation > 1e-10) throw CocycleViolation("identified fibres disagree with t12");
    return q;
}

TrivialityReport triviality_report(const TransitionAtlas& atlas, double tol) {
    TrivialityReport r;
    ArcSummary a{'A', 0, 0.0}, b{'B', 0, 0.0};
    const GroupElement e;
    for (std::size_t k = 0; k < atlas.cover.points.size(); ++k) {
        const CirclePoint& p = atlas.cover.points[k];
        if (!p.in_overlap()) continue;
        const double d = std::max(lie::distance(atlas.t12[k], e), lie::distance(atlas.t21[k], e));
        r.max_distance_from_identity = std::max(r.max_distance_from_identity, d);
        if (d > tol) ++r.nontrivial_transitions;
        ArcSummary& s = p.arc() == 'A' ? a : b;
        ++s.points;
        s.max_distance = std::max(s.max_distance, d);
    }
    r.trivial = r.nontrivial_transitions == 0;
    r.verdict = r.trivial ? "trivial" : "not manifestly trivial";
    r.arcs = {a, b};
    return r;
}

SmoothnessReport arc_smoothness(const TransitionAtlas& atlas, double threshold) {
    SmoothnessReport r;
    r.threshold = threshold;
    const auto& pts = atlas.cover.points;
    const std::size_t n = pts.size();
    const double ds = atlas.cover.r * 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (!pts[k - 1].in_overlap() || !pts[k + 1].in_overlap()) continue;
        if (pts[k - 1].arc() != pts[k].arc() || pts[k + 1].arc() != pts[k].arc()) continue;
        const auto& m0 = atlas.t12[k - 1].matrix();
        const auto& m1 = atlas.t12[k].matrix();
        const auto& m2 = atlas.t12[k + 1].matrix();
        const double v = lie::max_abs(m0 - m1 * 2.0 + m2) / (ds * ds);
        double& slot = pts[k].arc() == 'A' ? r.max_a : r.max_b;
        slot = std::max(slot, v);
    }
    r.pass = r.max_a < threshold && r.max_b < threshold;
    return r;
}

}  // namespace liouville
