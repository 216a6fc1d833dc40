#pragma once

// A principal bundle over the circle S^1(r) = {t^2 + x^2 = r^2} with the
// two-chart cover U1 = S^1 \ {(0,-r)}, U2 = S^1 \ {(0,r)}. The overlap t != 0
// splits into arc A (t > 0) and arc B (t < 0). Points are written (t, x).

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "liouville/field_state.hpp"
#include "liouville/lie_sl2.hpp"

namespace liouville {

using lie::GroupElement;

struct CirclePoint {
    double angle = 0.0;  // (t, x) = (r sin angle, r cos angle)
    double t = 0.0;
    double x = 0.0;
    bool in_u1 = true;
    bool in_u2 = true;

    bool in_overlap() const { return in_u1 && in_u2; }
    char arc() const { return t > 0.0 ? 'A' : (t < 0.0 ? 'B' : '-'); }
};

struct Cover {
    double r = 1.0;
    std::vector<CirclePoint> points;
};

/// n uniformly angled points starting at (0, r). Quarter points are placed
/// exactly. Throws PreconditionError unless r > 0 and n >= 8.
Cover build_cover(double r, std::size_t n);

struct TransitionAtlas {
    enum class Source { identity, defect, custom };

    Cover cover;
    Source source = Source::identity;
    // Indexed like cover.points; entries off the overlap are the identity.
    std::vector<GroupElement> t11, t22, t12, t21;
};

std::string to_string(TransitionAtlas::Source s);

TransitionAtlas identity_atlas(const Cover& cover);

/// t12(p) = f(p), t21 = t12^-1.
TransitionAtlas custom_atlas(const Cover& cover, const std::function<GroupElement(const CirclePoint&)>& f);

struct TransitionOptions {
    double offset = 0.0;             // defect position in circle coordinates
    double smoothness_ratio = 0.05;  // allowed |secant - mean(phi_t)| / max(1, |secant|)
};

/// t12(t, x) = exp(-phi2 h/2) exp(2 lambda E+) exp(phi1 h/2) with phi_p read on
/// the defect line and interpolated in time (cubic Hermite on phi, phi_t).
/// history must be ordered in time and cover every overlap t.
/// Throws OutOfRange when a point is not covered, InterpolationError when the
/// history is unordered, non-finite, or its phi_t disagrees with its secants.
TransitionAtlas transition_from_defect(const Cover& cover, const std::vector<FieldState>& history, double lambda,
                                       const TransitionOptions& opt = {});

/// No defect: both patches carry the same potentials, so the gauge element
/// on the overlap is the identity. The history is checked for phi1 = phi2 on
/// the defect line (tolerance tol) and the identity atlas is returned with
/// source = defect. Throws CocycleViolation if the fields differ there.
TransitionAtlas transition_without_defect(const Cover& cover, const std::vector<FieldState>& history,
                                          double tol = 1e-12);

struct CocycleReport {
    bool pass = true;
    double tolerance = 1e-12;
    double max_diagonal_deviation = 0.0;  // |t_ii - e|
    double max_inverse_deviation = 0.0;   // |t12 t21 - e|, |t21 t12 - e|
    std::size_t overlap_points = 0;
};

CocycleReport cocycle_check(const TransitionAtlas& atlas, double tol = 1e-12);

struct QuotientElement {
    int chart = 1;
    std::size_t point = 0;
    GroupElement fibre;
};

struct QuotientSample {
    std::vector<QuotientElement> elements;
    std::vector<std::size_t> class_of;  // canonical class label per element
    std::size_t class_count = 0;
    double max_transition_deviation = 0.0;  // |f1 - t12 f2| over identified pairs

    /// Classes as sorted lists of element descriptions, sorted; restricted to
    /// points accepted by keep. Two samplings can be compared through this.
    std::vector<std::vector<std::string>> signature(
        const std::function<bool(const CirclePoint&)>& keep, const Cover& cover) const;
};

/// Builds E0 = U1 x F  union  U2 x F at the given fibre samples, closes it under
/// (p, f) in U2  ~  (p, t12(p) f) in U1, and returns the classes. u2_first
/// changes the enumeration order only. Throws CocycleViolation if the atlas
/// fails cocycle_check or an identified pair disagrees with t12.
QuotientSample quotient_build(const TransitionAtlas& atlas, const std::vector<GroupElement>& fibre_samples,
                              bool u2_first = false);

struct ArcSummary {
    char arc = 'A';
    std::size_t points = 0;
    double max_distance = 0.0;
};

struct TrivialityReport {
    bool trivial = true;
    std::size_t nontrivial_transitions = 0;
    double max_distance_from_identity = 0.0;
    std::string verdict;  // "trivial" or "not manifestly trivial"
    std::vector<ArcSummary> arcs;
};

TrivialityReport triviality_report(const TransitionAtlas& atlas, double tol = 1e-10);

struct SmoothnessReport {
    bool pass = true;
    double threshold = 0.0;
    double max_a = 0.0;  // max |second difference| / ds^2 on arc A
    double max_b = 0.0;
};

/// Discrete continuity of t12 along each arc, checked separately.
SmoothnessReport arc_smoothness(const TransitionAtlas& atlas, double threshold);

}  // namespace liouville
