#include "liouville/lie_sl2.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "liouville/errors.hpp"

namespace liouville::lie {

double max_abs(const Mat2& m) {
    return std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
}

double LieElement::norm() const { return std::max({std::abs(c_h), std::abs(c_p), std::abs(c_m)}); }

std::ostream& operator<<(std::ostream& os, const LieElement& a) {
    return os << a.c_h << " h + " << a.c_p << " E+ + " << a.c_m << " E-";
}

LieElement commutator(const LieElement& a, const LieElement& b) {
    return {a.c_p * b.c_m - a.c_m * b.c_p,
            2.0 * (a.c_h * b.c_p - a.c_p * b.c_h),
            2.0 * (a.c_m * b.c_h - a.c_h * b.c_m)};
}

LieElement decompose(const Mat2& m, double tol) {
    const double scale = std::max(1.0, max_abs(m));
    if (std::abs(m.trace()) > tol * scale) {
        std::ostringstream msg;
        msg << "matrix is not traceless (trace " << m.trace() << ", scale " << scale << ")";
        throw DecompositionError(msg.str());
    }
    return traceless_part(m);
}

LieElement traceless_part(const Mat2& m) {
    // tr(m h)/2, tr(m E-), tr(m E+)
    return {0.5 * (m.a - m.d), m.b, m.c};
}

GroupElement::GroupElement(const Mat2& m) : m_(m) {
    const double scale = std::max(1.0, max_abs(m) * max_abs(m));
    if (std::abs(m.det() - 1.0) > 1e-12 * scale) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "det = " << m.det();
        throw DecompositionError("not unimodular: " + msg.str());
    }
}

GroupElement GroupElement::inverse() const {
    GroupElement out;
    out.m_ = {m_.d, -m_.b, -m_.c, m_.a};  // det = 1
    return out;
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
    GroupElement out;
    out.m_ = m_ * o.m_;
    return out;
}

double GroupElement::distance_from_identity() const { return max_abs(m_ - Mat2::identity()); }

double distance(const GroupElement& x, const GroupElement& y) { return max_abs(x.matrix() - y.matrix()); }

namespace {

// cosh(sqrt(q)) and sinh(sqrt(q))/sqrt(q) as power series in q.
void even_series(double q, double& c, double& s) {
    c = 0.0;
    s = 0.0;
    double term_c = 1.0;  // q^k / (2k)!
    double term_s = 1.0;  // q^k / (2k+1)!
    for (int k = 0; k < 12; ++k) {
        c += term_c;
        s += term_s;
        term_c *= q / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
        term_s *= q / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    }
}

}  // namespace

GroupElement exp_alg(const LieElement& a) {
    // X^2 = q I with q = h^2 + p m for traceless X, hence
    // exp(X) = C(q) I + S(q) X.
    const double q = a.c_h * a.c_h + a.c_p * a.c_m;
    double c = 1.0, s = 1.0;
    if (std::abs(q) < 1e-3) {
        even_series(q, c, s);
    } else if (q > 0.0) {
        const double r = std::sqrt(q);
        c = std::cosh(r);
        s = std::sinh(r) / r;
    } else {
        const double r = std::sqrt(-q);
        c = std::cos(r);
        s = std::sin(r) / r;
    }
    const Mat2 x = a.matrix();
    return GroupElement(Mat2{c + s * x.a, s * x.b, s * x.c, c + s * x.d});
}

LieElement adjoint(const GroupElement& g, const LieElement& a) {
    const Mat2 conj = g.matrix() * a.matrix() * g.inverse().matrix();
    return decompose(conj);
}

GroupElement gauss_compose(double l1, double l2, double l3) {
    // Each factor has a closed form; avoid the general exponential.
    const GroupElement upper(Mat2{1.0, l1, 0.0, 1.0});
    const GroupElement diag(Mat2{std::exp(l2), 0.0, 0.0, std::exp(-l2)});
    const GroupElement lower(Mat2{1.0, 0.0, l3, 1.0});
    return upper * diag * lower;
}

}  // namespace liouville::lie
