#pragma once

// Arithmetic for the Lie algebra A1 in the Chevalley basis (h, E+, E-) and
// for its group in the 2x2 fundamental representation
//
//     h  -> diag(1, -1),   E+ -> [[0, 1], [0, 0]],   E- -> [[0, 0], [1, 0]].
//
// With this choice [h, E±] = ±2 E± and [E+, E-] = h.

#include <array>
#include <iosfwd>

namespace liouville::lie {

/// Real 2x2 matrix, row-major.
struct Mat2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;  // [[a, b], [c, d]]

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
};

/// Max-abs entry norm.
double max_abs(const Mat2& m);

/// Element c_h h + c_p E+ + c_m E- of A1.
struct LieElement {
    double c_h = 0.0;
    double c_p = 0.0;
    double c_m = 0.0;

    static constexpr LieElement h() { return {1.0, 0.0, 0.0}; }
    static constexpr LieElement e_plus() { return {0.0, 1.0, 0.0}; }
    static constexpr LieElement e_minus() { return {0.0, 0.0, 1.0}; }

    LieElement operator+(const LieElement& o) const { return {c_h + o.c_h, c_p + o.c_p, c_m + o.c_m}; }
    LieElement operator-(const LieElement& o) const { return {c_h - o.c_h, c_p - o.c_p, c_m - o.c_m}; }
    LieElement operator-() const { return {-c_h, -c_p, -c_m}; }
    LieElement operator*(double s) const { return {c_h * s, c_p * s, c_m * s}; }
    LieElement& operator+=(const LieElement& o) {
        c_h += o.c_h;
        c_p += o.c_p;
        c_m += o.c_m;
        return *this;
    }

    bool operator==(const LieElement&) const = default;

    /// Image in the fundamental representation.
    Mat2 matrix() const { return {c_h, c_p, c_m, -c_h}; }

    /// max(|c_h|, |c_p|, |c_m|)
    double norm() const;
};

inline LieElement operator*(double s, const LieElement& a) { return a * s; }

std::ostream& operator<<(std::ostream& os, const LieElement& a);

LieElement commutator(const LieElement& a, const LieElement& b);

/// Splits a 2x2 matrix along the trace pairing with the dual basis. Throws
/// DecompositionError when the trace exceeds tol * max(1, |m|).
LieElement decompose(const Mat2& m, double tol = 1e-12);

/// Same split, discarding the identity component. Used for finite-difference
/// estimates of (dg) g^-1, which are traceless only to truncation order.
LieElement traceless_part(const Mat2& m);

/// Element of SL(2, R). The determinant is validated on construction.
class GroupElement {
public:
    GroupElement() = default;  // identity
    explicit GroupElement(const Mat2& m);

    static GroupElement identity() { return GroupElement(); }

    const Mat2& matrix() const { return m_; }
    GroupElement inverse() const;
    GroupElement operator*(const GroupElement& o) const;

    /// Left action on the fibre (the group itself).
    GroupElement act(const GroupElement& f) const { return *this * f; }

    /// Max-abs entry distance from the identity matrix.
    double distance_from_identity() const;

private:
    Mat2 m_ = Mat2::identity();
};

double distance(const GroupElement& x, const GroupElement& y);

/// Closed-form exponential of the representation of a.
GroupElement exp_alg(const LieElement& a);

/// g a g^-1 decomposed back into the Chevalley basis.
LieElement adjoint(const GroupElement& g, const LieElement& a);

/// exp(l1 E+) exp(l2 h) exp(l3 E-)
GroupElement gauss_compose(double l1, double l2, double l3);

}  // namespace liouville::lie
