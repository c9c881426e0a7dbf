#pragma once

#include <array>
#include <cmath>
#include <string>

#include "nullframe/errors.hpp"

namespace nullframe {

// Vector (or point) of Minkowski 4-space with signature (-,+,+,+).
struct Vec4 {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
    double x4 = 0.0;

    double operator[](int i) const {
        switch (i) {
            case 0: return x1;
            case 1: return x2;
            case 2: return x3;
            default: return x4;
        }
    }
    double& operator[](int i) {
        switch (i) {
            case 0: return x1;
            case 1: return x2;
            case 2: return x3;
            default: return x4;
        }
    }

    Vec4 operator-() const { return {-x1, -x2, -x3, -x4}; }
    Vec4 operator+(const Vec4& o) const { return {x1 + o.x1, x2 + o.x2, x3 + o.x3, x4 + o.x4}; }
    Vec4 operator-(const Vec4& o) const { return {x1 - o.x1, x2 - o.x2, x3 - o.x3, x4 - o.x4}; }
    Vec4 operator*(double s) const { return {x1 * s, x2 * s, x3 * s, x4 * s}; }
    Vec4 operator/(double s) const { return {x1 / s, x2 / s, x3 / s, x4 / s}; }
};

inline Vec4 operator*(double s, const Vec4& v) { return v * s; }

// g(a, b) = -a1*b1 + a2*b2 + a3*b3 + a4*b4
inline double inner(const Vec4& a, const Vec4& b) {
    return -a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3 + a.x4 * b.x4;
}

// Euclidean dot product; used for residual norms and scale estimates only,
// never as the metric.
inline double dot(const Vec4& a, const Vec4& b) {
    return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3 + a.x4 * b.x4;
}

inline double euclidean_norm(const Vec4& v) { return std::sqrt(dot(v, v)); }

inline double max_abs_component(const Vec4& v) {
    return std::max(std::max(std::abs(v.x1), std::abs(v.x2)),
                    std::max(std::abs(v.x3), std::abs(v.x4)));
}

enum class CausalCharacter { Timelike, Spacelike, Null, ZeroVector };

inline std::string to_string(CausalCharacter c) {
    switch (c) {
        case CausalCharacter::Timelike: return "timelike";
        case CausalCharacter::Spacelike: return "spacelike";
        case CausalCharacter::Null: return "null";
        case CausalCharacter::ZeroVector: return "zero-vector";
    }
    return "?";
}

inline CausalCharacter causal_character(const Vec4& v, double tol) {
    if (tol < 0) throw InvalidArgument("causal_character: tol must be >= 0");
    if (max_abs_component(v) <= tol) return CausalCharacter::ZeroVector;
    const double q = inner(v, v);
    if (std::abs(q) <= tol) return CausalCharacter::Null;
    return q < 0 ? CausalCharacter::Timelike : CausalCharacter::Spacelike;
}

// Turns the tuple of partial derivatives of a scalar field into the metric
// gradient: the unique v with g(v, X) = sum_i p_i X_i for every X. In this
// signature that flips the sign of the first slot.
inline Vec4 raise_index(const Vec4& partials) {
    return {-partials.x1, partials.x2, partials.x3, partials.x4};
}

inline double det3(double a11, double a12, double a13,
                   double a21, double a22, double a23,
                   double a31, double a32, double a33) {
    return a11 * (a22 * a33 - a23 * a32)
         - a12 * (a21 * a33 - a23 * a31)
         + a13 * (a21 * a32 - a22 * a31);
}

// Determinant of the 4x4 matrix whose columns are a, b, c, d.
inline double det4(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
    // Laplace expansion along the d column.
    const double m1 = det3(a.x2, b.x2, c.x2, a.x3, b.x3, c.x3, a.x4, b.x4, c.x4);
    const double m2 = det3(a.x1, b.x1, c.x1, a.x3, b.x3, c.x3, a.x4, b.x4, c.x4);
    const double m3 = det3(a.x1, b.x1, c.x1, a.x2, b.x2, c.x2, a.x4, b.x4, c.x4);
    const double m4 = det3(a.x1, b.x1, c.x1, a.x2, b.x2, c.x2, a.x3, b.x3, c.x3);
    return -d.x1 * m1 + d.x2 * m2 - d.x3 * m3 + d.x4 * m4;
}

// Metric Gram determinant of three vectors.
inline double gram3_det(const Vec4& a, const Vec4& b, const Vec4& c) {
    return det3(inner(a, a), inner(a, b), inner(a, c),
                inner(b, a), inner(b, b), inner(b, c),
                inner(c, a), inner(c, b), inner(c, c));
}

// Cofactor vector u of (v1, v2, v3): the unique vector with
// dot(u, x) = det4(v1, v2, v3, x) for every x. Euclid-orthogonal to all
// three inputs by construction.
inline Vec4 cofactor_vector(const Vec4& v1, const Vec4& v2, const Vec4& v3) {
    const Vec4& a = v1;
    const Vec4& b = v2;
    const Vec4& c = v3;
    return {-det3(a.x2, b.x2, c.x2, a.x3, b.x3, c.x3, a.x4, b.x4, c.x4),
            det3(a.x1, b.x1, c.x1, a.x3, b.x3, c.x3, a.x4, b.x4, c.x4),
            -det3(a.x1, b.x1, c.x1, a.x2, b.x2, c.x2, a.x4, b.x4, c.x4),
            det3(a.x1, b.x1, c.x1, a.x2, b.x2, c.x2, a.x3, b.x3, c.x3)};
}

// Completes {v1, v2, v3} to a basis with a unit spacelike vector w that is
// metric-orthogonal to all three; the sign of w is fixed so that
// det4(v1, v2, v3, w) carries the sign of orientation_det.
//
// The complement direction is eta*u with u the cofactor vector of the
// inputs: g(eta*u, v_i) = dot(u, v_i) = det4(v1, v2, v3, v_i) = 0.
inline Vec4 complete_orthonormal(const Vec4& v1, const Vec4& v2, const Vec4& v3,
                                 int orientation_det, double tol) {
    if (orientation_det != 1 && orientation_det != -1)
        throw InvalidArgument("complete_orthonormal: orientation_det must be +1 or -1");
    const double scale =
        dot(v1, v1) * dot(v2, v2) * dot(v3, v3);
    if (std::abs(gram3_det(v1, v2, v3)) <= tol * std::max(scale, 1e-300))
        throw DegenerateSpan("complete_orthonormal: span is degenerate or not 3-dimensional");

    const Vec4 u = cofactor_vector(v1, v2, v3);
    const Vec4 w0 = raise_index(u);
    const double q = inner(w0, w0);
    if (q <= tol * std::max(dot(w0, w0), 1e-300))
        throw DegenerateSpan("complete_orthonormal: orthogonal complement is not spacelike");

    Vec4 w = w0 / std::sqrt(q);
    if (det4(v1, v2, v3, w) * orientation_det < 0) w = -w;
    return w;
}

}  // namespace nullframe
