#pragma once

// Shared fixtures and independent oracles for the test suites. Everything
// here stays deliberately separate from the library's computation paths:
// finite differences instead of jets, Laplace expansion along rows instead
// of columns, frame recovery by differencing instead of construction.

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nullframe/classify.hpp"
#include "nullframe/eikonal.hpp"
#include "nullframe/frame.hpp"

namespace support {

using nullframe::CurveSpec;
using nullframe::FieldSpec;
using nullframe::Vec4;

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    g.back() = b;
    return g;
}

// --------------------------------------------------------------------------
// Finite-difference oracles
// --------------------------------------------------------------------------

// First derivative, fourth-order central.
inline double fd1(const std::function<double(double)>& f, double t, double h = 1e-4) {
    return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h);
}

// Second derivative, fourth-order central. Rounding grows as eps/h^2, so
// the step is wider than for first derivatives.
inline double fd2(const std::function<double(double)>& f, double t, double h = 1e-3) {
    return (-f(t - 2 * h) + 16 * f(t - h) - 30 * f(t) + 16 * f(t + h) - f(t + 2 * h)) /
           (12 * h * h);
}

// Third derivative: second-order central stencil, Richardson-extrapolated
// once. A plain third-difference at small steps drowns in rounding
// (eps/h^3), so the extrapolation buys accuracy at a wider step.
inline double fd3(const std::function<double(double)>& f, double t, double h = 1e-2) {
    auto stencil = [&](double s) {
        return (f(t + 2 * s) - 2 * f(t + s) + 2 * f(t - s) - f(t - 2 * s)) / (2 * s * s * s);
    };
    return (4.0 * stencil(h / 2) - stencil(h)) / 3.0;
}

inline double fd_derivative(const std::function<double(double)>& f, double t, int order) {
    switch (order) {
        case 1: return fd1(f, t);
        case 2: return fd2(f, t);
        case 3: return fd3(f, t);
        default: throw std::runtime_error("fd_derivative: order out of range");
    }
}

// Directional derivative of a field via fourth-order central differences.
inline double directional_fd(const FieldSpec& field, const Vec4& p, const Vec4& dir,
                             double h = 1e-3) {
    auto at = [&](double s) {
        const Vec4 q = p + dir * s;
        return eval_field(field.expr, q).value;
    };
    return fd1(at, 0.0, h);
}

// --------------------------------------------------------------------------
// Determinant oracle: Laplace expansion along the first row (the library
// expands along the last column).
// --------------------------------------------------------------------------

inline double det3_rows(const std::array<std::array<double, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline double det4_oracle(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
    const std::array<std::array<double, 4>, 4> m = {{{a.x1, b.x1, c.x1, d.x1},
                                                     {a.x2, b.x2, c.x2, d.x2},
                                                     {a.x3, b.x3, c.x3, d.x3},
                                                     {a.x4, b.x4, c.x4, d.x4}}};
    double det = 0.0;
    double sign = 1.0;
    for (int col = 0; col < 4; ++col) {
        std::array<std::array<double, 3>, 3> minor{};
        for (int r = 1; r < 4; ++r) {
            int cc = 0;
            for (int cIdx = 0; cIdx < 4; ++cIdx) {
                if (cIdx == col) continue;
                minor[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(cc++)] =
                    m[static_cast<std::size_t>(r)][static_cast<std::size_t>(cIdx)];
            }
        }
        det += sign * m[0][static_cast<std::size_t>(col)] * det3_rows(minor);
        sign = -sign;
    }
    return det;
}

// --------------------------------------------------------------------------
// Test corpus
// --------------------------------------------------------------------------

inline CurveSpec example1_curve(double t0 = -2.0, double t1 = 2.0, int samples = 201) {
    return nullframe::make_curve({"-sinh(t)/sqrt(2)", "-cosh(t)/sqrt(2)",
                                  "-cos(t)/sqrt(2)", "-sin(t)/sqrt(2)"},
                                 t0, t1, samples);
}

inline CurveSpec example2_curve(double t0 = -1.0, double t1 = 1.0, int samples = 201) {
    return nullframe::make_curve({"-(t^3/6 + t)", "-(t^2/2)", "-t", "-(t^3/6)"}, t0, t1,
                                 samples);
}

// Two-parameter family of null pseudo-arc curves with constant curvatures
// sigma1 = (b^2 - a^2)/2, sigma2 = a*b:
//   alpha = (A sinh(a t), A cosh(a t), B cos(b t), B sin(b t)),
//   A = m/a, B = m/b, m = 1/sqrt(a^2 + b^2).
// Here u = N' - sigma1 W1 works out to -a^2 b^2 alpha, so W2 = -a b alpha.
inline CurveSpec family_curve(double a, double b, double t0 = -1.5, double t1 = 1.5,
                              int samples = 201) {
    const double m = 1.0 / std::sqrt(a * a + b * b);
    const double A = m / a;
    const double B = m / b;
    return nullframe::make_curve(
        {fmt(A) + "*sinh(" + fmt(a) + "*t)", fmt(A) + "*cosh(" + fmt(a) + "*t)",
         fmt(B) + "*cos(" + fmt(b) + "*t)", fmt(B) + "*sin(" + fmt(b) + "*t)"},
        t0, t1, samples);
}

inline double family_sigma1(double a, double b) { return (b * b - a * a) / 2.0; }
inline double family_sigma2(double a, double b) { return a * b; }

inline FieldSpec field(const std::string& text) { return nullframe::make_field(text); }

// Canonical initial frame for Frenet integration.
inline nullframe::FrenetInit canonical_init(double t0 = 0.0) {
    const double r = 1.0 / std::sqrt(2.0);
    nullframe::FrenetInit init;
    init.frame.t = t0;
    init.frame.xi = {r, r, 0.0, 0.0};
    init.frame.N = {-r, r, 0.0, 0.0};
    init.frame.W1 = {0.0, 0.0, 1.0, 0.0};
    init.frame.W2 = {0.0, 0.0, 0.0, 1.0};
    return init;
}

// --------------------------------------------------------------------------
// Frame-path differencing (oracles for integrated paths)
// --------------------------------------------------------------------------

// Fourth-order first derivative of uniformly sampled vectors at an interior
// index, optionally on a strided sub-lattice.
inline Vec4 fd1_samples(const std::vector<Vec4>& v, std::size_t i, double h,
                        std::size_t stride = 1) {
    return (v[i - 2 * stride] - v[i - stride] * 8.0 + v[i + stride] * 8.0 -
            v[i + 2 * stride]) /
           (12.0 * h);
}

inline Vec4 fd2_samples(const std::vector<Vec4>& v, std::size_t i, double h,
                        std::size_t stride = 1) {
    return (-v[i - 2 * stride] + v[i - stride] * 16.0 - v[i] * 30.0 + v[i + stride] * 16.0 -
            v[i + 2 * stride]) /
           (12.0 * h * h);
}

// Fourth-order third derivative.
inline Vec4 fd3_samples(const std::vector<Vec4>& v, std::size_t i, double h,
                        std::size_t stride = 1) {
    return (v[i - 3 * stride] - v[i - 2 * stride] * 8.0 + v[i - stride] * 13.0 -
            v[i + stride] * 13.0 + v[i + 2 * stride] * 8.0 - v[i + 3 * stride]) /
           (8.0 * h * h * h);
}

// Recovers the Cartan curvatures of an integrated path by differencing the
// sampled N and projecting on the screen vectors (sigma_i = g(N', W_i)).
struct RecoveredCurvatures {
    std::vector<double> t, sigma1, sigma2;
};

inline RecoveredCurvatures recover_curvatures(const nullframe::FramePath& path) {
    RecoveredCurvatures out;
    const double h = path.grid_step();
    std::vector<Vec4> N;
    for (const auto& s : path.samples) N.push_back(s.N);
    for (std::size_t i = 2; i + 2 < N.size(); ++i) {
        const Vec4 Nd = fd1_samples(N, i, h);
        out.t.push_back(path.samples[i].t);
        out.sigma1.push_back(inner(Nd, path.samples[i].W1));
        out.sigma2.push_back(inner(Nd, path.samples[i].W2));
    }
    return out;
}

// Rebuilds both curvatures from the integrated positions alone: the frame
// construction replayed with position differences instead of jets. Works on
// a widened sub-lattice so third differences stay above the rounding floor.
inline RecoveredCurvatures recover_curvatures_from_positions(
    const nullframe::FramePath& path, std::size_t stride = 8) {
    RecoveredCurvatures out;
    const double hs = path.grid_step() * static_cast<double>(stride);
    const std::vector<Vec4>& pos = path.positions;

    auto sigma1_at = [&](std::size_t i) {
        const Vec4 d3 = fd3_samples(pos, i, hs, stride);
        return 0.5 * inner(d3, d3);
    };
    auto N_at = [&](std::size_t i) {
        const Vec4 d1 = fd1_samples(pos, i, hs, stride);
        const Vec4 d3 = fd3_samples(pos, i, hs, stride);
        return -d3 - d1 * sigma1_at(i);
    };

    for (std::size_t i = 5 * stride; i + 5 * stride < pos.size(); i += stride) {
        // u = N' - sigma1 W1 with W1 = alpha''; |u| = sigma2.
        const std::vector<Vec4> N_lattice = {N_at(i - 2 * stride), N_at(i - stride),
                                             N_at(i), N_at(i + stride),
                                             N_at(i + 2 * stride)};
        const Vec4 Nd = fd1_samples(N_lattice, 2, hs, 1);
        const Vec4 d2 = fd2_samples(pos, i, hs, stride);
        const Vec4 u = Nd - d2 * sigma1_at(i);
        out.t.push_back(path.samples[i].t);
        out.sigma1.push_back(sigma1_at(i));
        out.sigma2.push_back(std::sqrt(std::max(0.0, inner(u, u))));
    }
    return out;
}

// --------------------------------------------------------------------------
// Random generators (fixed seeds; property tests stay reproducible)
// --------------------------------------------------------------------------

// Random smooth expression in t built from a domain-safe family: constants,
// t, sin/cos/sinh/cosh/exp of damped linear arguments, sums, products, and
// divisions by strictly positive denominators.
inline std::string random_smooth_expr(std::mt19937& rng, int depth = 0) {
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_real_distribution<double> freq(0.3, 1.2);
    std::uniform_int_distribution<int> pick(0, depth >= 3 ? 3 : 7);
    switch (pick(rng)) {
        case 0: return fmt(coef(rng));
        case 1: return "t";
        case 2: return "(" + fmt(coef(rng)) + " + " + fmt(coef(rng)) + "*t)";
        case 3: {
            std::uniform_int_distribution<int> fn(0, 4);
            const char* names[] = {"sin", "cos", "sinh", "cosh", "exp"};
            return std::string(names[fn(rng)]) + "(" + fmt(freq(rng)) + "*t + " +
                   fmt(coef(rng)) + ")";
        }
        case 4:
            return "(" + random_smooth_expr(rng, depth + 1) + " + " +
                   random_smooth_expr(rng, depth + 1) + ")";
        case 5:
            return "(" + random_smooth_expr(rng, depth + 1) + "*" +
                   random_smooth_expr(rng, depth + 1) + ")";
        case 6:
            return "(" + random_smooth_expr(rng, depth + 1) + "/(2.5 + t^2))";
        default:
            return "sqrt(1.5 + t^2)";
    }
}

}  // namespace support
