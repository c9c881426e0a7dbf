#pragma once

#include <string>
#include <vector>

#include "nullframe/expr.hpp"
#include "nullframe/frame.hpp"
#include "nullframe/minkowski.hpp"

namespace nullframe {

// Scalar field over (x1, x2, x3, x4).
struct FieldSpec {
    ExprAst expr;
};

FieldSpec make_field(const std::string& expression);

// How the gradient vector is read off the partial derivatives. Metric is
// the definitional choice, g(grad f, X) = X(f); PartialsTuple skips the
// index raising and is provided as a diagnostic only (it reproduces the
// tabulated vector of one bundled reference example). Theorem checks always use
// Metric.
enum class GradientConvention { Metric, PartialsTuple };

std::string to_string(GradientConvention c);
GradientConvention gradient_convention_from_string(const std::string& s);

// Metric gradient at p.
Vec4 gradient(const FieldSpec& field, const Vec4& p);
Vec4 gradient(const FieldSpec& field, const Vec4& p, GradientConvention convention);

struct GradientSample {
    double t = 0.0;
    Vec4 grad;
    double norm = 0.0;  // sqrt|g(grad, grad)|
    double hessian_max_abs = 0.0;
};

struct EikonalCheck {
    bool is_eikonal = false;
    bool gradient_is_null = false;  // |grad f| constantly ~0 along the curve
    double norm_value = 0.0;        // grid mean of |grad f|
    double max_deviation = 0.0;     // max - min over the grid
    std::vector<GradientSample> samples;
};

// Samples sqrt|g(grad f, grad f)| along the curve. The norm is the same
// under both conventions; `convention` only shapes the recorded gradient
// vectors.
EikonalCheck eikonal_deviation(const FieldSpec& field, const CurveSpec& curve, double tol,
                               GradientConvention convention = GradientConvention::Metric);

struct HessianCheck {
    bool holds = false;
    double max_entry = 0.0;             // max |d_i d_j f| over the grid
    double transport_deviation = 0.0;   // finite-difference drift of grad f along the curve
};

// In flat space the Hessian tensor is the matrix of second partials, and it
// vanishes along the curve exactly when grad f is parallel (constant) there.
// The finite-difference transport drift cross-checks that equivalence.
HessianCheck hessian_zero_along(const FieldSpec& field, const CurveSpec& curve,
                                double tol = 1e-9);

// max over the grid of |g(grad f, xi) - d(f o alpha)/dt|; the two sides are
// computed along independent routes (field probe + metric pairing vs. the
// jet of the substituted scalar).
double chain_rule_residual(const FieldSpec& field, const CurveSpec& curve);

// f o alpha as a one-variable expression (plain tree substitution).
ExprAst compose_with_curve(const FieldSpec& field, const CurveSpec& curve);

}  // namespace nullframe
