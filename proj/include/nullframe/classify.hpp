#pragma once

#include <span>
#include <string>
#include <vector>

#include "nullframe/eikonal.hpp"
#include "nullframe/frame.hpp"

namespace nullframe {

// Expansion coefficients of a vector in the frame at one sample,
// v = a1*xi + a2*N + a3*W1 + a4*W2, read off through the metric pairings
// (a1 = g(v,N), a2 = g(v,xi), a3 = g(v,W1), a4 = g(v,W2)).
struct FrameCoefficients {
    double t = 0.0;
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
    double residual = 0.0;  // ||v - sum a_i basis_i|| (Euclidean)
};

FrameCoefficients frame_coefficients(const Vec4& v, const CartanFrameSample& frame);

// Constancy verdict for a sampled profile. A "yes" needs the profile
// constant AND the constant nonzero AND the field eikonal; the other
// outcomes are kept apart so a constant-but-zero profile is visible.
struct ConstancyVerdict {
    enum class Status { ConstantNonzero, ConstantZero, NonConstant, NotEikonal };
    bool verdict = false;
    Status status = Status::NonConstant;
    double c = 0.0;          // grid mean
    double deviation = 0.0;  // max - min
};

std::string to_string(ConstancyVerdict::Status s);

struct ClassificationReport {
    CurveCheck curve;
    EikonalCheck eikonal;
    HessianCheck hessian;
    ConstancyVerdict helix;  // g(grad f, xi)
    ConstancyVerdict slant;  // g(grad f, N)
    GradientConvention convention = GradientConvention::Metric;

    // Helix + zero Hessian + nowhere-zero curvatures must exclude the slant
    // verdict; a violation marks an internal inconsistency.
    bool corollary2_applicable = false;
    bool corollary2_consistent = true;

    std::vector<std::string> warnings;

    std::vector<double> grid;
    std::vector<double> grad_xi_profile;
    std::vector<double> grad_N_profile;
    std::vector<double> grad_norm_profile;
    std::vector<double> sigma1_profile;
    std::vector<double> sigma2_profile;
};

ClassificationReport classify(const CurveSpec& curve, const FieldSpec& field,
                              const Tolerances& tols,
                              GradientConvention convention = GradientConvention::Metric);

// First derivative of uniformly sampled values, fourth-order stencils
// (central inside, one-sided at the edges); needs at least five samples.
std::vector<double> grid_derivative(std::span<const double> values, double step);

struct Theorem1Check {
    bool linear_along = false;       // d(f o alpha)/dt constant on the grid
    double derivative_deviation = 0.0;
    bool helix_constant = false;     // g(grad f, xi) constant, metric convention
    bool equivalence_holds = false;
    std::vector<double> derivative_profile;
};

Theorem1Check theorem1_check(const CurveSpec& curve, const FieldSpec& field, double tol);

struct Theorem2Check {
    std::vector<double> residual_profile;  // (sigma1'/sigma2)' - sigma2
    double max_residual = 0.0;
    bool holds = false;
    bool sigma1_nonconstant = false;
};

// Differentiated form of the helix curvature condition; requires
// |sigma2| > tol on the whole grid.
Theorem2Check theorem2_condition(const FramePath& path, double tol);
Theorem2Check theorem2_condition(const CurveSpec& curve, double tol);

struct AxisCheck {
    std::vector<Vec4> axis_samples;  // c[(-sigma1) xi + N - phi W2], phi = sigma1'/sigma2
    double drift = 0.0;              // max ||v(t) - v(t0)||
    bool constant_axis = false;
    double g_axis_xi_deviation = 0.0;  // max - min of g(v, xi)
    double g_axis_xi_mean = 0.0;
};

// phi_offset shifts the antiderivative choice phi -> phi + offset; any
// nonzero offset must break parallelism (negative control).
AxisCheck helix_axis(const FramePath& path, double c, double tol, double phi_offset = 0.0);
AxisCheck helix_axis(const CurveSpec& curve, double c, double tol, double phi_offset = 0.0);

struct Theorem3Check {
    double det_numeric = 0.0;  // det4(a'', a''', a'''', a''''') from jets
    double det_formula = 0.0;  // sigma2^3 - (sigma1'' sigma2 - sigma2' sigma1')
    bool match = false;        // |det_numeric| vs |det_formula|, relative
};

Theorem3Check theorem3_det(const CurveSpec& curve, double t);

struct Theorem4Check {
    // max |a2 s1 + a3 s2|, |a1' - a2|, |a2' + a1 s1 + c|, |a3' + a1 s2|
    double max_r1 = 0.0, max_r2 = 0.0, max_r3 = 0.0, max_r4 = 0.0;
    double c_mean = 0.0;
    double c_deviation = 0.0;
    bool c_nonzero = false;  // slant hypothesis: g(grad f, N) a non-zero constant
    std::vector<double> grid;
    std::vector<double> a1, a2, a3, c;
    std::vector<double> r1, r2, r3, r4;

    double max_residual() const;
};

Theorem4Check theorem4_residuals(const CurveSpec& curve, const FieldSpec& field, double tol);

struct Corollary3Params {
    double c = 1.0;
    double m = 0.0;
    double n = 0.0;
    double k = 0.0;
};

// Degenerate-curvature axis c*xi + (-(c/2) t^2 + m t + n) N + (-c t + m) W1
// + k W2; requires sigma1 = sigma2 = 0 at the sample.
Vec4 corollary3_axis(const Corollary3Params& params, const CartanFrameSample& frame,
                     double tol = 1e-9);

}  // namespace nullframe
