#include "nullframe/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nullframe {

namespace {

constexpr double kTheorem3RelTol = 1e-6;
constexpr double kTheorem3AbsFloor = 1e-9;

struct ProfileStats {
    double mean = 0.0;
    double deviation = 0.0;  // max - min
};

ProfileStats profile_stats(std::span<const double> values) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
    }
    return {sum / static_cast<double>(values.size()), hi - lo};
}

ConstancyVerdict constancy_verdict(std::span<const double> values, bool is_eikonal,
                                   double tol) {
    const ProfileStats stats = profile_stats(values);
    ConstancyVerdict v;
    v.c = stats.mean;
    v.deviation = stats.deviation;
    if (!is_eikonal) {
        v.status = ConstancyVerdict::Status::NotEikonal;
    } else if (stats.deviation > tol) {
        v.status = ConstancyVerdict::Status::NonConstant;
    } else if (std::abs(stats.mean) <= tol) {
        v.status = ConstancyVerdict::Status::ConstantZero;
    } else {
        v.status = ConstancyVerdict::Status::ConstantNonzero;
        v.verdict = true;
    }
    return v;
}

double min_abs(std::span<const double> values) {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values) m = std::min(m, std::abs(v));
    return m;
}

}  // namespace

FrameCoefficients frame_coefficients(const Vec4& v, const CartanFrameSample& frame) {
    FrameCoefficients fc;
    fc.t = frame.t;
    fc.a1 = inner(v, frame.N);
    fc.a2 = inner(v, frame.xi);
    fc.a3 = inner(v, frame.W1);
    fc.a4 = inner(v, frame.W2);
    const Vec4 rebuilt =
        frame.xi * fc.a1 + frame.N * fc.a2 + frame.W1 * fc.a3 + frame.W2 * fc.a4;
    fc.residual = euclidean_norm(v - rebuilt);
    return fc;
}

std::string to_string(ConstancyVerdict::Status s) {
    switch (s) {
        case ConstancyVerdict::Status::ConstantNonzero: return "constant-nonzero";
        case ConstancyVerdict::Status::ConstantZero: return "constant-but-zero";
        case ConstancyVerdict::Status::NonConstant: return "non-constant";
        case ConstancyVerdict::Status::NotEikonal: return "not-eikonal";
    }
    return "?";
}

ClassificationReport classify(const CurveSpec& curve, const FieldSpec& field,
                              const Tolerances& tols, GradientConvention convention) {
    ClassificationReport rep;
    rep.convention = convention;
    rep.curve = verify_curve(curve, tols.frame_tol);
    rep.eikonal = eikonal_deviation(field, curve, tols.const_tol, convention);
    rep.hessian = hessian_zero_along(field, curve);

    const FramePath path = frame_path(curve, tols.frame_tol);
    std::vector<double> other_xi;  // same pairing under the other convention
    const GradientConvention other = convention == GradientConvention::Metric
                                         ? GradientConvention::PartialsTuple
                                         : GradientConvention::Metric;
    for (std::size_t i = 0; i < path.samples.size(); ++i) {
        const CartanFrameSample& s = path.samples[i];
        const Vec4 p = path.positions[i];
        const Vec4 grad = gradient(field, p, convention);
        rep.grid.push_back(s.t);
        rep.grad_xi_profile.push_back(inner(grad, s.xi));
        rep.grad_N_profile.push_back(inner(grad, s.N));
        rep.grad_norm_profile.push_back(std::sqrt(std::abs(inner(grad, grad))));
        rep.sigma1_profile.push_back(s.sigma1);
        rep.sigma2_profile.push_back(s.sigma2);
        other_xi.push_back(inner(gradient(field, p, other), s.xi));
    }

    rep.helix = constancy_verdict(rep.grad_xi_profile, rep.eikonal.is_eikonal, tols.const_tol);
    rep.slant = constancy_verdict(rep.grad_N_profile, rep.eikonal.is_eikonal, tols.const_tol);

    const ConstancyVerdict helix_other =
        constancy_verdict(other_xi, rep.eikonal.is_eikonal, tols.const_tol);
    if (helix_other.status != rep.helix.status) {
        rep.warnings.push_back(
            "helix classification differs between gradient conventions: " +
            to_string(convention) + " gives " + to_string(rep.helix.status) + ", " +
            to_string(other) + " gives " + to_string(helix_other.status) +
            "; the metric convention is definitional, the partials-tuple one is diagnostic");
    }
    if (rep.eikonal.gradient_is_null)
        rep.warnings.push_back("gradient norm is constantly zero along the curve");

    rep.corollary2_applicable = rep.helix.verdict && rep.hessian.holds &&
                                min_abs(rep.sigma1_profile) > tols.const_tol &&
                                min_abs(rep.sigma2_profile) > tols.const_tol;
    if (rep.corollary2_applicable && rep.slant.verdict) {
        rep.corollary2_consistent = false;
        rep.warnings.push_back(
            "ConsistencyViolation: helix with zero Hessian and nowhere-zero curvatures "
            "must not classify as a slant helix");
    }
    return rep;
}

std::vector<double> grid_derivative(std::span<const double> f, double step) {
    const std::size_t n = f.size();
    if (n < 5) throw InvalidArgument("grid_derivative: need at least five samples");
    if (!(step > 0)) throw InvalidArgument("grid_derivative: step must be positive");
    std::vector<double> d(n);
    const double inv12h = 1.0 / (12.0 * step);
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) * inv12h;
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) * inv12h;
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) * inv12h;
    d[n - 2] = (3 * f[n - 1] + 10 * f[n - 2] - 18 * f[n - 3] + 6 * f[n - 4] - f[n - 5]) * inv12h;
    d[n - 1] =
        (25 * f[n - 1] - 48 * f[n - 2] + 36 * f[n - 3] - 16 * f[n - 4] + 3 * f[n - 5]) * inv12h;
    return d;
}

Theorem1Check theorem1_check(const CurveSpec& curve, const FieldSpec& field, double tol) {
    Theorem1Check res;
    const ExprAst composed = compose_with_curve(field, curve);
    std::vector<double> grad_xi;
    for (double t : curve.grid()) {
        res.derivative_profile.push_back(eval_jet(composed, t, 1).derivative(1));
        const FrameJets fj = frame_jets_at(curve, t, 1e-9);
        const Vec4 grad = gradient(field, fj.position.value());
        grad_xi.push_back(inner(grad, fj.xi.value()));
    }
    res.derivative_deviation = profile_stats(res.derivative_profile).deviation;
    res.linear_along = res.derivative_deviation <= tol;
    res.helix_constant = profile_stats(grad_xi).deviation <= tol;
    res.equivalence_holds = res.linear_along == res.helix_constant;
    return res;
}

Theorem2Check theorem2_condition(const FramePath& path, double tol) {
    Theorem2Check res;
    std::vector<double> sigma1;
    for (const CartanFrameSample& s : path.samples) {
        if (std::abs(s.sigma2) <= tol)
            throw CurvatureDegenerate("theorem2_condition: sigma2 vanishes at t = " +
                                      std::to_string(s.t));
        // (sigma1'/sigma2)' - sigma2, expanded by the quotient rule.
        const double residual =
            (s.sigma1_dd * s.sigma2 - s.sigma1_d * s.sigma2_d) / (s.sigma2 * s.sigma2) -
            s.sigma2;
        res.residual_profile.push_back(residual);
        res.max_residual = std::max(res.max_residual, std::abs(residual));
        sigma1.push_back(s.sigma1);
    }
    res.holds = res.max_residual <= tol;
    res.sigma1_nonconstant = profile_stats(sigma1).deviation > tol;
    return res;
}

Theorem2Check theorem2_condition(const CurveSpec& curve, double tol) {
    return theorem2_condition(frame_path(curve, 1e-9), tol);
}

AxisCheck helix_axis(const FramePath& path, double c, double tol, double phi_offset) {
    if (c == 0.0) throw InvalidArgument("helix_axis: c must be non-zero");
    AxisCheck res;
    std::vector<double> g_axis_xi;
    for (const CartanFrameSample& s : path.samples) {
        if (std::abs(s.sigma2) <= tol)
            throw CurvatureDegenerate(
                "helix_axis: sigma2 vanishes at t = " + std::to_string(s.t) +
                "; the degenerate-curvature axis form (corollary3_axis) applies instead");
        const double phi = s.sigma1_d / s.sigma2 + phi_offset;
        const Vec4 v = (s.xi * (-s.sigma1) + s.N - s.W2 * phi) * c;
        res.axis_samples.push_back(v);
        g_axis_xi.push_back(inner(v, s.xi));
    }
    const Vec4 v0 = res.axis_samples.front();
    for (const Vec4& v : res.axis_samples)
        res.drift = std::max(res.drift, euclidean_norm(v - v0));
    res.constant_axis = res.drift <= tol;
    const ProfileStats stats = profile_stats(g_axis_xi);
    res.g_axis_xi_mean = stats.mean;
    res.g_axis_xi_deviation = stats.deviation;
    return res;
}

AxisCheck helix_axis(const CurveSpec& curve, double c, double tol, double phi_offset) {
    return helix_axis(frame_path(curve, 1e-9), c, tol, phi_offset);
}

Theorem3Check theorem3_det(const CurveSpec& curve, double t) {
    const FrameJets fj = frame_jets_at(curve, t, 1e-9);
    Theorem3Check res;
    res.det_numeric = det4(fj.position.derivative(2), fj.position.derivative(3),
                           fj.position.derivative(4), fj.position.derivative(5));
    res.det_formula = std::pow(fj.sigma2.value(), 3) -
                      (fj.sigma1.derivative(2) * fj.sigma2.value() -
                       fj.sigma2.derivative(1) * fj.sigma1.derivative(1));
    const double gap = std::abs(std::abs(res.det_numeric) - std::abs(res.det_formula));
    const double scale = std::max(std::abs(res.det_numeric), std::abs(res.det_formula));
    res.match = gap <= kTheorem3RelTol * scale + kTheorem3AbsFloor;
    return res;
}

double Theorem4Check::max_residual() const {
    return std::max(std::max(max_r1, max_r2), std::max(max_r3, max_r4));
}

Theorem4Check theorem4_residuals(const CurveSpec& curve, const FieldSpec& field, double tol) {
    const HessianCheck hessian = hessian_zero_along(field, curve);
    if (!hessian.holds)
        throw HessianNotZero("theorem4_residuals: the field Hessian is not zero (max entry " +
                             std::to_string(hessian.max_entry) + ")");

    const FramePath path = frame_path(curve, 1e-9);
    Theorem4Check res;
    std::vector<double> s1, s2;
    for (std::size_t i = 0; i < path.samples.size(); ++i) {
        const CartanFrameSample& s = path.samples[i];
        const Vec4 grad = gradient(field, path.positions[i]);
        res.grid.push_back(s.t);
        res.a1.push_back(inner(grad, s.xi));
        res.a2.push_back(inner(grad, s.W1));
        res.a3.push_back(inner(grad, s.W2));
        res.c.push_back(inner(grad, s.N));
        s1.push_back(s.sigma1);
        s2.push_back(s.sigma2);
    }
    const double h = path.grid_step();
    const std::vector<double> a1d = grid_derivative(res.a1, h);
    const std::vector<double> a2d = grid_derivative(res.a2, h);
    const std::vector<double> a3d = grid_derivative(res.a3, h);
    for (std::size_t i = 0; i < res.grid.size(); ++i) {
        res.r1.push_back(res.a2[i] * s1[i] + res.a3[i] * s2[i]);
        res.r2.push_back(a1d[i] - res.a2[i]);
        res.r3.push_back(a2d[i] + res.a1[i] * s1[i] + res.c[i]);
        res.r4.push_back(a3d[i] + res.a1[i] * s2[i]);
        res.max_r1 = std::max(res.max_r1, std::abs(res.r1[i]));
        res.max_r2 = std::max(res.max_r2, std::abs(res.r2[i]));
        res.max_r3 = std::max(res.max_r3, std::abs(res.r3[i]));
        res.max_r4 = std::max(res.max_r4, std::abs(res.r4[i]));
    }
    const ProfileStats c_stats = profile_stats(res.c);
    res.c_mean = c_stats.mean;
    res.c_deviation = c_stats.deviation;
    res.c_nonzero = std::abs(c_stats.mean) > tol && c_stats.deviation <= tol;
    return res;
}

Vec4 corollary3_axis(const Corollary3Params& params, const CartanFrameSample& frame,
                     double tol) {
    if (params.c == 0.0) throw InvalidArgument("corollary3_axis: c must be non-zero");
    const double curvature = std::max(std::abs(frame.sigma1), std::abs(frame.sigma2));
    if (curvature > tol)
        throw CurvatureNotZero(
            "corollary3_axis: requires sigma1 = sigma2 = 0 (max |sigma| = " +
            std::to_string(curvature) + ")");
    const double t = frame.t;
    const double a1 = (-params.c / 2.0) * t * t + params.m * t + params.n;
    const double a2 = -params.c * t + params.m;
    return frame.xi * params.c + frame.N * a1 + frame.W1 * a2 + frame.W2 * params.k;
}

}  // namespace nullframe
