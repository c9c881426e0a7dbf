#include "nullframe/eikonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nullframe {

FieldSpec make_field(const std::string& expression) {
    static const std::vector<std::string> kVars = {"x1", "x2", "x3", "x4"};
    return FieldSpec{parse_expr(expression, kVars)};
}

std::string to_string(GradientConvention c) {
    return c == GradientConvention::Metric ? "metric" : "partials-tuple";
}

GradientConvention gradient_convention_from_string(const std::string& s) {
    if (s == "metric") return GradientConvention::Metric;
    if (s == "partials-tuple") return GradientConvention::PartialsTuple;
    throw InvalidArgument("unknown gradient convention '" + s + "'");
}

Vec4 gradient(const FieldSpec& field, const Vec4& p) {
    return raise_index(eval_field(field.expr, p).partials);
}

Vec4 gradient(const FieldSpec& field, const Vec4& p, GradientConvention convention) {
    const Vec4 partials = eval_field(field.expr, p).partials;
    return convention == GradientConvention::Metric ? raise_index(partials) : partials;
}

EikonalCheck eikonal_deviation(const FieldSpec& field, const CurveSpec& curve, double tol,
                               GradientConvention convention) {
    EikonalCheck res;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    for (double t : curve.grid()) {
        const Vec4 p = curve.position(t);
        const FieldProbe probe = eval_field(field.expr, p);
        GradientSample s;
        s.t = t;
        s.grad = convention == GradientConvention::Metric ? raise_index(probe.partials)
                                                          : probe.partials;
        s.norm = std::sqrt(std::abs(inner(s.grad, s.grad)));
        s.hessian_max_abs = probe.max_abs_second();
        lo = std::min(lo, s.norm);
        hi = std::max(hi, s.norm);
        sum += s.norm;
        res.samples.push_back(s);
    }
    res.max_deviation = hi - lo;
    res.norm_value = sum / static_cast<double>(res.samples.size());
    res.is_eikonal = res.max_deviation <= tol;
    res.gradient_is_null = res.is_eikonal && std::abs(res.norm_value) <= tol;
    return res;
}

HessianCheck hessian_zero_along(const FieldSpec& field, const CurveSpec& curve, double tol) {
    HessianCheck res;
    const std::vector<double> grid = curve.grid();
    for (double t : grid) {
        const FieldProbe probe = eval_field(field.expr, curve.position(t));
        res.max_entry = std::max(res.max_entry, probe.max_abs_second());
    }
    res.holds = res.max_entry <= tol;

    // Independent parallel-transport check: difference grad f along the
    // curve in t. Step sized for first-derivative central differences.
    const double h = 1e-5 * std::max(1.0, std::abs(curve.t_max - curve.t_min));
    for (double t : grid) {
        const double tc = std::clamp(t, curve.t_min + h, curve.t_max - h);
        const Vec4 gp = gradient(field, curve.position(tc + h));
        const Vec4 gm = gradient(field, curve.position(tc - h));
        res.transport_deviation =
            std::max(res.transport_deviation, euclidean_norm((gp - gm) / (2.0 * h)));
    }
    return res;
}

ExprAst compose_with_curve(const FieldSpec& field, const CurveSpec& curve) {
    return substitute(field.expr, {curve.components[0], curve.components[1],
                                   curve.components[2], curve.components[3]});
}

double chain_rule_residual(const FieldSpec& field, const CurveSpec& curve) {
    const ExprAst composed = compose_with_curve(field, curve);
    double res = 0.0;
    for (double t : curve.grid()) {
        const JetVec4 pos = {eval_jet(curve.components[0], t, 1),
                             eval_jet(curve.components[1], t, 1),
                             eval_jet(curve.components[2], t, 1),
                             eval_jet(curve.components[3], t, 1)};
        const Vec4 xi = pos.derivative(1);
        const Vec4 grad = gradient(field, pos.value());
        const double lhs = inner(grad, xi);
        const double rhs = eval_jet(composed, t, 1).derivative(1);
        res = std::max(res, std::abs(lhs - rhs));
    }
    return res;
}

}  // namespace nullframe
