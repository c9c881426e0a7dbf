#include <doctest.h>

#include <cmath>
#include <random>

#include "nullframe/eikonal.hpp"
#include "support.hpp"

using namespace nullframe;

TEST_CASE("gradient: coordinate fields and index raising") {
    const FieldSpec f4 = make_field("x4");
    const Vec4 g4 = gradient(f4, {9, 9, 9, 9});
    CHECK(max_abs_component(g4 - Vec4{0, 0, 0, 1}) == 0.0);

    const FieldSpec f1 = make_field("x1");
    const Vec4 g1 = gradient(f1, {0, 0, 0, 0});
    CHECK(max_abs_component(g1 - Vec4{-1, 0, 0, 0}) == 0.0);

    const FieldSpec f12 = make_field("x1*x2");
    const Vec4 g = gradient(f12, {3, 5, 0, 0});
    CHECK(g.x1 == doctest::Approx(-5.0));
    CHECK(g.x2 == doctest::Approx(3.0));

    // Defining identity: g(grad f, X) equals the directional derivative.
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const FieldSpec f = make_field("x1*sinh(x2) + cos(x3)*x4 + x1^2");
    for (int i = 0; i < 20; ++i) {
        const Vec4 p = {d(rng), d(rng), d(rng), d(rng)};
        const Vec4 dir = {d(rng), d(rng), d(rng), d(rng)};
        const double lhs = inner(gradient(f, p), dir);
        CHECK(std::abs(lhs - support::directional_fd(f, p, dir)) <= 1e-7);
    }

    const Vec4 gp = gradient(f12, {3, 5, 0, 0}, GradientConvention::PartialsTuple);
    CHECK(gp.x1 == doctest::Approx(5.0));
    CHECK(gp.x2 == doctest::Approx(3.0));
}

TEST_CASE("eikonal_deviation: reference example norms") {
    const EikonalCheck e1 =
        eikonal_deviation(make_field("x1*x2"), support::example1_curve(), 1e-6);
    CHECK(e1.is_eikonal);
    CHECK(e1.norm_value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(e1.max_deviation <= 1e-10);
    CHECK(!e1.gradient_is_null);

    const EikonalCheck e2 =
        eikonal_deviation(make_field("x4"), support::example2_curve(), 1e-6);
    CHECK(e2.is_eikonal);
    CHECK(e2.norm_value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eikonal_deviation: non-eikonal and null-gradient cases") {
    const EikonalCheck bad =
        eikonal_deviation(make_field("x1^2"), support::example2_curve(), 1e-6);
    CHECK(!bad.is_eikonal);
    CHECK(bad.max_deviation > 0.1);  // |grad| = 2|x1| varies over the domain

    const EikonalCheck zero =
        eikonal_deviation(make_field("0*x1 + 2"), support::example2_curve(), 1e-6);
    CHECK(zero.is_eikonal);
    CHECK(zero.gradient_is_null);
}

TEST_CASE("eikonal norm is convention independent") {
    const FieldSpec f = make_field("x1*x2");
    const CurveSpec curve = support::example1_curve();
    const EikonalCheck metric =
        eikonal_deviation(f, curve, 1e-6, GradientConvention::Metric);
    const EikonalCheck tuple =
        eikonal_deviation(f, curve, 1e-6, GradientConvention::PartialsTuple);
    CHECK(metric.norm_value == doctest::Approx(tuple.norm_value).epsilon(1e-14));
}

TEST_CASE("hessian_zero_along: coordinate, bilinear and affine fields") {
    const CurveSpec curve = support::example2_curve();
    const HessianCheck h4 = hessian_zero_along(make_field("x4"), curve);
    CHECK(h4.holds);
    CHECK(h4.max_entry == 0.0);
    CHECK(h4.transport_deviation <= 1e-8);

    const HessianCheck h12 = hessian_zero_along(make_field("x1*x2"), curve);
    CHECK(!h12.holds);
    CHECK(h12.max_entry == doctest::Approx(1.0));

    const HessianCheck haff =
        hessian_zero_along(make_field("2*x1 + 3*x2 - x3 + 0.5*x4 + 7"), curve);
    CHECK(haff.holds);
    CHECK(haff.transport_deviation <= 1e-8);
}

TEST_CASE("hessian zero iff gradient parallel along the curve (flat space)") {
    const CurveSpec curve = support::example1_curve(-1.0, 1.0, 101);
    for (const char* text : {"x4", "x1 - x4", "x1*x2", "x1^2", "0.5*x2 + x3",
                             "sin(x3)", "x2*x4"}) {
        const FieldSpec f = make_field(text);
        const HessianCheck h = hessian_zero_along(f, curve);
        // Gradient drift measured directly on the grid.
        double drift = 0.0;
        const Vec4 g0 = gradient(f, curve.position(curve.t_min));
        for (double t : support::linspace(curve.t_min, curve.t_max, 51))
            drift = std::max(drift,
                             max_abs_component(gradient(f, curve.position(t)) - g0));
        if (h.holds) {
            CHECK(drift <= 1e-8);
        } else {
            CHECK(drift > 1e-8);
        }
    }
}

TEST_CASE("chain_rule_residual: definitional identity on every corpus pair") {
    const std::vector<CurveSpec> curves = {support::example1_curve(),
                                           support::example2_curve(),
                                           support::family_curve(1.0, 2.0)};
    for (const CurveSpec& curve : curves) {
        for (const char* text :
             {"x4", "x1 - x4", "x1*x2", "x1^2", "3 + 0*x2", "x2*x3 - x4^2"}) {
            CHECK(chain_rule_residual(make_field(text), curve) <= 1e-8);
        }
    }
}

TEST_CASE("chain rule on the hyperbolic-trig example: hand-differentiated composition") {
    // f = x1*x2 along the curve gives f(alpha(t)) = sinh(2t)/4, so
    // d(f o alpha)/dt = cosh(2t)/2; the metric pairing g(grad f, xi) agrees.
    const FieldSpec f = make_field("x1*x2");
    const CurveSpec curve = support::example1_curve();
    const ExprAst composed = compose_with_curve(f, curve);
    for (double t : support::linspace(-2.0, 2.0, 21)) {
        const double expected = 0.5 * std::cosh(2.0 * t);
        CHECK(eval_jet(composed, t, 1).derivative(1) ==
              doctest::Approx(expected).epsilon(1e-12));
        const Vec4 p = curve.position(t);
        const FrameJets fj = frame_jets_at(curve, t, 1e-9);
        CHECK(inner(gradient(f, p), fj.xi.value()) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("constant field: both chain-rule sides vanish") {
    CHECK(chain_rule_residual(make_field("41 + 0*x1"), support::example2_curve()) <= 1e-15);
}
