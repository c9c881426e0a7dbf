#include <doctest.h>

#include <array>
#include <random>

#include "nullframe/expr.hpp"
#include "support.hpp"

using namespace nullframe;

namespace {
const std::vector<std::string> kT = {"t"};
const std::vector<std::string> kX = {"x1", "x2", "x3", "x4"};

double eval1(const ExprAst& ast, double t) {
    const std::array<double, 1> v = {t};
    return eval_scalar(ast, v);
}
}  // namespace

TEST_CASE("parse: arithmetic, precedence, functions") {
    CHECK(eval1(parse_expr("t^3/6 + t", kT), 1.0) == doctest::Approx(7.0 / 6.0).epsilon(1e-15));
    CHECK(eval1(parse_expr("2*t^2 - t/2", kT), 3.0) == doctest::Approx(16.5));
    CHECK(eval1(parse_expr("-t^2", kT), 2.0) == doctest::Approx(-4.0));
    CHECK(eval1(parse_expr("(1 + 2)*t", kT), 2.0) == doctest::Approx(6.0));
    CHECK(eval1(parse_expr("sin(0*t)", kT), 5.0) == doctest::Approx(0.0));
    CHECK(eval1(parse_expr("sqrt(t + 2)", kT), 2.0) == doctest::Approx(2.0));
    CHECK(eval1(parse_expr("1e-2*t", kT), 1.0) == doctest::Approx(0.01));

    const ExprAst f = parse_expr("x1*x2", kX);
    CHECK(f.variables().size() == 4);
}

TEST_CASE("parse: errors carry position and name") {
    CHECK_THROWS_AS(parse_expr("", kT), SyntaxError);
    CHECK_THROWS_AS(parse_expr("1 +", kT), SyntaxError);
    CHECK_THROWS_AS(parse_expr("((t)", kT), SyntaxError);
    CHECK_THROWS_AS(parse_expr("t )", kT), SyntaxError);
    CHECK_THROWS_AS(parse_expr("t $ 2", kT), SyntaxError);
    CHECK_THROWS_AS(parse_expr("sinh(q)", kT), UnknownIdentifier);
    CHECK_THROWS_AS(parse_expr("tan(t)", kT), UnknownIdentifier);
    CHECK_THROWS_AS(parse_expr("x1", kT), UnknownIdentifier);
    CHECK_THROWS_AS(parse_expr("t^t", kT), SyntaxError);  // exponent must be constant

    try {
        parse_expr("1 + @", kT);
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.position == 4);
    }
    try {
        parse_expr("sinh(q)", kT);
        FAIL("expected UnknownIdentifier");
    } catch (const UnknownIdentifier& e) {
        CHECK(e.name == "q");
    }
}

TEST_CASE("parse: constant exponents fold") {
    CHECK(eval1(parse_expr("t^(1 + 2)", kT), 2.0) == doctest::Approx(8.0));
    CHECK(eval1(parse_expr("t^-2", kT), 2.0) == doctest::Approx(0.25));
    CHECK(eval1(parse_expr("t^0.5", kT), 4.0) == doctest::Approx(2.0));
    CHECK(eval1(parse_expr("t^2^3", kT), 2.0) == doctest::Approx(256.0));  // right-assoc
}

TEST_CASE("eval_jet: Maclaurin series of sinh") {
    const Jet j = eval_jet(parse_expr("sinh(t)", kT), 0.0, 5);
    const double expected[] = {0, 1, 0, 1.0 / 6.0, 0, 1.0 / 120.0};
    for (int k = 0; k <= 5; ++k)
        CHECK(j.coeff(k) == doctest::Approx(expected[k]).epsilon(1e-15));
}

TEST_CASE("eval_jet: cubic curve component at 0") {
    const Jet j = eval_jet(parse_expr("-(t^3/6 + t)", kT), 0.0, 3);
    CHECK(j.derivative(0) == doctest::Approx(0.0));
    CHECK(j.derivative(1) == doctest::Approx(-1.0));
    CHECK(j.derivative(2) == doctest::Approx(0.0));
    CHECK(j.derivative(3) == doctest::Approx(-1.0));
}

TEST_CASE("eval_jet: domain errors") {
    CHECK_THROWS_AS(eval_jet(parse_expr("1/t", kT), 0.0, 3), DomainError);
    CHECK_THROWS_AS(eval_jet(parse_expr("sqrt(t)", kT), -1.0, 3), DomainError);
    CHECK_THROWS_AS(eval_jet(parse_expr("sqrt(t)", kT), 0.0, 3), DomainError);
    CHECK_THROWS_AS(eval_jet(parse_expr("t^(-2)", kT), 0.0, 3), DomainError);
    CHECK_THROWS_AS(eval_jet(parse_expr("t^0.5", kT), -2.0, 3), DomainError);
    CHECK_THROWS_AS(eval_jet(parse_expr("exp(t^2)", kT), 1e6, 3), DomainError);  // overflow
}

TEST_CASE("eval_jet: derivatives match finite differences on random smooth expressions") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> t0(-1.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::string text = support::random_smooth_expr(rng);
        const ExprAst ast = parse_expr(text, kT);
        const double t = t0(rng);
        const Jet j = eval_jet(ast, t, 5);
        auto f = [&](double x) { return eval1(ast, x); };
        for (int k = 1; k <= 3; ++k) {
            const double jet_val = j.derivative(k);
            const double fd_val = support::fd_derivative(f, t, k);
            CHECK(std::abs(jet_val - fd_val) <=
                  1e-6 * std::max(1.0, std::abs(jet_val)));
        }
    }
}

TEST_CASE("eval_jet: exactness on polynomials against hand coefficients") {
    // (1 + 2t)^4 at t = 0.5: value 16, d1 = 64, d2 = 192, d3 = 384, d4 = 384.
    const Jet j = eval_jet(parse_expr("(1 + 2*t)^4", kT), 0.5, 5);
    CHECK(j.derivative(0) == doctest::Approx(16.0).epsilon(1e-14));
    CHECK(j.derivative(1) == doctest::Approx(64.0).epsilon(1e-14));
    CHECK(j.derivative(2) == doctest::Approx(192.0).epsilon(1e-14));
    CHECK(j.derivative(3) == doctest::Approx(384.0).epsilon(1e-14));
    CHECK(j.derivative(4) == doctest::Approx(384.0).epsilon(1e-14));
    CHECK(j.derivative(5) == doctest::Approx(0.0));
}

TEST_CASE("eval_jet: real-exponent power rule against hand derivatives") {
    // t^2.5 at t = 4: f = 32, f' = 2.5*4^1.5 = 20, f'' = 7.5, f''' = 0.9375.
    const Jet j = eval_jet(parse_expr("t^2.5", kT), 4.0, 4);
    CHECK(j.derivative(0) == doctest::Approx(32.0).epsilon(1e-14));
    CHECK(j.derivative(1) == doctest::Approx(20.0).epsilon(1e-14));
    CHECK(j.derivative(2) == doctest::Approx(7.5).epsilon(1e-14));
    CHECK(j.derivative(3) == doctest::Approx(0.9375).epsilon(1e-14));

    const Jet r = eval_jet(parse_expr("t^0.5", kT), 4.0, 3);
    CHECK(r.derivative(0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.derivative(1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(r.derivative(2) == doctest::Approx(-0.03125).epsilon(1e-14));
}

TEST_CASE("eval_field: gradients and Hessians") {
    const FieldProbe p4 = eval_field(parse_expr("x4", kX), {3, -1, 2, 7});
    CHECK(p4.value == doctest::Approx(7.0));
    CHECK(p4.partials.x1 == 0.0);
    CHECK(p4.partials.x4 == 1.0);
    CHECK(p4.max_abs_second() == 0.0);

    const FieldProbe p = eval_field(parse_expr("x1*x2", kX), {3, 5, 0, 0});
    CHECK(p.value == doctest::Approx(15.0));
    CHECK(p.partials.x1 == doctest::Approx(5.0));
    CHECK(p.partials.x2 == doctest::Approx(3.0));
    CHECK(p.second[0][1] == doctest::Approx(1.0));
    CHECK(p.second[1][0] == doctest::Approx(1.0));
    CHECK(p.second[0][0] == doctest::Approx(0.0));

    const FieldProbe pc = eval_field(parse_expr("3 + 0*x1", kX), {1, 2, 3, 4});
    CHECK(pc.value == doctest::Approx(3.0));
    CHECK(max_abs_component(pc.partials) == 0.0);
}

TEST_CASE("eval_field: finite-difference oracle for x1*x2") {
    const ExprAst ast = parse_expr("x1*x2", kX);
    const Vec4 p = {3, 5, 0, 0};
    const FieldProbe probe = eval_field(ast, p);
    // First partials at step 1e-5.
    for (int i = 0; i < 4; ++i) {
        Vec4 dir{};
        dir[i] = 1.0;
        auto f = [&](double s) { return eval_field(ast, p + dir * s).value; };
        const double fd = (f(1e-5) - f(-1e-5)) / 2e-5;
        CHECK(std::abs(probe.partials[i] - fd) <= 1e-8);
    }
    // Mixed second partial; the wider step keeps rounding below 1e-8.
    auto f12 = [&](double s1, double s2) {
        return eval_field(ast, {p.x1 + s1, p.x2 + s2, p.x3, p.x4}).value;
    };
    const double h = 1e-3;
    const double fd_mixed =
        (f12(h, h) - f12(h, -h) - f12(-h, h) + f12(-h, -h)) / (4 * h * h);
    CHECK(std::abs(probe.second[0][1] - fd_mixed) <= 1e-8);
}

TEST_CASE("eval_field: partials match directional differences in random directions") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const ExprAst ast = parse_expr("sin(x1)*cosh(x2) + x3^2*x4 - exp(0.3*x4)", kX);
    const FieldSpec spec{ast};
    const Vec4 p = {0.4, -0.2, 1.1, 0.7};
    const FieldProbe probe = eval_field(ast, p);
    for (int i = 0; i < 20; ++i) {
        const Vec4 dir = {d(rng), d(rng), d(rng), d(rng)};
        const double expected = dot(probe.partials, dir);
        const double fd = support::directional_fd(spec, p, dir);
        CHECK(std::abs(expected - fd) <= 1e-7);
    }
}

TEST_CASE("eval_field: Hessian symmetry") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(-1.5, 1.5);
    const ExprAst ast = parse_expr("x1*sin(x2) + cosh(x3)*x4^2 + x1^3*x4", kX);
    for (int trial = 0; trial < 20; ++trial) {
        const FieldProbe p = eval_field(ast, {d(rng), d(rng), d(rng), d(rng)});
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                CHECK(std::abs(p.second[i][j] - p.second[j][i]) <= 1e-12);
    }
}

TEST_CASE("print/parse round trip is structural") {
    std::mt19937 rng(321);
    for (int trial = 0; trial < 60; ++trial) {
        const std::string text = support::random_smooth_expr(rng);
        const ExprAst ast = parse_expr(text, kT);
        const ExprAst again = parse_expr(to_string(ast), kT);
        CHECK(structurally_equal(ast, again));
    }
    for (const char* text : {"t^3/6 + t", "-(t^2/2)", "t^-2 - 1/(t + 3)", "-sinh(t)/sqrt(2)",
                             "cos(t)^2*sin(t) - -t"}) {
        const ExprAst ast = parse_expr(text, kT);
        CHECK(structurally_equal(ast, parse_expr(to_string(ast), kT)));
    }
}

TEST_CASE("substitute: curve into field") {
    const ExprAst f = parse_expr("x1*x2 - x4^2", kX);
    const CurveSpec curve = support::example1_curve();
    const ExprAst composed = substitute(
        f, {curve.components[0], curve.components[1], curve.components[2],
            curve.components[3]});
    CHECK(composed.variables() == kT);
    for (double t : {-1.5, -0.3, 0.0, 0.7, 1.9}) {
        const Vec4 p = curve.position(t);
        const double direct = eval_field(f, p).value;
        CHECK(eval1(composed, t) == doctest::Approx(direct).epsilon(1e-14));
    }
}

TEST_CASE("eval argument validation") {
    const ExprAst f = parse_expr("x1", kX);
    CHECK_THROWS_AS(eval_jet(f, 0.0, 3), InvalidArgument);
    const ExprAst g = parse_expr("t", kT);
    CHECK_THROWS_AS(eval_field(g, {0, 0, 0, 0}), InvalidArgument);
    const std::array<double, 2> wrong = {1.0, 2.0};
    CHECK_THROWS_AS(eval_scalar(g, wrong), InvalidArgument);
}
