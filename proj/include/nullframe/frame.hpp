#pragma once

#include <array>
#include <string>
#include <vector>

#include "nullframe/expr.hpp"
#include "nullframe/jet.hpp"
#include "nullframe/minkowski.hpp"

namespace nullframe {

struct Tolerances {
    double frame_tol = 1e-9;  // metric identities of the frame
    double const_tol = 1e-6;  // constancy of sampled profiles
    double ode_tol = 1e-9;    // invariant drift of integrated paths
};

// Parametric curve alpha(t) with a uniform evaluation grid.
struct CurveSpec {
    std::array<ExprAst, 4> components;
    double t_min = 0.0;
    double t_max = 1.0;
    int sample_count = 201;

    std::vector<double> grid() const;
    Vec4 position(double t) const;
};

CurveSpec make_curve(const std::array<std::string, 4>& expressions, double t_min,
                     double t_max, int sample_count);

// Frame and curvature data at one parameter value. The ten metric
// conditions (xi, N null; g(xi,N)=1; W1, W2 orthonormal; mixed products
// zero) hold within frame_tol for every sample the library produces.
struct CartanFrameSample {
    double t = 0.0;
    Vec4 xi, N, W1, W2;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double sigma1_d = 0.0;
    double sigma1_dd = 0.0;
    double sigma2_d = 0.0;
    bool sigma2_degenerate = false;  // W2 came from orthonormal completion
};

// Largest violation of the ten frame conditions.
double gram_deviation(const CartanFrameSample& f);

// Vector of R^4_1 whose components are Taylor expansions in the curve
// parameter; lets frame formulas carry their own derivatives.
struct JetVec4 {
    Jet x1, x2, x3, x4;

    Vec4 value() const { return {x1.value(), x2.value(), x3.value(), x4.value()}; }
    Vec4 derivative(int k) const {
        return {x1.derivative(k), x2.derivative(k), x3.derivative(k), x4.derivative(k)};
    }
    int order() const { return x1.order(); }

    JetVec4 operator-() const { return {-x1, -x2, -x3, -x4}; }
    JetVec4 operator+(const JetVec4& o) const {
        return {x1 + o.x1, x2 + o.x2, x3 + o.x3, x4 + o.x4};
    }
    JetVec4 operator-(const JetVec4& o) const {
        return {x1 - o.x1, x2 - o.x2, x3 - o.x3, x4 - o.x4};
    }
};

JetVec4 operator*(const Jet& s, const JetVec4& v);
JetVec4 operator/(const JetVec4& v, const Jet& s);
Jet inner(const JetVec4& a, const JetVec4& b);
JetVec4 derivative_jet(const JetVec4& v);

// Full jet-valued frame at one parameter value; everything downstream
// (Frenet residuals, curvature derivatives, high-order determinants) reads
// exact derivatives out of these series.
struct FrameJets {
    double t = 0.0;
    JetVec4 position;  // order >= 6: position.derivative(5) is exact
    JetVec4 xi, N, W1, W2;
    Jet sigma1, sigma2;
    bool sigma2_degenerate = false;
};

struct CurveCheck {
    bool is_null = false;
    bool is_pseudo_arc = false;
    bool is_cartan = false;
    double max_null_deviation = 0.0;        // max |g(a', a')|
    double max_pseudo_arc_deviation = 0.0;  // max |g(a'', a'') - 1|
    double min_cartan_gram = 0.0;           // min relative 3x3 Gram determinant
};

CurveCheck verify_curve(const CurveSpec& curve, double tol);

FrameJets frame_jets_at(const CurveSpec& curve, double t, double tol);
CartanFrameSample cartan_frame_at(const CurveSpec& curve, double t, double tol);

struct FramePath {
    std::vector<CartanFrameSample> samples;
    std::vector<Vec4> positions;  // empty when the source had no positions

    double grid_step() const;
    double max_gram_deviation() const;
};

FramePath frame_path(const CurveSpec& curve, double tol);

struct FrenetResiduals {
    double xi_eq = 0.0;  // ||xi' - W1||
    double N_eq = 0.0;   // ||N' - sigma1 W1 - sigma2 W2||
    double W1_eq = 0.0;  // ||W1' + sigma1 xi + N||
    double W2_eq = 0.0;  // ||W2' + sigma2 xi||

    double max() const;
};

FrenetResiduals frenet_residuals(const CurveSpec& curve, double t, double tol);

// Monotone C1 interpolant (Fritsch-Carlson tangents) through strictly
// increasing nodes; used for the pseudo-arc map and its inverse.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;

private:
    std::vector<double> x_, y_, m_;
    std::size_t segment(double x) const;
};

// Cumulative map s(t) = integral of g(alpha'', alpha'')^(1/4) and its
// inverse, sampled on the curve grid.
struct PseudoArcMap {
    std::vector<double> t_nodes;
    std::vector<double> s_nodes;
    MonotoneCubic forward;   // s(t)
    MonotoneCubic inverse;   // t(s)

    double s_of_t(double t) const { return forward(t); }
    double t_of_s(double s) const { return inverse(s); }
    // Interpolant slope; deviations from the true integrand measure the
    // quality of the sampled map.
    double ds_dt(double t) const { return forward.derivative(t); }
    double s_min() const { return s_nodes.front(); }
    double s_max() const { return s_nodes.back(); }
};

PseudoArcMap reparametrize_pseudo_arc(const CurveSpec& curve, double tol = 1e-9);

struct FrenetInit {
    CartanFrameSample frame;
    Vec4 position;
};

// Classical fixed-step RK4 for the Frenet system (16 frame components plus
// 4 position components), sampled on a uniform grid of sample_count points
// over [t_min, t_max]. Curvatures are expressions in t; their derivatives
// on the returned samples come from jets of those expressions.
FramePath integrate_frenet(const ExprAst& sigma1, const ExprAst& sigma2,
                           const FrenetInit& init, double t_min, double t_max,
                           int sample_count);

}  // namespace nullframe
