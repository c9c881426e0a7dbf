#include "nullframe/frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nullframe {

namespace {

// Order of the position jets; the fifth curve derivative (needed by the
// fourth-order determinant identity) is still exact one level below the top.
constexpr int kFrameJetOrder = 6;

// Relative floor for the 3x3 Gram determinant of {a', a'', a'''}.
constexpr double kCartanRelThreshold = 1e-10;

JetVec4 curve_jets(const CurveSpec& curve, double t, int order) {
    return {eval_jet(curve.components[0], t, order), eval_jet(curve.components[1], t, order),
            eval_jet(curve.components[2], t, order), eval_jet(curve.components[3], t, order)};
}

Jet det3_jet(const Jet& a11, const Jet& a12, const Jet& a13,
             const Jet& a21, const Jet& a22, const Jet& a23,
             const Jet& a31, const Jet& a32, const Jet& a33) {
    return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
           a13 * (a21 * a32 - a22 * a31);
}

// Jet-valued twin of complete_orthonormal: the completion is rational in
// the frame components, so running it in series arithmetic makes the
// completed W2 differentiable alongside everything else.
JetVec4 complete_orthonormal_jets(const JetVec4& v1, const JetVec4& v2, const JetVec4& v3,
                                  int orientation_det, double tol) {
    const Vec4 a = v1.value(), b = v2.value(), c = v3.value();
    const double scale = dot(a, a) * dot(b, b) * dot(c, c);
    if (std::abs(gram3_det(a, b, c)) <= tol * std::max(scale, 1e-300))
        throw DegenerateSpan("orthonormal completion: span is degenerate");

    const Jet cof1 = -det3_jet(v1.x2, v2.x2, v3.x2, v1.x3, v2.x3, v3.x3, v1.x4, v2.x4, v3.x4);
    const Jet cof2 = det3_jet(v1.x1, v2.x1, v3.x1, v1.x3, v2.x3, v3.x3, v1.x4, v2.x4, v3.x4);
    const Jet cof3 = -det3_jet(v1.x1, v2.x1, v3.x1, v1.x2, v2.x2, v3.x2, v1.x4, v2.x4, v3.x4);
    const Jet cof4 = det3_jet(v1.x1, v2.x1, v3.x1, v1.x2, v2.x2, v3.x2, v1.x3, v2.x3, v3.x3);
    const JetVec4 w0 = {-cof1, cof2, cof3, cof4};

    const Jet q = inner(w0, w0);
    if (q.value() <= tol * std::max(dot(w0.value(), w0.value()), 1e-300))
        throw DegenerateSpan("orthonormal completion: complement is not spacelike");

    JetVec4 w = w0 / sqrt(q);
    if (det4(a, b, c, w.value()) * orientation_det < 0) w = -w;
    return w;
}

double relative_gram3(const Vec4& d1, const Vec4& d2, const Vec4& d3) {
    const double norms = euclidean_norm(d1) * euclidean_norm(d2) * euclidean_norm(d3);
    return std::abs(gram3_det(d1, d2, d3)) / std::max(norms * norms, 1e-300);
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    g.back() = b;
    return g;
}

}  // namespace

std::vector<double> CurveSpec::grid() const {
    if (sample_count < 2) throw InvalidArgument("CurveSpec: sample_count must be >= 2");
    if (!(t_min < t_max)) throw InvalidArgument("CurveSpec: t_min must be < t_max");
    std::vector<double> g(static_cast<std::size_t>(sample_count));
    const double span = t_max - t_min;
    for (int i = 0; i < sample_count; ++i)
        g[static_cast<std::size_t>(i)] = t_min + span * i / (sample_count - 1);
    g.back() = t_max;
    return g;
}

Vec4 CurveSpec::position(double t) const {
    const double v[] = {t};
    return {eval_scalar(components[0], v), eval_scalar(components[1], v),
            eval_scalar(components[2], v), eval_scalar(components[3], v)};
}

CurveSpec make_curve(const std::array<std::string, 4>& expressions, double t_min,
                     double t_max, int sample_count) {
    static const std::vector<std::string> kVar = {"t"};
    CurveSpec c;
    for (int i = 0; i < 4; ++i) c.components[static_cast<std::size_t>(i)] = parse_expr(expressions[static_cast<std::size_t>(i)], kVar);
    c.t_min = t_min;
    c.t_max = t_max;
    c.sample_count = sample_count;
    return c;
}

double gram_deviation(const CartanFrameSample& f) {
    double dev = 0.0;
    auto track = [&dev](double actual, double expected) {
        dev = std::max(dev, std::abs(actual - expected));
    };
    track(inner(f.xi, f.xi), 0.0);
    track(inner(f.N, f.N), 0.0);
    track(inner(f.xi, f.N), 1.0);
    track(inner(f.W1, f.W1), 1.0);
    track(inner(f.W2, f.W2), 1.0);
    track(inner(f.xi, f.W1), 0.0);
    track(inner(f.xi, f.W2), 0.0);
    track(inner(f.N, f.W1), 0.0);
    track(inner(f.N, f.W2), 0.0);
    track(inner(f.W1, f.W2), 0.0);
    return dev;
}

JetVec4 operator*(const Jet& s, const JetVec4& v) {
    return {s * v.x1, s * v.x2, s * v.x3, s * v.x4};
}

JetVec4 operator/(const JetVec4& v, const Jet& s) {
    return {v.x1 / s, v.x2 / s, v.x3 / s, v.x4 / s};
}

Jet inner(const JetVec4& a, const JetVec4& b) {
    return -(a.x1 * b.x1) + a.x2 * b.x2 + a.x3 * b.x3 + a.x4 * b.x4;
}

JetVec4 derivative_jet(const JetVec4& v) {
    return {v.x1.derivative_jet(), v.x2.derivative_jet(), v.x3.derivative_jet(),
            v.x4.derivative_jet()};
}

CurveCheck verify_curve(const CurveSpec& curve, double tol) {
    CurveCheck res;
    res.min_cartan_gram = std::numeric_limits<double>::infinity();
    for (double t : curve.grid()) {
        const JetVec4 pos = curve_jets(curve, t, 3);
        const Vec4 d1 = pos.derivative(1);
        const Vec4 d2 = pos.derivative(2);
        const Vec4 d3 = pos.derivative(3);
        res.max_null_deviation = std::max(res.max_null_deviation, std::abs(inner(d1, d1)));
        res.max_pseudo_arc_deviation =
            std::max(res.max_pseudo_arc_deviation, std::abs(inner(d2, d2) - 1.0));
        res.min_cartan_gram = std::min(res.min_cartan_gram, relative_gram3(d1, d2, d3));
    }
    res.is_null = res.max_null_deviation <= tol;
    res.is_pseudo_arc = res.max_pseudo_arc_deviation <= tol;
    res.is_cartan = res.min_cartan_gram > kCartanRelThreshold;
    return res;
}

// Frame construction.
//
// With pseudo-arc parameter, W1 = a''. Writing the third Frenet equation as
// N = -a''' - sigma1*xi and expanding g(N, N) = 0 with g(a''', xi) = -1
// (two derivatives of g(xi, xi) = 0 plus one of g(a'', a'') = 1) gives
// sigma1 = g(a''', a''')/2. The remaining screen direction comes from
// u = N' - sigma1*W1, which the second Frenet equation makes sigma2*W2;
// u is automatically orthogonal to xi, N and W1, so sigma2 = |u|. When u
// vanishes identically the screen is completed orthonormally with
// orientation -1.
FrameJets frame_jets_at(const CurveSpec& curve, double t, double tol) {
    FrameJets fj;
    fj.t = t;
    fj.position = curve_jets(curve, t, kFrameJetOrder);
    fj.xi = derivative_jet(fj.position);
    fj.W1 = derivative_jet(fj.xi);
    const JetVec4 d3 = derivative_jet(fj.W1);

    const double null_dev = std::abs(inner(fj.xi, fj.xi).value());
    if (null_dev > tol)
        throw NotNull("curve is not null at t = " + std::to_string(t) +
                      " (|g(a',a')| = " + std::to_string(null_dev) + ")");
    const double pa_dev = std::abs(inner(fj.W1, fj.W1).value() - 1.0);
    if (pa_dev > tol)
        throw NotPseudoArc("curve is not pseudo-arc parametrized at t = " + std::to_string(t) +
                           " (|g(a'',a'') - 1| = " + std::to_string(pa_dev) + ")");

    fj.sigma1 = 0.5 * inner(d3, d3);
    fj.N = -d3 - fj.sigma1 * fj.xi;

    const JetVec4 Nd = derivative_jet(fj.N);
    const JetVec4 u = Nd - fj.sigma1 * fj.W1;
    const Jet g_uu = inner(u, u);
    if (g_uu.value() < -tol * tol)
        throw DomainError("screen curvature vector is not spacelike at t = " + std::to_string(t));
    if (g_uu.value() > tol * tol) {
        fj.sigma2 = sqrt(g_uu);
        fj.W2 = u / fj.sigma2;
    } else {
        fj.sigma2 = Jet::constant(0.0, g_uu.order());
        fj.W2 = complete_orthonormal_jets(fj.xi, fj.N, fj.W1, -1, tol);
        fj.sigma2_degenerate = true;
    }
    return fj;
}

namespace {

CartanFrameSample sample_from_jets(const FrameJets& fj) {
    CartanFrameSample s;
    s.t = fj.t;
    s.xi = fj.xi.value();
    s.N = fj.N.value();
    s.W1 = fj.W1.value();
    s.W2 = fj.W2.value();
    s.sigma1 = fj.sigma1.value();
    s.sigma1_d = fj.sigma1.derivative(1);
    s.sigma1_dd = fj.sigma1.derivative(2);
    s.sigma2 = fj.sigma2.value();
    s.sigma2_d = fj.sigma2.order() >= 1 ? fj.sigma2.derivative(1) : 0.0;
    s.sigma2_degenerate = fj.sigma2_degenerate;
    return s;
}

}  // namespace

CartanFrameSample cartan_frame_at(const CurveSpec& curve, double t, double tol) {
    return sample_from_jets(frame_jets_at(curve, t, tol));
}

double FramePath::grid_step() const {
    if (samples.size() < 2) throw InvalidArgument("FramePath: need at least two samples");
    return samples[1].t - samples[0].t;
}

double FramePath::max_gram_deviation() const {
    double dev = 0.0;
    for (const auto& s : samples) dev = std::max(dev, gram_deviation(s));
    return dev;
}

FramePath frame_path(const CurveSpec& curve, double tol) {
    FramePath path;
    for (double t : curve.grid()) {
        const FrameJets fj = frame_jets_at(curve, t, tol);
        path.samples.push_back(sample_from_jets(fj));
        path.positions.push_back(fj.position.value());
    }
    return path;
}

double FrenetResiduals::max() const {
    return std::max(std::max(xi_eq, N_eq), std::max(W1_eq, W2_eq));
}

FrenetResiduals frenet_residuals(const CurveSpec& curve, double t, double tol) {
    const FrameJets fj = frame_jets_at(curve, t, tol);
    FrenetResiduals r;
    r.xi_eq = euclidean_norm((derivative_jet(fj.xi) - fj.W1).value());
    r.N_eq = euclidean_norm(
        (derivative_jet(fj.N) - fj.sigma1 * fj.W1 - fj.sigma2 * fj.W2).value());
    r.W1_eq = euclidean_norm((derivative_jet(fj.W1) + fj.sigma1 * fj.xi + fj.N).value());
    r.W2_eq = euclidean_norm((derivative_jet(fj.W2) + fj.sigma2 * fj.xi).value());
    return r;
}

// ---------------------------------------------------------------------------
// Monotone cubic interpolation
// ---------------------------------------------------------------------------

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw InvalidArgument("MonotoneCubic: need matching node lists with >= 2 points");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(x_[i] < x_[i + 1]))
            throw InvalidArgument("MonotoneCubic: nodes must be strictly increasing");

    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);

    m_.assign(n, 0.0);
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) m_[i] = 0.5 * (d[i - 1] + d[i]);

    // Fritsch-Carlson monotonicity limiter.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            m_[i] = 0.0;
            m_[i + 1] = 0.0;
            continue;
        }
        const double alpha = m_[i] / d[i];
        const double beta = m_[i + 1] / d[i];
        const double s = alpha * alpha + beta * beta;
        if (s > 9.0) {
            const double tau = 3.0 / std::sqrt(s);
            m_[i] = tau * alpha * d[i];
            m_[i + 1] = tau * beta * d[i];
        }
    }
}

std::size_t MonotoneCubic::segment(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t idx = static_cast<std::size_t>(it - x_.begin());
    if (idx == 0) return 0;
    return std::min(idx - 1, x_.size() - 2);
}

double MonotoneCubic::operator()(double x) const {
    x = std::clamp(x, x_.front(), x_.back());
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double u = (x - x_[i]) / h;
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * y_[i] + (u3 - 2 * u2 + u) * h * m_[i] +
           (-2 * u3 + 3 * u2) * y_[i + 1] + (u3 - u2) * h * m_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
    x = std::clamp(x, x_.front(), x_.back());
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double u = (x - x_[i]) / h;
    const double u2 = u * u;
    return (6 * u2 - 6 * u) * (y_[i] - y_[i + 1]) / h + (3 * u2 - 4 * u + 1) * m_[i] +
           (3 * u2 - 2 * u) * m_[i + 1];
}

// ---------------------------------------------------------------------------
// Pseudo-arc reparametrization
// ---------------------------------------------------------------------------

// The null chain rule gives g(beta'', beta'') = (dt/ds)^4 g(a'', a'') for a
// reparametrized null curve beta(s) = a(t(s)), so the normalizing map is
// s(t) = integral of g(a'', a'')^(1/4).
PseudoArcMap reparametrize_pseudo_arc(const CurveSpec& curve, double tol) {
    const std::vector<double> grid = curve.grid();

    auto integrand = [&](double t) {
        const JetVec4 pos = curve_jets(curve, t, 2);
        const Vec4 d1 = pos.derivative(1);
        const Vec4 d2 = pos.derivative(2);
        const double null_dev = std::abs(inner(d1, d1));
        if (null_dev > tol)
            throw NotNull("reparametrize_pseudo_arc: curve is not null at t = " +
                          std::to_string(t));
        const double q = inner(d2, d2);
        if (q <= tol)
            throw DegeneratePseudoArc(
                "reparametrize_pseudo_arc: g(a'',a'') vanishes at t = " + std::to_string(t));
        return std::pow(q, 0.25);
    };

    PseudoArcMap map;
    map.t_nodes = grid;
    map.s_nodes.resize(grid.size());
    map.s_nodes[0] = 0.0;
    constexpr int kSimpsonHalves = 8;  // per grid segment
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = grid[i];
        const double b = grid[i + 1];
        const double h = (b - a) / (2 * kSimpsonHalves);
        double acc = integrand(a) + integrand(b);
        for (int k = 1; k < 2 * kSimpsonHalves; ++k)
            acc += integrand(a + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
        map.s_nodes[i + 1] = map.s_nodes[i] + acc * h / 3.0;
    }
    map.forward = MonotoneCubic(map.t_nodes, map.s_nodes);
    map.inverse = MonotoneCubic(map.s_nodes, map.t_nodes);
    return map;
}

// ---------------------------------------------------------------------------
// Frenet integration
// ---------------------------------------------------------------------------

namespace {

struct FrenetState {
    Vec4 xi, N, W1, W2, pos;

    FrenetState operator+(const FrenetState& o) const {
        return {xi + o.xi, N + o.N, W1 + o.W1, W2 + o.W2, pos + o.pos};
    }
    FrenetState operator*(double s) const {
        return {xi * s, N * s, W1 * s, W2 * s, pos * s};
    }
};

FrenetState frenet_rhs(const FrenetState& y, double s1, double s2) {
    FrenetState d;
    d.xi = y.W1;
    d.N = y.W1 * s1 + y.W2 * s2;
    d.W1 = -(y.xi * s1) - y.N;
    d.W2 = -(y.xi * s2);
    d.pos = y.xi;
    return d;
}

}  // namespace

FramePath integrate_frenet(const ExprAst& sigma1, const ExprAst& sigma2,
                           const FrenetInit& init, double t_min, double t_max,
                           int sample_count) {
    if (sample_count < 2) throw InvalidArgument("integrate_frenet: sample_count must be >= 2");
    if (!(t_min < t_max)) throw InvalidArgument("integrate_frenet: t_min must be < t_max");
    const double init_dev = gram_deviation(init.frame);
    if (init_dev > 1e-10)
        throw BadInitialFrame("integrate_frenet: initial frame violates the metric conditions (deviation " +
                              std::to_string(init_dev) + ")");

    auto sigma = [](const ExprAst& ast, double t) {
        const double v[] = {t};
        return eval_scalar(ast, v);
    };

    const double span = t_max - t_min;
    const double h_base = span / std::max(sample_count * 10, 1000);

    FramePath path;
    FrenetState y{init.frame.xi, init.frame.N, init.frame.W1, init.frame.W2, init.position};

    auto record = [&](double t) {
        CartanFrameSample s;
        s.t = t;
        s.xi = y.xi;
        s.N = y.N;
        s.W1 = y.W1;
        s.W2 = y.W2;
        const Jet j1 = eval_jet(sigma1, t, 2);
        const Jet j2 = eval_jet(sigma2, t, 2);
        s.sigma1 = j1.value();
        s.sigma1_d = j1.derivative(1);
        s.sigma1_dd = j1.derivative(2);
        s.sigma2 = j2.value();
        s.sigma2_d = j2.derivative(1);
        path.samples.push_back(s);
        path.positions.push_back(y.pos);
    };

    const std::vector<double> grid = linspace(t_min, t_max, sample_count);
    record(grid[0]);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double seg = grid[i + 1] - grid[i];
        const int steps = std::max(1, static_cast<int>(std::ceil(seg / h_base - 1e-12)));
        const double h = seg / steps;
        double t = grid[i];
        for (int k = 0; k < steps; ++k) {
            const FrenetState k1 = frenet_rhs(y, sigma(sigma1, t), sigma(sigma2, t));
            const FrenetState k2 = frenet_rhs(y + k1 * (h / 2), sigma(sigma1, t + h / 2),
                                              sigma(sigma2, t + h / 2));
            const FrenetState k3 = frenet_rhs(y + k2 * (h / 2), sigma(sigma1, t + h / 2),
                                              sigma(sigma2, t + h / 2));
            const FrenetState k4 =
                frenet_rhs(y + k3 * h, sigma(sigma1, t + h), sigma(sigma2, t + h));
            y = y + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
            t = grid[i] + (k + 1) * h;
        }
        record(grid[i + 1]);
    }
    return path;
}

}  // namespace nullframe
