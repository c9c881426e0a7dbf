#include "nullframe/jet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace nullframe {

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

// Constructors shared by the friend operators.
struct JetOps {
    static Jet make(double t0, std::vector<double> c) { return Jet(t0, std::move(c)); }

    static int common_order(const Jet& a, const Jet& b) {
        return std::min(a.order(), b.order());
    }

    static double pick_base(const Jet& a, const Jet& b) {
        // Intermediates built from constants have no meaningful base point;
        // keep whichever operand carries one.
        return a.t0_ != 0.0 ? a.t0_ : b.t0_;
    }
};

Jet Jet::constant(double value, int order) {
    if (order < 0) throw InvalidArgument("Jet::constant: order must be >= 0");
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    c[0] = value;
    return Jet(0.0, std::move(c));
}

Jet Jet::variable(double t0, int order) {
    if (order < 1) throw InvalidArgument("Jet::variable: order must be >= 1");
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    c[0] = t0;
    c[1] = 1.0;
    return Jet(t0, std::move(c));
}

double Jet::coeff(int k) const {
    if (k < 0) throw InvalidArgument("Jet::coeff: negative index");
    if (k > order()) return 0.0;
    return c_[static_cast<std::size_t>(k)];
}

double Jet::derivative(int k) const {
    if (k < 0 || k > order())
        throw InvalidArgument("Jet::derivative: order " + std::to_string(k) +
                              " exceeds truncation order " + std::to_string(order()));
    return factorial(k) * c_[static_cast<std::size_t>(k)];
}

Jet Jet::derivative_jet() const {
    if (order() < 1)
        throw InvalidArgument("Jet::derivative_jet: order 0 jet has no derivative series");
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 0; k + 1 < c_.size(); ++k)
        d[k] = static_cast<double>(k + 1) * c_[k + 1];
    return Jet(t0_, std::move(d));
}

Jet Jet::operator-() const {
    std::vector<double> r(c_.size());
    for (std::size_t k = 0; k < c_.size(); ++k) r[k] = -c_[k];
    return Jet(t0_, std::move(r));
}

Jet operator+(const Jet& a, const Jet& b) {
    const int n = JetOps::common_order(a, b);
    std::vector<double> r(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) r[k] = a.c_[k] + b.c_[k];
    return JetOps::make(JetOps::pick_base(a, b), std::move(r));
}

Jet operator-(const Jet& a, const Jet& b) {
    const int n = JetOps::common_order(a, b);
    std::vector<double> r(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) r[k] = a.c_[k] - b.c_[k];
    return JetOps::make(JetOps::pick_base(a, b), std::move(r));
}

Jet operator*(const Jet& a, const Jet& b) {
    const int n = JetOps::common_order(a, b);
    std::vector<double> r(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        double acc = 0.0;
        for (int j = 0; j <= k; ++j) acc += a.c_[j] * b.c_[k - j];
        r[k] = acc;
    }
    return JetOps::make(JetOps::pick_base(a, b), std::move(r));
}

Jet operator/(const Jet& a, const Jet& b) {
    if (b.value() == 0.0) throw DomainError("division by zero in series arithmetic");
    const int n = JetOps::common_order(a, b);
    std::vector<double> r(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        double acc = a.c_[k];
        for (int j = 0; j < k; ++j) acc -= r[j] * b.c_[k - j];
        r[k] = acc / b.c_[0];
    }
    return JetOps::make(JetOps::pick_base(a, b), std::move(r));
}

Jet operator+(const Jet& a, double s) { return a + Jet::constant(s, a.order()); }
Jet operator+(double s, const Jet& b) { return Jet::constant(s, b.order()) + b; }
Jet operator-(const Jet& a, double s) { return a - Jet::constant(s, a.order()); }
Jet operator-(double s, const Jet& b) { return Jet::constant(s, b.order()) - b; }
Jet operator*(const Jet& a, double s) {
    std::vector<double> r(a.c_);
    for (double& v : r) v *= s;
    return JetOps::make(a.t0_, std::move(r));
}
Jet operator*(double s, const Jet& b) { return b * s; }
Jet operator/(const Jet& a, double s) {
    if (s == 0.0) throw DomainError("division by zero in series arithmetic");
    return a * (1.0 / s);
}
Jet operator/(double s, const Jet& b) { return Jet::constant(s, b.order()) / b; }

// sin and cos propagate as a coupled pair:
//   s_k = (1/k) sum_j j a_j c_{k-j},   c_k = -(1/k) sum_j j a_j s_{k-j}.
static void sin_cos_series(const Jet& x, std::vector<double>& s, std::vector<double>& c,
                           bool hyperbolic) {
    const auto& a = x.coefficients();
    const std::size_t n = a.size();
    s.assign(n, 0.0);
    c.assign(n, 0.0);
    if (hyperbolic) {
        s[0] = std::sinh(a[0]);
        c[0] = std::cosh(a[0]);
    } else {
        s[0] = std::sin(a[0]);
        c[0] = std::cos(a[0]);
    }
    for (std::size_t k = 1; k < n; ++k) {
        double sa = 0.0, ca = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            sa += static_cast<double>(j) * a[j] * c[k - j];
            ca += static_cast<double>(j) * a[j] * s[k - j];
        }
        s[k] = sa / static_cast<double>(k);
        c[k] = (hyperbolic ? ca : -ca) / static_cast<double>(k);
    }
}

Jet sin(const Jet& x) {
    std::vector<double> s, c;
    sin_cos_series(x, s, c, false);
    return JetOps::make(x.base_point(), std::move(s));
}

Jet cos(const Jet& x) {
    std::vector<double> s, c;
    sin_cos_series(x, s, c, false);
    return JetOps::make(x.base_point(), std::move(c));
}

Jet sinh(const Jet& x) {
    std::vector<double> s, c;
    sin_cos_series(x, s, c, true);
    return JetOps::make(x.base_point(), std::move(s));
}

Jet cosh(const Jet& x) {
    std::vector<double> s, c;
    sin_cos_series(x, s, c, true);
    return JetOps::make(x.base_point(), std::move(c));
}

Jet exp(const Jet& x) {
    const auto& a = x.coefficients();
    std::vector<double> r(a.size(), 0.0);
    r[0] = std::exp(a[0]);
    for (std::size_t k = 1; k < a.size(); ++k) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j)
            acc += static_cast<double>(j) * a[j] * r[k - j];
        r[k] = acc / static_cast<double>(k);
    }
    return JetOps::make(x.base_point(), std::move(r));
}

Jet sqrt(const Jet& x) {
    const auto& a = x.coefficients();
    if (a[0] < 0.0) throw DomainError("sqrt of a negative value in series arithmetic");
    if (a[0] == 0.0) throw DomainError("sqrt is not differentiable at zero");
    std::vector<double> r(a.size(), 0.0);
    r[0] = std::sqrt(a[0]);
    for (std::size_t k = 1; k < a.size(); ++k) {
        double acc = a[k];
        for (std::size_t j = 1; j < k; ++j) acc -= r[j] * r[k - j];
        r[k] = acc / (2.0 * r[0]);
    }
    return JetOps::make(x.base_point(), std::move(r));
}

// Integer exponents go through repeated multiplication so that the result
// stays valid at a base value of zero (needed for polynomial curves like
// t^3 evaluated at t = 0). The real-exponent recurrence below requires a
// positive base value.
Jet pow(const Jet& x, double exponent) {
    const double rounded = std::nearbyint(exponent);
    const bool is_int = std::abs(exponent - rounded) == 0.0 && std::abs(rounded) <= 64.0;
    if (is_int) {
        long n = static_cast<long>(rounded);
        if (n == 0) return Jet::constant(1.0, x.order());
        const bool negative = n < 0;
        n = std::labs(n);
        Jet acc = Jet::constant(1.0, x.order());
        Jet base = x;
        while (n > 0) {
            if (n & 1) acc = acc * base;
            n >>= 1;
            if (n > 0) base = base * base;
        }
        if (negative) return Jet::constant(1.0, x.order()) / acc;
        return acc;
    }

    const auto& a = x.coefficients();
    if (a[0] <= 0.0)
        throw DomainError("pow with non-integer exponent requires a positive base");
    // From u*y' = p*y*u':  y_k = (1/(k a_0)) sum_{j<k} (p(k-j) - j) a_{k-j} y_j.
    std::vector<double> r(a.size(), 0.0);
    r[0] = std::pow(a[0], exponent);
    for (std::size_t k = 1; k < a.size(); ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            acc += (exponent * static_cast<double>(k - j) - static_cast<double>(j)) *
                   a[k - j] * r[j];
        r[k] = acc / (static_cast<double>(k) * a[0]);
    }
    return JetOps::make(x.base_point(), std::move(r));
}

}  // namespace nullframe
