#pragma once

#include <vector>

#include "nullframe/errors.hpp"

namespace nullframe {

// Truncated Taylor expansion of a scalar function of one variable about a
// base point: coefficients c_0..c_K with k-th derivative = k! * c_k.
// Arithmetic propagates full series, so derivatives up to the truncation
// order are exact to rounding (no finite differences anywhere).
class Jet {
public:
    Jet() = default;

    static Jet constant(double value, int order);
    // The expansion of t itself: (t0, 1, 0, ...).
    static Jet variable(double t0, int order);

    int order() const { return static_cast<int>(c_.size()) - 1; }
    double base_point() const { return t0_; }
    double value() const { return c_.empty() ? 0.0 : c_[0]; }
    // Taylor coefficient, zero beyond the truncation order.
    double coeff(int k) const;
    // k-th derivative at the base point, k! * c_k; requires k <= order().
    double derivative(int k) const;

    const std::vector<double>& coefficients() const { return c_; }

    // d/dt as a formal series; drops the order by one.
    Jet derivative_jet() const;

    Jet operator-() const;
    friend Jet operator+(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a, const Jet& b);
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);

    friend Jet operator+(const Jet& a, double s);
    friend Jet operator+(double s, const Jet& b);
    friend Jet operator-(const Jet& a, double s);
    friend Jet operator-(double s, const Jet& b);
    friend Jet operator*(const Jet& a, double s);
    friend Jet operator*(double s, const Jet& b);
    friend Jet operator/(const Jet& a, double s);
    friend Jet operator/(double s, const Jet& b);

    friend Jet sin(const Jet& x);
    friend Jet cos(const Jet& x);
    friend Jet sinh(const Jet& x);
    friend Jet cosh(const Jet& x);
    friend Jet exp(const Jet& x);
    friend Jet sqrt(const Jet& x);
    friend Jet pow(const Jet& x, double exponent);

private:
    Jet(double t0, std::vector<double> c) : t0_(t0), c_(std::move(c)) {}

    double t0_ = 0.0;
    std::vector<double> c_;

    friend struct JetOps;
};

}  // namespace nullframe
