#pragma once

#include <array>
#include <string>

namespace cble {

enum class TestFunctionFamily {
    ExpInversePower,  // g(y) = exp(-y^{-delta}), bounded by 1, strictly increasing
    LogLog,           // g(y) = ln ln(n^2 y) for y >= 1/(n e), 0 below 1/(2 n e)
    Linear,           // g(y) = y
    Constant,         // g(y) = c
    ShiftedInverse,   // g(y) = 1 - (1+y)^{-1}, bounded by 1, strictly increasing
};

/// Evaluator triple (g, g', g'') on (0, inf) with boundedness metadata.
/// Construct through make_test_function (lyapunov.hpp), which checks the
/// family-specific parameter ranges.
class TestFunction {
public:
    TestFunction() = default;

    double operator()(double y) const;
    double d1(double y) const;
    double d2(double y) const;

    TestFunctionFamily family() const noexcept { return family_; }
    bool bounded() const noexcept { return bounded_; }
    bool strictly_increasing() const noexcept { return increasing_; }
    /// sup_y g(y); only meaningful when bounded().
    double sup_value() const noexcept { return sup_; }

    double delta() const noexcept { return delta_; }
    int n() const noexcept { return n_; }

    std::string describe() const;

    static TestFunction exp_inverse_power(double delta);
    static TestFunction log_log(int n);
    static TestFunction linear();
    static TestFunction constant(double level);
    static TestFunction shifted_inverse();

private:
    TestFunctionFamily family_ = TestFunctionFamily::Constant;
    double delta_ = 0.0;   // ExpInversePower exponent, or the Constant level
    int n_ = 0;            // LogLog index
    bool bounded_ = true;
    bool increasing_ = false;
    double sup_ = 0.0;

    // LogLog transition on [knee_lo_, knee_hi_]: g' is the quintic
    // w(s) = s^3 (d3 + d4 s + d5 s^2), s = (y - knee_lo_)/(knee_hi_ - knee_lo_),
    // which is non-negative and matches value/slope/curvature of ln ln(n^2 y)
    // at the right knot while vanishing to second order at the left knot.
    double knee_lo_ = 0.0, knee_hi_ = 0.0;
    std::array<double, 3> w_coef_{};  // d3, d4, d5
};

}  // namespace cble
