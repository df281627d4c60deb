#include "cble/test_function.hpp"

#include <cmath>
#include <limits>

#include "cble/errors.hpp"

namespace cble {

namespace {

// g = ln ln(n^2 y) branch and its derivatives, valid for n^2 y > 1.
double loglog_g(int n, double y) {
    return std::log(std::log(static_cast<double>(n) * n * y));
}
double loglog_d1(int n, double y) {
    const double l = std::log(static_cast<double>(n) * n * y);
    return 1.0 / (y * l);
}
double loglog_d2(int n, double y) {
    const double l = std::log(static_cast<double>(n) * n * y);
    return -(1.0 / (l * l) + 1.0 / l) / (y * y);
}

}  // namespace

TestFunction TestFunction::exp_inverse_power(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw ValidationError("test_function.delta", "must be > 0");
    TestFunction g;
    g.family_ = TestFunctionFamily::ExpInversePower;
    g.delta_ = delta;
    g.bounded_ = true;
    g.increasing_ = true;
    g.sup_ = 1.0;
    return g;
}

TestFunction TestFunction::log_log(int n) {
    if (n < 9)
        throw ValidationError("test_function.n", "must be an integer >= 9");
    TestFunction g;
    g.family_ = TestFunctionFamily::LogLog;
    g.n_ = n;
    g.bounded_ = false;
    g.increasing_ = false;  // non-decreasing but flat below the knee
    g.sup_ = std::numeric_limits<double>::infinity();

    const double a = 1.0 / (2.0 * n * M_E);
    const double b = 1.0 / (n * M_E);
    const double h = b - a;
    const double v = loglog_g(n, b);
    // The derivative over the transition is w(s) = d3 s^3 + d4 s^4 + d5 s^5
    // in s = (y-a)/h, chosen so that
    //   w(1) = g'(b),  w'(1) = g''(b) h,  int_0^1 w ds = g(b)/h,
    // i.e. value, slope and curvature match the ln ln branch at b while w
    // vanishes to second order at a. Writing g as the integral of w >= 0 is
    // what keeps the extension non-decreasing.
    const double r1 = loglog_d1(n, b);
    const double r2 = loglog_d2(n, b) * h;
    const double r3 = v / h;
    const double d5 = 60.0 * r3 - 24.0 * r1 + 3.0 * r2;
    const double d4 = r2 - 3.0 * r1 - 2.0 * d5;
    const double d3 = r1 - d4 - d5;
    g.knee_lo_ = a;
    g.knee_hi_ = b;
    g.w_coef_ = {d3, d4, d5};

    // Non-negativity of w holds for every n >= 9 we have probed; guard so a
    // bad index fails loudly rather than silently breaking monotonicity.
    const double scale = std::abs(d3) + std::abs(d4) + std::abs(d5);
    for (int i = 0; i <= 64; ++i) {
        const double s = i / 64.0;
        const double w = s * s * s * (d3 + s * (d4 + s * d5));
        if (w < -1e-9 * scale)
            throw NumericalError("log_log transition lost monotonicity at n=" +
                                 std::to_string(n));
    }
    return g;
}

TestFunction TestFunction::linear() {
    TestFunction g;
    g.family_ = TestFunctionFamily::Linear;
    g.bounded_ = false;
    g.increasing_ = true;
    g.sup_ = std::numeric_limits<double>::infinity();
    return g;
}

TestFunction TestFunction::constant(double level) {
    if (!std::isfinite(level) || level < 0.0)
        throw ValidationError("test_function.level", "must be >= 0");
    TestFunction g;
    g.family_ = TestFunctionFamily::Constant;
    g.delta_ = level;
    g.bounded_ = true;
    g.increasing_ = false;
    g.sup_ = level;
    return g;
}

TestFunction TestFunction::shifted_inverse() {
    TestFunction g;
    g.family_ = TestFunctionFamily::ShiftedInverse;
    g.bounded_ = true;
    g.increasing_ = true;
    g.sup_ = 1.0;
    return g;
}

double TestFunction::operator()(double y) const {
    switch (family_) {
        case TestFunctionFamily::ExpInversePower:
            return std::exp(-std::pow(y, -delta_));
        case TestFunctionFamily::LogLog: {
            if (y >= knee_hi_) return loglog_g(n_, y);
            if (y <= knee_lo_) return 0.0;
            const double h = knee_hi_ - knee_lo_;
            const double s = (y - knee_lo_) / h;
            const auto [d3, d4, d5] = w_coef_;
            // int_a^y w = h int_0^s w ds'
            return h * s * s * s * s * (d3 / 4.0 + s * (d4 / 5.0 + s * d5 / 6.0));
        }
        case TestFunctionFamily::Linear:
            return y;
        case TestFunctionFamily::Constant:
            return delta_;
        case TestFunctionFamily::ShiftedInverse:
            return y / (1.0 + y);
    }
    return 0.0;
}

double TestFunction::d1(double y) const {
    switch (family_) {
        case TestFunctionFamily::ExpInversePower: {
            const double p = std::pow(y, -delta_);
            return delta_ * p / y * std::exp(-p);
        }
        case TestFunctionFamily::LogLog: {
            if (y >= knee_hi_) return loglog_d1(n_, y);
            if (y <= knee_lo_) return 0.0;
            const double s = (y - knee_lo_) / (knee_hi_ - knee_lo_);
            const auto [d3, d4, d5] = w_coef_;
            return s * s * s * (d3 + s * (d4 + s * d5));
        }
        case TestFunctionFamily::Linear:
            return 1.0;
        case TestFunctionFamily::Constant:
            return 0.0;
        case TestFunctionFamily::ShiftedInverse: {
            const double w = 1.0 + y;
            return 1.0 / (w * w);
        }
    }
    return 0.0;
}

double TestFunction::d2(double y) const {
    switch (family_) {
        case TestFunctionFamily::ExpInversePower: {
            const double p = std::pow(y, -delta_);
            return (delta_ * delta_ * p * p - delta_ * (1.0 + delta_) * p) /
                   (y * y) * std::exp(-p);
        }
        case TestFunctionFamily::LogLog: {
            if (y >= knee_hi_) return loglog_d2(n_, y);
            if (y <= knee_lo_) return 0.0;
            const double h = knee_hi_ - knee_lo_;
            const double s = (y - knee_lo_) / h;
            const auto [d3, d4, d5] = w_coef_;
            return s * s * (3.0 * d3 + s * (4.0 * d4 + s * 5.0 * d5)) / h;
        }
        case TestFunctionFamily::Linear:
        case TestFunctionFamily::Constant:
            return 0.0;
        case TestFunctionFamily::ShiftedInverse: {
            const double w = 1.0 + y;
            return -2.0 / (w * w * w);
        }
    }
    return 0.0;
}

std::string TestFunction::describe() const {
    switch (family_) {
        case TestFunctionFamily::ExpInversePower:
            return "exp(-y^-" + std::to_string(delta_) + ")";
        case TestFunctionFamily::LogLog:
            return "lnln(" + std::to_string(n_) + "^2 y)";
        case TestFunctionFamily::Linear:
            return "y";
        case TestFunctionFamily::Constant:
            return "const " + std::to_string(delta_);
        case TestFunctionFamily::ShiftedInverse:
            return "y/(1+y)";
    }
    return "?";
}

}  // namespace cble
