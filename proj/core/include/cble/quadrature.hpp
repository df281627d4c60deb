#pragma once

#include <functional>

namespace cble::quad {

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_level = 10;        // level L uses step 2^-L in the transformed variable
    bool throw_on_failure = true;
};

struct Result {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

/// Adaptive double-exponential (tanh-sinh) quadrature on a finite interval.
/// Integrable endpoint singularities (e.g. z^{-a}, a < 1) are handled without
/// special casing; interior kinks are not, split at them instead.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = {});

/// Integral over (c, inf), c > 0, via the substitution z = c/u, u in (0,1).
/// The integrand must decay fast enough that f(z) z^2 -> 0.
Result integrate_tail(const std::function<double(double)>& f, double c,
                      const Options& opts = {});

}  // namespace cble::quad
