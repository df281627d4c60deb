#pragma once

#include "cble/model.hpp"
#include "cble/test_function.hpp"

namespace cble {

/// Beta function B(p, q) = Gamma(p)Gamma(q)/Gamma(p+q), p, q > 0.
double beta_fn(double p, double q);

/// c_{alpha,delta} = alpha^{-1} B(alpha+delta, 1-alpha) for alpha in (0,1),
/// delta >= 0. At delta = 0 the sine reflection form pi/(alpha sin(alpha pi))
/// is used; the two agree to relative 1e-12 (asserted in the test suite).
double c_coeff(double alpha, double delta);

/// int_0^inf [(y+z)^{-delta} - y^{-delta}] z^{-1-alpha} dz by adaptive
/// quadrature; equals -delta c_{alpha,delta} y^{-alpha-delta}.
double lemma31_power_lhs(double y, double delta, double alpha);

/// int_0^inf [ln(y+z) - ln y] z^{-1-alpha} dz by adaptive quadrature;
/// equals c_{alpha,0} y^{-alpha}.
double lemma31_log_lhs(double y, double alpha);

/// Generator of the process at y > 0 applied to g:
///   Lg(y) = [beta y + b1 y - b0(y)] g'(y) + (sigma^2 y^2/2 + b2^2 y) g''(y)
///         + y int_0^1 [g(y+z)-g(y)-g'(y)z] mu(dz)
///         + y int_1^inf [g(y+z)-g(y)] mu(dz)
///         + int_{[-1,1]} [g(y e^z)-g(y)-y(e^z-1)g'(y)] nu(dz)
///         + int_{[-1,1]^c} [g(y e^z)-g(y)] nu(dz).
/// Throws TailDivergenceError when g grows too fast against a tail.
double generator_apply(const ModelSpec& m, const TestFunction& g, double y);

/// Same as generator_apply with the raw environment integral restricted to
/// (-inf,-1) union (1, k], k >= 2 (large positive environment jumps dropped).
double generator_truncated(const ModelSpec& m, const TestFunction& g, double y,
                           double k);

}  // namespace cble
