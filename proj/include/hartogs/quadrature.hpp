#pragma once

#include <functional>
#include <limits>

#include "hartogs/errors.hpp"

namespace hartogs::quad {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long long evaluations = 0;
};

/// How the convergence tolerance is applied to the running value.
enum class Scale {
    Mixed,      // estimate <= tol * max(1, |value|)
    Relative,   // estimate <= tol * |value|
    Absolute,   // estimate <= tol
};

struct IntegrationOptions {
    double tol = 1.0e-10;
    Scale scale = Scale::Mixed;
    int max_panels = 1 << 20;
    int initial_panels = 1;
    long long max_evaluations = std::numeric_limits<long long>::max();
};

/// Adaptive Gauss-Kronrod (7,15) bisection on [a, b]; b may be +infinity, in
/// which case t = a + u/(1-u) maps the tail onto [0, 1). Nodes are interior to
/// each panel, so integrable endpoint singularities need no special casing.
///
/// Throws NumericalFailure (carrying the partial result) when the panel limit
/// is reached with the estimate still above tolerance, and EvaluationError if
/// the integrand returns NaN.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const IntegrationOptions& opts = {});

} // namespace hartogs::quad
