#pragma once

#include <array>
#include <cmath>

#include "hartogs/errors.hpp"

namespace hartogs {

/// ln Gamma(n) for integer n >= 1, from a table built once at startup.
/// Avoids std::lgamma in hot loops (and its signgam side channel).
double log_gamma_int(long long n);

/// ln(n!) for n >= 0.
inline double log_factorial(long long n) { return log_gamma_int(n + 1); }

} // namespace hartogs
