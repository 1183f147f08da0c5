#pragma once

// Independent closed forms used as test oracles. Everything here is exact
// integer arithmetic (or a plain special-function identity) computed without
// touching the code under test.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracles {

// c_k for F = 1 - x and weight m >= 2: k! (m-2)! / (m+k-1)!. Evaluated as
// (m-2)! / ((k+1)(k+2)...(k+m-1)) so every intermediate fits in 64 bits for
// the tested ranges.
inline double hyperbolic_moment(int k, int m) {
    if (m < 2) throw std::invalid_argument("hyperbolic moment needs m >= 2");
    unsigned long long numerator = 1;
    for (int i = 2; i <= m - 2; ++i) numerator *= static_cast<unsigned long long>(i);
    long double denominator = 1.0L;
    for (int i = 1; i <= m - 1; ++i) denominator *= static_cast<long double>(k + i);
    return static_cast<double>(static_cast<long double>(numerator) / denominator);
}

// c_k for F = exp(-x): k! / m^(k+1).
inline double springer_moment(int k, int m) {
    long double value = 1.0L / m;
    for (int i = 1; i <= k; ++i) value *= static_cast<long double>(i) / m;
    return static_cast<double>(value);
}

inline double log_gamma(double x) { return std::lgamma(x); }

// Squared norm of z^j in the weight-m space of the unit ball (direct formula):
// pi^n j0! ... j_{n-1}! (m-n-1)! / (m + |j| - 1)!.
inline double hyperbolic_norm_direct(const std::vector<int>& j, int m) {
    const int n = static_cast<int>(j.size());
    int total = 0;
    double log_num = 0.0;
    for (int v : j) {
        total += v;
        log_num += log_gamma(v + 1.0);
    }
    log_num += log_gamma(static_cast<double>(m - n));
    const double log_den = log_gamma(static_cast<double>(m + total));
    return std::exp(n * std::log(std::numbers::pi) + log_num - log_den);
}

// (m-1)(m-2)...(m-n) / pi^n.
inline double hyperbolic_epsilon_constant(int m, int n) {
    double product = 1.0;
    for (int i = 1; i <= n; ++i) product *= m - i;
    return product / std::pow(std::numbers::pi, n);
}

} // namespace oracles
