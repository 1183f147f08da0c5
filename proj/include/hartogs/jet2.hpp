#pragma once

#include <cmath>

#include "hartogs/errors.hpp"

namespace hartogs {

/// Degree-2 truncated polynomial: value, first and second derivative with
/// respect to a single seed variable. Propagating these through arithmetic
/// gives derivatives exact to rounding, unlike finite differences.
struct Jet2 {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;

    static Jet2 constant(double c) { return {c, 0.0, 0.0}; }
    static Jet2 variable(double x) { return {x, 1.0, 0.0}; }
};

inline Jet2 operator-(const Jet2& a) { return {-a.v, -a.d1, -a.d2}; }

inline Jet2 operator+(const Jet2& a, const Jet2& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
inline Jet2 operator-(const Jet2& a, const Jet2& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
    return {a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) {
    if (b.v == 0.0) throw DomainError("division by zero");
    const double q = a.v / b.v;
    const double q1 = (a.d1 - q * b.d1) / b.v;
    const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
    return {q, q1, q2};
}

inline Jet2 exp(const Jet2& a) {
    const double e = std::exp(a.v);
    return {e, e * a.d1, e * (a.d1 * a.d1 + a.d2)};
}

inline Jet2 log(const Jet2& a) {
    if (a.v <= 0.0) throw DomainError("log of a non-positive value");
    const double r = a.d1 / a.v;
    return {std::log(a.v), r, a.d2 / a.v - r * r};
}

inline Jet2 sqrt(const Jet2& a) {
    if (a.v <= 0.0) throw DomainError("sqrt of a non-positive value");
    const double s = std::sqrt(a.v);
    return {s, a.d1 / (2.0 * s), a.d2 / (2.0 * s) - a.d1 * a.d1 / (4.0 * a.v * s)};
}

/// Real-exponent power; base must be strictly positive.
inline Jet2 pow(const Jet2& a, double e) {
    if (a.v <= 0.0) throw DomainError("real-exponent power requires a positive base");
    const double pm2 = std::pow(a.v, e - 2.0);
    const double pm1 = pm2 * a.v;
    return {pm1 * a.v, e * pm1 * a.d1, e * pm1 * a.d2 + e * (e - 1.0) * pm2 * a.d1 * a.d1};
}

/// Integer power via binary exponentiation on the jet itself, so any base is
/// allowed (negative exponents still reject a zero base).
inline Jet2 powi(const Jet2& a, long long k) {
    if (k < 0) {
        if (a.v == 0.0) throw DomainError("zero base with negative integer exponent");
        return Jet2::constant(1.0) / powi(a, -k);
    }
    Jet2 result = Jet2::constant(1.0);
    Jet2 base = a;
    while (k > 0) {
        if (k & 1) result = result * base;
        base = base * base;
        k >>= 1;
    }
    return result;
}

} // namespace hartogs
