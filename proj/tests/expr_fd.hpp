#pragma once

// Shared derivative property: random guarded expressions whose jet
// derivatives are compared against central finite differences (the
// independent oracle). Draws are rejected when the oracle cannot resolve the
// claim (step-doubling disagreement) or when magnitudes leave the window
// where double-precision differencing is meaningful.

#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "hartogs/expr.hpp"

namespace expr_fd {

inline std::string random_expression(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
    std::uniform_real_distribution<double> coef(0.1, 2.0);
    switch (pick(rng)) {
        case 0: return std::to_string(coef(rng));
        case 1: return "x";
        case 2: return "(" + random_expression(rng, depth - 1) + " + " +
                       random_expression(rng, depth - 1) + ")";
        case 3: return "(" + random_expression(rng, depth - 1) + " - " +
                       random_expression(rng, depth - 1) + ")";
        case 4: return "(" + random_expression(rng, depth - 1) + " * " +
                       random_expression(rng, depth - 1) + ")";
        case 5: return "exp(-(" + random_expression(rng, depth - 1) + ")^2)";
        case 6: return "log(1.5 + (" + random_expression(rng, depth - 1) + ")^2)";
        default: return "sqrt(1 + (" + random_expression(rng, depth - 1) + ")^2)";
    }
}

struct FdResult {
    double d1 = 0.0, d2 = 0.0;
    double uncertainty1 = 0.0, uncertainty2 = 0.0;
};

inline FdResult central_differences(const hartogs::expr::ProfileExpression& e, double x) {
    auto value = [&](double t) { return hartogs::expr::eval(e, t); };
    auto at_step = [&](double h) {
        const double fp = value(x + h), fm = value(x - h), f0 = value(x);
        return std::pair<double, double>{(fp - fm) / (2 * h), (fp - 2 * f0 + fm) / (h * h)};
    };
    const double h1 = 2.0e-6 * std::max(1.0, std::abs(x));
    const double h2 = 1.0e-4 * std::max(1.0, std::abs(x));
    const auto [d1a, d2_skip1] = at_step(h1);
    const auto [d1b, d2_skip2] = at_step(h1 * 2);
    const auto [d1_skip1, d2c] = at_step(h2);
    const auto [d1_skip2, d2d] = at_step(h2 * 2);
    (void)d2_skip1;
    (void)d2_skip2;
    (void)d1_skip1;
    (void)d1_skip2;
    FdResult r;
    r.d1 = (4 * d1a - d1b) / 3;
    r.uncertainty1 = std::abs(d1a - d1b);
    r.d2 = (4 * d2c - d2d) / 3;
    r.uncertainty2 = std::abs(d2c - d2d);
    return r;
}

struct PropertyOutcome {
    int accepted = 0;
    int mismatches = 0;
    double worst_defect = 0.0; // max |jet - fd| / tolerance over accepted cases
};

/// Runs the property over `wanted` accepted cases; tolerance is
/// 1e-6 * max(1, |derivative|) per order.
inline PropertyOutcome run_property(int wanted, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> xs(0.15, 0.85);

    PropertyOutcome outcome;
    int attempts = 0;
    while (outcome.accepted < wanted && attempts < 60 * wanted) {
        ++attempts;
        const std::string text = random_expression(rng, 5);
        const double x = xs(rng);
        hartogs::expr::ProfileExpression e;
        hartogs::Jet2 jet;
        try {
            e = hartogs::expr::parse(text);
            jet = hartogs::expr::eval_jet2(e, x);
        } catch (const hartogs::Error&) {
            continue;
        }
        if (std::abs(jet.v) > 30 || std::abs(jet.d1) > 30 || std::abs(jet.d2) > 30) continue;

        FdResult fd;
        try {
            fd = central_differences(e, x);
        } catch (const hartogs::Error&) {
            continue;
        }
        const double tol1 = 1e-6 * std::max(1.0, std::abs(jet.d1));
        const double tol2 = 1e-6 * std::max(1.0, std::abs(jet.d2));
        if (fd.uncertainty1 > 0.2 * tol1 || fd.uncertainty2 > 0.2 * tol2) continue;

        ++outcome.accepted;
        const double defect =
            std::max(std::abs(jet.d1 - fd.d1) / tol1, std::abs(jet.d2 - fd.d2) / tol2);
        outcome.worst_defect = std::max(outcome.worst_defect, defect);
        if (defect > 1.0) ++outcome.mismatches;
    }
    return outcome;
}

} // namespace expr_fd
