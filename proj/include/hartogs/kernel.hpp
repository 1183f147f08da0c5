#pragma once

#include <vector>

#include "hartogs/moments.hpp"
#include "hartogs/profile.hpp"

namespace hartogs {

/// Exponent vector (j0, ..., j_{n-1}) of a monomial z0^j0 ... z_{n-1}^j_{n-1}.
struct MultiIndex {
    std::vector<int> j;

    int n() const { return static_cast<int>(j.size()); }
    int tail_sum() const; // j1 + ... + j_{n-1}
    int total() const;    // j0 + ... + j_{n-1}
};

/// ln of the squared norm of z^j in the weight-m Bergman space:
///   pi^n j1!...j_{n-1}! (m-n-1)! / (m + jt - 2)! * c_{j0}(F^{m+jt}),
/// with jt the tail sum. Throws TrivialSpaceError for m <= n.
double monomial_norm_log(const MomentCache& cache, const MultiIndex& j, int m);

double monomial_norm(const MomentCache& cache, const MultiIndex& j, int m);

enum class KernelMethod { Series, ClosedForm };

struct KernelEvaluation {
    double value = 0.0;
    double truncation_bound = 0.0;  // geometric tail estimate of the dropped shells
    double quadrature_bound = 0.0;  // propagated moment error
    int shells = 0;
    KernelMethod method = KernelMethod::Series;

    double error_budget() const { return truncation_bound + quadrature_bound; }
};

struct SeriesOptions {
    double tol = 1.0e-9;       // stop once a shell is below tol * partial sum
    int degree_cap = 1600;     // hard limit on the total degree
    double w_reject = 0.98;    // points this close to the w-boundary are refused
    double ratio_cap = 0.999;  // a usable geometric tail needs shell ratio below this
};

/// Diagonal reproducing kernel K(z, z) summed over monomials by total degree.
/// The tail-coordinate sum inside a shell collapses through the multinomial
/// theorem, so each (degree, tail-degree) term costs one moment lookup.
KernelEvaluation kernel_series(const MomentCache& cache, const DomainPoint& p, int m,
                               const SeriesOptions& opts = {});

/// Closed form (m-2)...(m-n) [m - 1 + (1-w) gamma] / (pi^n (F(x)-s)^m);
/// the leading product is empty (= 1) for n = 1. Valid when the profile
/// satisfies the moment-series identity with this gamma (caller-asserted).
double kernel_closed(const Profile& profile, const DomainPoint& p, int m, double gamma);

/// Scaled defect of the moment-series identity
///   sum_k t^k / c_k(F^m) = (m - 1 + gamma) F(t)^-m
/// truncated at k_max, including a geometric bound for the dropped tail.
double englis_residual(const MomentCache& cache, int m, double t, double gamma, int k_max);

struct GammaProbe {
    int m;
    double t;
    double gamma_probe;
};

struct GammaEstimate {
    double gamma_hat = 0.0;
    double residual = 0.0; // max scaled identity defect over the probes at gamma_hat
    std::vector<GammaProbe> probes;
};

/// The identity is affine in gamma, so the estimate is the mean over probes of
///   F(t)^m sum_k t^k / c_k(F^m) - (m - 1).
/// Failing probes (divergent moments, t at or beyond the series radius) are
/// dropped; all probes failing is an error.
GammaEstimate estimate_gamma(const MomentCache& cache, const std::vector<int>& m_set,
                             const std::vector<double>& t_grid, int k_max = 64);

/// Default probe grids: m in {2,3,4}; t scaled into the domain
/// ({0.1, 0.3, 0.5} * x0 for bounded domains, {0.25, 0.5, 1.0} otherwise).
GammaEstimate estimate_gamma_default(const MomentCache& cache);

} // namespace hartogs
