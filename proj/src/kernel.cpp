#include "hartogs/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "hartogs/special.hpp"

namespace hartogs {

namespace {

constexpr double kLogPi = 1.1447298858494001741; // ln(pi)
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_nontrivial(int m, int n) {
    if (m <= n) throw TrivialSpaceError(m, n);
}

} // namespace

int MultiIndex::tail_sum() const {
    int s = 0;
    for (std::size_t i = 1; i < j.size(); ++i) s += j[i];
    return s;
}

int MultiIndex::total() const {
    int s = 0;
    for (int v : j) s += v;
    return s;
}

double monomial_norm_log(const MomentCache& cache, const MultiIndex& j, int m) {
    const int n = j.n();
    if (n < 1) throw InputError("multi-index must have at least one entry");
    for (int v : j.j)
        if (v < 0) throw InputError("multi-index entries must be >= 0");
    require_nontrivial(m, n);

    const int jt = j.tail_sum();
    double log_norm = n * kLogPi + log_factorial(m - n - 1) - log_factorial(m + jt - 2);
    for (std::size_t i = 1; i < j.j.size(); ++i) log_norm += log_factorial(j.j[i]);
    log_norm += cache.log_c(m + jt, j.j[0]);
    return log_norm;
}

double monomial_norm(const MomentCache& cache, const MultiIndex& j, int m) {
    return std::exp(monomial_norm_log(cache, j, m));
}

KernelEvaluation kernel_series(const MomentCache& cache, const DomainPoint& p, int m,
                               const SeriesOptions& opts) {
    const Profile& profile = cache.profile();
    const int n = p.n();
    require_nontrivial(m, n);
    require_interior(profile, p);

    const double x = p.x();
    const double s = p.s();
    const double w = p.w(profile);
    if (w >= opts.w_reject)
        throw NumericalFailure("series evaluation rejected at w = " + std::to_string(w) +
                               " >= " + std::to_string(opts.w_reject) +
                               " (shell ratio too close to 1); use the closed form");

    const double log_x = x > 0.0 ? std::log(x) : kNegInf;
    const double log_s = s > 0.0 ? std::log(s) : kNegInf;
    const double base = log_factorial(m - n - 1) + n * kLogPi;

    KernelEvaluation out;
    out.method = KernelMethod::Series;

    double partial = 0.0;
    double quad_bound = 0.0;
    double prev_shell = -1.0, prev_prev_shell = -1.0;
    int small_streak = 0;
    std::vector<MomentResult> shell_moments;

    for (int d = 0; d <= opts.degree_cap; ++d) {
        double shell = 0.0;
        double shell_quad = 0.0;
        const int q_lo = (x == 0.0 && d > 0) ? d : 0;
        const int q_hi = (s == 0.0) ? 0 : d;
        if (q_lo == q_hi) {
            // on-axis point: a single moment per shell
            const int q = q_lo;
            const int j0 = d - q;
            const MomentResult c = cache.at(m + q, j0);
            double log_term =
                log_factorial(m + q - 2) - log_factorial(q) - base - c.log_value;
            if (j0 > 0) log_term += j0 * log_x;
            if (q > 0) log_term += q * log_s;
            shell = std::exp(log_term);
            shell_quad = shell * c.rel_error;
        } else {
            cache.fetch_shell(m, d, shell_moments);
            for (int q = q_lo; q <= q_hi; ++q) {
                const int j0 = d - q;
                const MomentResult& c = shell_moments[static_cast<std::size_t>(q)];
                // 0^0 = 1 shows up as a skipped log term
                double log_term =
                    log_factorial(m + q - 2) - log_factorial(q) - base - c.log_value;
                if (j0 > 0) log_term += j0 * log_x;
                if (q > 0) log_term += q * log_s;
                const double term = std::exp(log_term);
                shell += term;
                shell_quad += term * c.rel_error;
            }
        }
        partial += shell;
        quad_bound += shell_quad;
        out.shells = d + 1;

        if (d >= 1 && shell <= opts.tol * partial) {
            ++small_streak;
            const double r1 = prev_shell > 0.0 ? shell / prev_shell : 0.0;
            const double r2 =
                (prev_prev_shell > 0.0 && prev_shell > 0.0) ? prev_shell / prev_prev_shell : 0.0;
            const double ratio = std::max(r1, r2);
            if (small_streak >= 2 && ratio < opts.ratio_cap) {
                out.value = partial;
                out.truncation_bound = ratio > 0.0 ? shell * ratio / (1.0 - ratio) : 0.0;
                out.quadrature_bound = quad_bound;
                return out;
            }
        } else {
            small_streak = 0;
        }
        prev_prev_shell = prev_shell;
        prev_shell = shell;
    }

    throw NumericalFailure("kernel series did not converge within degree cap " +
                               std::to_string(opts.degree_cap),
                           partial, prev_shell);
}

double kernel_closed(const Profile& profile, const DomainPoint& p, int m, double gamma) {
    const int n = p.n();
    require_nontrivial(m, n);
    const double d = require_interior(profile, p);
    const double w = p.w(profile);

    double leading = 1.0; // empty product when n = 1
    for (int i = 2; i <= n; ++i) leading *= m - i;

    const double log_dm = m * std::log(d);
    return leading * (m - 1 + (1.0 - w) * gamma) * std::exp(-log_dm - n * kLogPi);
}

namespace {

struct IdentitySum {
    double value = 0.0;
    double tail_bound = 0.0;
    double quad_bound = 0.0;
};

// sum_{k<=k_max} t^k / c_k(F^m) with a geometric bound for the dropped tail.
IdentitySum identity_partial_sum(const MomentCache& cache, int m, double t, int k_max) {
    if (!(t >= 0.0) || t >= cache.profile().x0())
        throw DomainError("identity probe t = " + std::to_string(t) + " outside [0, x0)");
    if (k_max < 4) throw InputError("k_max must be >= 4");

    const double log_t = t > 0.0 ? std::log(t) : kNegInf;
    IdentitySum out;
    double prev_term = -1.0;
    double max_tail_ratio = 0.0;
    for (int k = 0; k <= k_max; ++k) {
        const double log_term = (k > 0 ? k * log_t : 0.0) - cache.log_c(m, k);
        const double term = std::exp(log_term);
        out.value += term;
        out.quad_bound += term * cache.at(m, k).rel_error;
        if (k > k_max - 4 && prev_term > 0.0)
            max_tail_ratio = std::max(max_tail_ratio, term / prev_term);
        prev_term = term;
    }
    if (t > 0.0) {
        if (max_tail_ratio >= 1.0)
            throw NumericalFailure("series tail not decaying at t = " + std::to_string(t) +
                                   " (t at or beyond the radius of convergence)");
        out.tail_bound = prev_term * max_tail_ratio / (1.0 - max_tail_ratio);
    }
    return out;
}

// c_k(F^m) ratio at the truncation order approximates the series radius.
double series_radius_proxy(const MomentCache& cache, int m, int k_max) {
    return std::exp(cache.log_c(m, k_max) - cache.log_c(m, k_max - 1));
}

} // namespace

double englis_residual(const MomentCache& cache, int m, double t, double gamma, int k_max) {
    const IdentitySum sum = identity_partial_sum(cache, m, t, k_max);
    const double f = cache.profile().value(t);
    const double target = (m - 1 + gamma) * std::pow(f, -m);
    if (!(target > 0.0))
        throw DomainError("identity target (m - 1 + gamma) F^-m must be positive");
    return (std::abs(sum.value - target) + sum.tail_bound + sum.quad_bound) / target;
}

GammaEstimate estimate_gamma(const MomentCache& cache, const std::vector<int>& m_set,
                             const std::vector<double>& t_grid, int k_max) {
    std::set<int> ms(m_set.begin(), m_set.end());
    std::set<double> ts(t_grid.begin(), t_grid.end());
    if (ms.empty() || ts.empty()) throw InputError("gamma estimation needs probes");

    GammaEstimate out;
    double sum = 0.0;
    std::vector<std::string> failures;
    for (int m : ms) {
        double radius = 0.0;
        bool m_usable = true;
        try {
            cache.at(m, k_max); // force the table; divergence surfaces here
            radius = series_radius_proxy(cache, m, k_max);
        } catch (const Error& e) {
            failures.push_back(e.what());
            m_usable = false;
        }
        if (!m_usable) continue;
        for (double t : ts) {
            if (!(t >= 0.0) || t >= cache.profile().x0() || t > 0.9 * radius) {
                failures.push_back("probe t = " + std::to_string(t) + " rejected for m = " +
                                   std::to_string(m));
                continue;
            }
            try {
                const IdentitySum ps = identity_partial_sum(cache, m, t, k_max);
                const double fm = std::pow(cache.profile().value(t), m);
                out.probes.push_back({m, t, fm * ps.value - (m - 1)});
                sum += out.probes.back().gamma_probe;
            } catch (const Error& e) {
                failures.push_back(e.what());
            }
        }
    }
    if (out.probes.empty()) {
        std::string detail = failures.empty() ? "" : (": " + failures.front());
        throw NumericalFailure("every gamma probe failed" + detail);
    }
    out.gamma_hat = sum / static_cast<double>(out.probes.size());
    for (const GammaProbe& probe : out.probes)
        out.residual =
            std::max(out.residual, englis_residual(cache, probe.m, probe.t, out.gamma_hat, k_max));
    return out;
}

GammaEstimate estimate_gamma_default(const MomentCache& cache) {
    const double x0 = cache.profile().x0();
    std::vector<double> t_grid;
    if (std::isfinite(x0)) t_grid = {0.1 * x0, 0.3 * x0, 0.5 * x0};
    else t_grid = {0.25, 0.5, 1.0};
    return estimate_gamma(cache, {2, 3, 4}, t_grid);
}

} // namespace hartogs
