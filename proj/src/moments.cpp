#include "hartogs/moments.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "hartogs/special.hpp"

namespace hartogs {

namespace {

// log of the moment integrand t^k F^m G at t; -inf where the integrand
// vanishes, NaN never (G <= 0 raises instead).
double log_integrand(const Profile& profile, int k, int m, double t) {
    if (t <= 0.0) return k == 0 ? std::log(profile.value(0.0)) * m + std::log(profile.g(0.0))
                                : -std::numeric_limits<double>::infinity();
    const Jet2 j = profile.jet(t);
    const double r = j.d1 / j.v;
    const double g = -r - t * j.d2 / j.v + t * r * r;
    if (!(g > 0.0))
        throw DomainError("moment integrand needs G > 0; G(" + std::to_string(t) +
                          ") = " + std::to_string(g) + " for profile '" + profile.label() + "'");
    return k * std::log(t) + m * std::log(j.v) + std::log(g);
}

} // namespace

MomentResult moment(const Profile& profile, int k, int m, const MomentOptions& opts) {
    if (k < 0) throw InputError("moment order k must be >= 0");

    const bool finite = std::isfinite(profile.x0());
    const double limit = profile.evaluable_limit();
    const double u_max = finite ? 1.0 : limit / (1.0 + limit);

    // Normalise by the grid maximum of the log integrand so the quadrature
    // runs on numbers of order one regardless of k and m.
    double peak = -std::numeric_limits<double>::infinity();
    const int kProbe = 65;
    for (int i = 0; i < kProbe; ++i) {
        const double u = u_max * (i + 0.5) / kProbe;
        const double t = finite ? profile.x0() * u : u / (1.0 - u);
        peak = std::max(peak, log_integrand(profile, k, m, t));
    }
    if (!std::isfinite(peak)) peak = 0.0;

    quad::IntegrationOptions qopts;
    qopts.tol = opts.tol;
    qopts.scale = quad::Scale::Relative;
    qopts.max_panels = opts.max_panels;
    qopts.initial_panels = opts.initial_panels;

    quad::QuadratureResult q;
    try {
        if (finite) {
            // Panel nodes can round onto the bound itself; stop one ulp short.
            const double x0 = std::nextafter(profile.x0(), 0.0);
            q = quad::integrate(
                [&](double t) { return std::exp(log_integrand(profile, k, m, t) - peak); }, 0.0,
                x0, qopts);
        } else {
            // Manual u/(1-u) substitution keeps the Jacobian inside the exp.
            q = quad::integrate(
                [&](double u) {
                    const double om = 1.0 - u;
                    const double t = u / om;
                    return std::exp(log_integrand(profile, k, m, t) - peak - 2.0 * std::log(om));
                },
                0.0, u_max, qopts);
        }
    } catch (const NumericalFailure& nf) {
        throw NumericalFailure("moment c_" + std::to_string(k) + "(F^" + std::to_string(m) +
                                   ") did not converge for profile '" + profile.label() +
                                   "' (likely divergent)",
                               nf.partial() * std::exp(peak), nf.error_estimate());
    }

    if (!(q.value > 0.0))
        throw NumericalFailure("moment c_" + std::to_string(k) + "(F^" + std::to_string(m) +
                               ") came out non-positive");

    MomentResult out;
    out.log_value = peak + std::log(q.value);
    out.value = std::exp(out.log_value);
    out.rel_error = q.abs_error_estimate / q.value;
    out.evaluations = q.evaluations;
    return out;
}

MomentTable moment_table(const Profile& profile, int k_max, int m, const MomentOptions& opts,
                         par::Exec exec) {
    if (k_max < 0) throw InputError("k_max must be >= 0");
    MomentTable table;
    table.m = m;
    table.entries.resize(static_cast<std::size_t>(k_max) + 1);
    par::for_each_index(table.entries.size(), exec, [&](std::size_t k) {
        table.entries[k] = moment(profile, static_cast<int>(k), m, opts);
    });
    return table;
}

MomentCache::MomentCache(const Profile& profile, MomentOptions opts)
    : profile_(profile), opts_(opts) {}

MomentResult MomentCache::at(int m, int k) const {
    if (k < 0) throw InputError("moment order k must be >= 0");
    {
        std::shared_lock lock(mutex_);
        auto it = tables_.find(m);
        if (it != tables_.end() && static_cast<std::size_t>(k) < it->second.size())
            return it->second[static_cast<std::size_t>(k)];
    }
    std::unique_lock lock(mutex_);
    auto& table = tables_[m];
    while (table.size() <= static_cast<std::size_t>(k))
        table.push_back(moment(profile_, static_cast<int>(table.size()), m, opts_));
    return table[static_cast<std::size_t>(k)];
}

void MomentCache::fetch_shell(int m, int d, std::vector<MomentResult>& out) const {
    out.resize(static_cast<std::size_t>(d) + 1);
    {
        std::shared_lock lock(mutex_);
        bool all_present = true;
        for (int q = 0; q <= d; ++q) {
            auto it = tables_.find(m + q);
            if (it == tables_.end() || it->second.size() <= static_cast<std::size_t>(d - q)) {
                all_present = false;
                break;
            }
            out[static_cast<std::size_t>(q)] = it->second[static_cast<std::size_t>(d - q)];
        }
        if (all_present) return;
    }
    std::unique_lock lock(mutex_);
    for (int q = 0; q <= d; ++q) {
        auto& table = tables_[m + q];
        while (table.size() <= static_cast<std::size_t>(d - q))
            table.push_back(moment(profile_, static_cast<int>(table.size()), m + q, opts_));
        out[static_cast<std::size_t>(q)] = table[static_cast<std::size_t>(d - q)];
    }
}

long long MomentCache::total_evaluations() const {
    std::shared_lock lock(mutex_);
    long long total = 0;
    for (const auto& [m, table] : tables_)
        for (const auto& entry : table) total += entry.evaluations;
    return total;
}

} // namespace hartogs
