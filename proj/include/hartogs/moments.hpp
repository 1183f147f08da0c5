#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <vector>

#include "hartogs/parallel.hpp"
#include "hartogs/profile.hpp"
#include "hartogs/quadrature.hpp"

namespace hartogs {

/// One moment c_k(F^m) = int_0^x0 t^k F(t)^m G(t) dt. The integrand is
/// integrated in normalised log space, so log_value stays meaningful even
/// when value itself underflows.
struct MomentResult {
    double value = 0.0;
    double log_value = 0.0;
    double rel_error = 0.0;
    long long evaluations = 0;
};

struct MomentOptions {
    double tol = 1.0e-12; // relative
    int max_panels = 1 << 16;
    int initial_panels = 32;
};

/// Throws NumericalFailure (naming k and m) for divergent moments and
/// DomainError if G <= 0 is encountered (Kaehler condition violated).
MomentResult moment(const Profile& profile, int k, int m, const MomentOptions& opts = {});

struct MomentTable {
    int m = 0;
    std::vector<MomentResult> entries; // index k
};

/// Batch of c_k for k = 0..k_max; entries are independent, so Exec::Parallel
/// computes them concurrently with identical results. The first divergent k
/// aborts the batch with an error naming it.
MomentTable moment_table(const Profile& profile, int k_max, int m,
                         const MomentOptions& opts = {},
                         par::Exec exec = par::Exec::Parallel);

/// Lazily grown, thread-safe store of moment tables keyed by the weight
/// exponent m. Values do not depend on which thread computes them, so scans
/// are deterministic in either execution mode.
class MomentCache {
public:
    explicit MomentCache(const Profile& profile, MomentOptions opts = {});

    const Profile& profile() const { return profile_; }

    /// c_k(F^m) by value (safe to hold across growth).
    MomentResult at(int m, int k) const;

    double log_c(int m, int k) const { return at(m, k).log_value; }

    /// The entries c_{d-q}(F^{m+q}) for q = 0..d (one kernel-series shell)
    /// with a single lock round trip.
    void fetch_shell(int m, int d, std::vector<MomentResult>& out) const;

    long long total_evaluations() const;

private:
    const Profile& profile_;
    MomentOptions opts_;
    mutable std::shared_mutex mutex_;
    mutable std::map<int, std::vector<MomentResult>> tables_;
};

} // namespace hartogs
