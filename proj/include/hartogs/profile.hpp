#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hartogs/expr.hpp"
#include "hartogs/jet2.hpp"

namespace hartogs {

/// How many toward-the-boundary digits point-based operations keep in reserve:
/// they require F(x) - s >= kBoundaryMargin * F(x), so -log(F - s) stays well
/// clear of overflow. 2^-31 admits s = F(x)(1 - 2^-30) but nothing closer.
inline constexpr double kBoundaryMargin = 4.656612873077393e-10; // 2^-31

/// The radial profile F of a Hartogs domain
///   D_F = { z in C^n : |z0|^2 < x0, |z1|^2 + ... + |z_{n-1}|^2 < F(|z0|^2) }
/// together with its first two derivatives. F must be positive and decreasing
/// on [0, x0); the Kaehler condition G = -(t F'/F)' > 0 is checked separately
/// by kahler_check, not assumed here.
class Profile {
public:
    enum class Source { Builtin, Expression, ParametricFamily };

    Profile(std::string label, double x0, std::function<Jet2(double)> jet_fn, Source source);

    const std::string& label() const { return label_; }
    double x0() const { return x0_; }
    Source source() const { return source_; }

    /// (F, F', F'') at t; throws DomainError for t outside [0, x0) or if F <= 0.
    Jet2 jet(double t) const;

    double value(double t) const { return jet(t).v; }

    /// G(t) = -(t F'/F)' = -F'/F - t F''/F + t (F'/F)^2, assembled from the jet.
    double g(double t) const;

    /// Largest t at which F can still be evaluated meaningfully (F >= ~1e-290);
    /// equals x0 for finite domains. Grids and cutoff sequences clip here.
    double evaluable_limit() const;

    /// Largest x with F(x) >= 1e-12 * F(0); bounds sampling away from the
    /// deep tail of unbounded domains.
    double x_cap() const;

private:
    std::string label_;
    double x0_;
    std::function<Jet2(double)> jet_fn_;
    Source source_;
    mutable double evaluable_limit_ = -1.0; // lazily probed, profile stays logically const
    mutable double x_cap_ = -1.0;
};

/// Builtin registry. Accepted names:
///   "hyperbolic"                  F = 1 - x            on [0, 1)
///   "springer"                    F = exp(-x)          on [0, inf)
///   "power:NU"                    F = (1 - x)^NU       on [0, 1), NU > 0
///   "truncated-hyperbolic:X0"     F = 1 - x            on [0, X0), 0 < X0 < 1
Profile make_builtin_profile(const std::string& name);

/// Compiles an expression in the variable x into a profile on [0, x0).
Profile make_expression_profile(const std::string& text, double x0);

/// Names of the registry entries (for diagnostics and docs).
std::vector<std::string> builtin_profile_names();

/// A point of C^n with the radial quantities the geometry depends on.
class DomainPoint {
public:
    explicit DomainPoint(std::vector<std::complex<double>> coords);

    /// Lift of radial coordinates: z0 = sqrt(x), z1 = sqrt(w * F(x)) (n >= 2),
    /// remaining coordinates zero.
    static DomainPoint from_radial(const Profile& profile, int n, double x, double w);

    int n() const { return static_cast<int>(z_.size()); }
    const std::vector<std::complex<double>>& coords() const { return z_; }

    double x() const { return x_; }   // |z0|^2
    double s() const { return s_; }   // |z1|^2 + ... + |z_{n-1}|^2
    double w(const Profile& profile) const;

private:
    std::vector<std::complex<double>> z_;
    double x_ = 0.0;
    double s_ = 0.0;
};

/// Strict domain predicate: x < x0 and s < F(x). Never throws for finite
/// coordinates.
bool membership(const Profile& profile, const DomainPoint& p);

/// Membership plus the boundary margin; throws DomainError when violated.
/// Returns D = F(x) - s.
double require_interior(const Profile& profile, const DomainPoint& p);

/// Kaehler potential -log(F(x) - s); throws DomainError outside the guarded
/// domain.
double potential(const Profile& profile, const DomainPoint& p);

struct KahlerCheck {
    double min_g;
    double argmin_t;
    bool pass;
};

/// Samples G on a grid over [0, x0) (clipped via t = u/(1-u) for unbounded
/// domains); pass iff min G > 0.
KahlerCheck kahler_check(const Profile& profile, int grid_size);

enum class Completeness { Complete, Incomplete, Inconclusive };

struct CompletenessTrace {
    double cutoff;
    double partial_integral;
    double increment;
};

struct CompletenessResult {
    Completeness verdict;
    double partial_integral = 0.0;
    long long evaluations = 0;
    std::vector<CompletenessTrace> trace;
    std::string reason;
};

struct CompletenessOptions {
    long long budget = 1'000'000;        // integrand evaluation limit
    double divergence_threshold = 1.0e6; // partial integral that declares divergence outright
    double tail_tolerance = 1.0e-10;     // remaining tail below this declares convergence
};

/// Probes int_0^sqrt(x0) sqrt(G(u^2)) du on cutoffs that approach the endpoint
/// double-exponentially. Complete when the partial integral passes the
/// divergence threshold with non-decaying increments, or when the increments
/// are still non-decaying once the cutoffs have exhausted what double
/// precision (and the profile) can represent. Incomplete when the projected
/// tail drops below tail_tolerance. Inconclusive when the evaluation budget
/// runs out first.
CompletenessResult completeness_check(const Profile& profile,
                                      const CompletenessOptions& opts = {});

} // namespace hartogs
