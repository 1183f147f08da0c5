#include "hartogs/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hartogs/quadrature.hpp"

namespace hartogs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEvaluableFloor = 1.0e-290;

double parse_parameter(const std::string& name, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw InputError("");
        return v;
    } catch (...) {
        throw InputError("malformed parameter in profile name '" + name + "'");
    }
}

} // namespace

Profile::Profile(std::string label, double x0, std::function<Jet2(double)> jet_fn, Source source)
    : label_(std::move(label)), x0_(x0), jet_fn_(std::move(jet_fn)), source_(source) {
    if (!(x0_ > 0.0)) throw InputError("profile domain bound x0 must be positive");
    jet(0.0); // fail fast if F is not evaluable/positive at the origin
    // Probe both limits now so the object is immutable (and thread-safe) afterwards.
    evaluable_limit();
    x_cap();
}

Jet2 Profile::jet(double t) const {
    if (!(t >= 0.0) || t >= x0_)
        throw DomainError("t = " + std::to_string(t) + " outside [0, x0) for profile '" +
                          label_ + "'");
    Jet2 j = jet_fn_(t);
    if (!(j.v > 0.0))
        throw DomainError("profile '" + label_ + "' is not positive at t = " + std::to_string(t));
    return j;
}

double Profile::g(double t) const {
    const Jet2 j = jet(t);
    const double r = j.d1 / j.v;
    return -r - t * j.d2 / j.v + t * r * r;
}

double Profile::evaluable_limit() const {
    if (evaluable_limit_ >= 0.0) return evaluable_limit_;
    if (std::isfinite(x0_)) return evaluable_limit_ = x0_;

    auto ok = [&](double t) {
        try {
            return jet_fn_(t).v >= kEvaluableFloor;
        } catch (...) {
            return false;
        }
    };
    double lo = 1.0;
    if (!ok(lo)) return evaluable_limit_ = lo;
    double hi = lo;
    while (hi < 1.0e15 && ok(hi * 2.0)) hi *= 2.0;
    if (ok(hi * 2.0)) return evaluable_limit_ = hi; // essentially unbounded
    double bad = hi * 2.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (hi + bad);
        (ok(mid) ? hi : bad) = mid;
    }
    return evaluable_limit_ = hi;
}

double Profile::x_cap() const {
    if (x_cap_ >= 0.0) return x_cap_;
    const double f0 = jet(0.0).v;
    const double floor = 1.0e-12 * f0;
    const double limit = evaluable_limit();
    auto above = [&](double t) { return t < x0_ && jet_fn_(t).v >= floor; };

    double hi = std::min(limit, x0_);
    if (std::isfinite(x0_)) hi = x0_ * (1.0 - 1.0e-12);
    if (above(hi)) return x_cap_ = hi;
    double lo = 0.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (above(mid) ? lo : hi) = mid;
    }
    return x_cap_ = lo;
}

Profile make_builtin_profile(const std::string& name) {
    if (name == "hyperbolic") {
        return Profile(name, 1.0, [](double t) { return Jet2{1.0 - t, -1.0, 0.0}; },
                       Profile::Source::Builtin);
    }
    if (name == "springer") {
        return Profile(name, kInf,
                       [](double t) {
                           const double e = std::exp(-t);
                           return Jet2{e, -e, e};
                       },
                       Profile::Source::Builtin);
    }
    if (name.rfind("power:", 0) == 0) {
        const double nu = parse_parameter(name, name.substr(6));
        if (!(nu > 0.0)) throw InputError("power profile requires exponent > 0");
        return Profile(name, 1.0,
                       [nu](double t) { return pow(Jet2{1.0 - t, -1.0, 0.0}, nu); },
                       Profile::Source::ParametricFamily);
    }
    if (name.rfind("truncated-hyperbolic:", 0) == 0) {
        const double x0 = parse_parameter(name, name.substr(21));
        if (!(x0 > 0.0 && x0 < 1.0))
            throw InputError("truncated-hyperbolic profile requires 0 < x0 < 1");
        return Profile(name, x0, [](double t) { return Jet2{1.0 - t, -1.0, 0.0}; },
                       Profile::Source::ParametricFamily);
    }
    throw InputError("unknown builtin profile '" + name + "' (known: hyperbolic, springer, "
                     "power:NU, truncated-hyperbolic:X0)");
}

Profile make_expression_profile(const std::string& text, double x0) {
    auto compiled = std::make_shared<expr::ProfileExpression>(expr::parse(text));
    return Profile("expr:" + text, x0,
                   [compiled](double t) { return expr::eval_jet2(*compiled, t); },
                   Profile::Source::Expression);
}

std::vector<std::string> builtin_profile_names() {
    return {"hyperbolic", "springer", "power:NU", "truncated-hyperbolic:X0"};
}

DomainPoint::DomainPoint(std::vector<std::complex<double>> coords) : z_(std::move(coords)) {
    if (z_.empty()) throw InputError("a domain point needs at least one coordinate");
    x_ = std::norm(z_[0]);
    for (std::size_t k = 1; k < z_.size(); ++k) s_ += std::norm(z_[k]);
}

DomainPoint DomainPoint::from_radial(const Profile& profile, int n, double x, double w) {
    if (n < 1) throw InputError("dimension must be >= 1");
    if (!(x >= 0.0) || !(w >= 0.0) || w >= 1.0)
        throw InputError("radial coordinates require x >= 0 and 0 <= w < 1");
    std::vector<std::complex<double>> z(static_cast<std::size_t>(n), 0.0);
    z[0] = std::sqrt(x);
    if (n >= 2 && w > 0.0) z[1] = std::sqrt(w * profile.value(x));
    return DomainPoint(std::move(z));
}

double DomainPoint::w(const Profile& profile) const { return s_ / profile.value(x_); }

bool membership(const Profile& profile, const DomainPoint& p) {
    if (!(p.x() < profile.x0())) return false;
    try {
        return p.s() < profile.value(p.x());
    } catch (const DomainError&) {
        return false;
    }
}

double require_interior(const Profile& profile, const DomainPoint& p) {
    if (!(p.x() < profile.x0()))
        throw DomainError("point outside domain: |z0|^2 = " + std::to_string(p.x()) +
                          " >= x0 for profile '" + profile.label() + "'");
    const double f = profile.value(p.x());
    const double d = f - p.s();
    if (!(d >= kBoundaryMargin * f))
        throw DomainError("point too close to the boundary: F(x) - s < margin * F(x)");
    return d;
}

double potential(const Profile& profile, const DomainPoint& p) {
    return -std::log(require_interior(profile, p));
}

KahlerCheck kahler_check(const Profile& profile, int grid_size) {
    if (grid_size < 2) throw InputError("kahler_check needs a grid of at least 2 points");
    const double limit = profile.evaluable_limit();

    KahlerCheck out{std::numeric_limits<double>::infinity(), 0.0, false};
    for (int i = 0; i < grid_size; ++i) {
        double t;
        if (std::isfinite(profile.x0())) {
            t = limit * i / grid_size;
        } else {
            // u/(1-u) substitution, clipped where F underflows
            const double u_max = limit / (1.0 + limit);
            const double u = u_max * i / grid_size;
            t = u / (1.0 - u);
        }
        const double g = profile.g(t);
        if (g < out.min_g) {
            out.min_g = g;
            out.argmin_t = t;
        }
    }
    out.pass = out.min_g > 0.0;
    return out;
}

CompletenessResult completeness_check(const Profile& profile, const CompletenessOptions& opts) {
    const KahlerCheck kc = kahler_check(profile, 64);
    if (!kc.pass)
        throw DomainError("completeness probe requires the Kaehler condition; G(t) <= 0 at t = " +
                          std::to_string(kc.argmin_t));

    const double u_limit = std::sqrt(profile.evaluable_limit());

    // Cutoffs approach the endpoint double-exponentially so that logarithmic
    // divergences still grow by a constant factor per step. The ladder stops
    // where u^2 < x0 can no longer be resolved in double precision.
    std::vector<double> cutoffs;
    if (std::isfinite(profile.x0())) {
        const double root = std::sqrt(profile.x0());
        for (int j = 0; j <= 5; ++j)
            cutoffs.push_back(root * (1.0 - std::exp2(-std::exp2(j))));
        cutoffs.push_back(root * (1.0 - std::exp2(-45)));
    } else {
        for (int j = 0;; ++j) {
            const double c = std::exp2(std::exp2(j));
            if (c >= u_limit || j > 9) {
                cutoffs.push_back(u_limit * (1.0 - 1.0e-12));
                break;
            }
            cutoffs.push_back(c);
        }
    }

    auto integrand = [&profile](double u) { return std::sqrt(profile.g(u * u)); };

    CompletenessResult out;
    quad::IntegrationOptions qopts;
    qopts.tol = 1.0e-9;
    qopts.initial_panels = 8;

    double prev_increment = -1.0;
    double last_ratio = 0.0;
    double lo = 0.0;
    for (std::size_t j = 0; j < cutoffs.size(); ++j) {
        qopts.max_evaluations = opts.budget - out.evaluations;
        quad::QuadratureResult seg;
        try {
            seg = quad::integrate(integrand, lo, cutoffs[j], qopts);
        } catch (const NumericalFailure&) {
            out.verdict = Completeness::Inconclusive;
            out.reason = "evaluation budget exhausted inside a segment";
            return out;
        }
        out.evaluations += seg.evaluations;
        out.partial_integral += seg.value;
        out.trace.push_back({cutoffs[j], out.partial_integral, seg.value});

        if (prev_increment > 0.0) {
            last_ratio = seg.value / prev_increment;
            if (last_ratio < 1.0) {
                // Remaining tail projected geometrically from the increments.
                const double tail = seg.value * last_ratio / (1.0 - last_ratio);
                if (tail < opts.tail_tolerance) {
                    out.verdict = Completeness::Incomplete;
                    out.reason = "projected tail below tolerance";
                    return out;
                }
            }
            if (out.partial_integral > opts.divergence_threshold && last_ratio >= 0.5) {
                out.verdict = Completeness::Complete;
                out.reason = "partial integral passed the divergence threshold";
                return out;
            }
        }
        prev_increment = seg.value;
        lo = cutoffs[j];

        if (out.evaluations >= opts.budget) {
            out.verdict = Completeness::Inconclusive;
            out.reason = "evaluation budget exhausted";
            return out;
        }
    }

    // The cutoffs hit the limit of what doubles (or the profile) can express.
    if (cutoffs.size() >= 3 && last_ratio >= 0.5) {
        out.verdict = Completeness::Complete;
        out.reason = "increments non-decaying through the deepest representable cutoff";
    } else {
        out.verdict = Completeness::Inconclusive;
        out.reason = "cutoffs exhausted without a clear trend";
    }
    return out;
}

} // namespace hartogs
