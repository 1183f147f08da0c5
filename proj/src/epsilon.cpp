#include "hartogs/epsilon.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hartogs/special.hpp"

namespace hartogs {

namespace {

constexpr double kLogPi = 1.1447298858494001741;

double halton(unsigned long long index, unsigned base) {
    double result = 0.0;
    double f = 1.0;
    while (index > 0) {
        f /= base;
        result += f * static_cast<double>(index % base);
        index /= base;
    }
    return result;
}

} // namespace

double hyperbolic_constant(int m, int n) {
    if (n < 1) throw InputError("dimension must be >= 1");
    if (m <= n) throw TrivialSpaceError(m, n);
    return std::exp(log_gamma_int(m) - log_gamma_int(m - n) - n * kLogPi);
}

SampleBox default_sample_box(const Profile& profile, KernelMethod method) {
    SampleBox box;
    box.w_hi = 0.9;
    const double cap = profile.x_cap();
    if (method == KernelMethod::ClosedForm) {
        box.x_hi = std::isfinite(profile.x0()) ? std::min(0.95 * profile.x0(), cap) : cap;
    } else {
        // The series cost grows steeply toward the x-boundary (the shell ratio
        // approaches 1), so serieswise sampling stays in the cheap half.
        box.x_hi = std::isfinite(profile.x0()) ? 0.5 * profile.x0() : std::min(cap, 1.0);
    }
    return box;
}

std::vector<DomainPoint> sample_points(const Profile& profile, int n, int sample_count,
                                       unsigned long long seed, const SampleBox& box) {
    if (n < 1) throw InputError("dimension must be >= 1");
    if (sample_count < 1) throw InputError("sample count must be >= 1");

    // Cranley-Patterson rotation makes distinct seeds give distinct, still
    // low-discrepancy point sets.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double shift_x = unit(rng);
    const double shift_w = unit(rng);

    if (!(box.x_hi > box.x_lo) || box.x_lo < 0.0)
        throw InputError("sample box requires 0 <= x_lo < x_hi");

    std::vector<DomainPoint> points;
    points.reserve(static_cast<std::size_t>(sample_count));
    for (int i = 0; i < sample_count; ++i) {
        const double ux = std::fmod(halton(static_cast<unsigned long long>(i) + 1, 2) + shift_x, 1.0);
        const double uw = std::fmod(halton(static_cast<unsigned long long>(i) + 1, 3) + shift_w, 1.0);
        const double x = box.x_lo + (box.x_hi - box.x_lo) * ux;
        const double w = n >= 2 ? box.w_hi * uw : 0.0;
        points.push_back(DomainPoint::from_radial(profile, n, x, w));
    }
    return points;
}

EpsilonEvaluator::EpsilonEvaluator(const Profile& profile, int n, int m, KernelMethod method,
                                   std::optional<double> gamma_override,
                                   std::shared_ptr<MomentCache> shared_cache)
    : profile_(profile), n_(n), m_(m), method_(method) {
    if (n_ < 1) throw InputError("dimension must be >= 1");
    if (m_ <= n_) throw TrivialSpaceError(m_, n_);
    cache_ = shared_cache ? std::move(shared_cache) : std::make_shared<MomentCache>(profile_);
    if (&cache_->profile() != &profile_)
        throw InputError("shared moment cache built for a different profile");
    if (gamma_override) {
        gamma_hat_ = *gamma_override;
        gamma_residual_ = 0.0;
    } else if (method_ == KernelMethod::ClosedForm) {
        const GammaEstimate est = estimate_gamma_default(*cache_);
        gamma_hat_ = est.gamma_hat;
        gamma_residual_ = est.residual;
    }
}

EpsilonSample EpsilonEvaluator::at(const DomainPoint& p) const {
    if (p.n() != n_)
        throw InputError("point dimension " + std::to_string(p.n()) +
                         " does not match evaluator dimension " + std::to_string(n_));
    const double d = require_interior(profile_, p);

    EpsilonSample sample;
    sample.x = p.x();
    sample.w = p.w(profile_);
    sample.m = m_;
    sample.method = method_;

    if (method_ == KernelMethod::ClosedForm) {
        const double k = kernel_closed(profile_, p, m_, gamma_hat_);
        sample.epsilon = k * std::pow(d, m_);
        // Only the gamma estimate is uncertain in this route.
        double leading = 1.0;
        for (int i = 2; i <= n_; ++i) leading *= m_ - i;
        sample.error_budget = leading * (1.0 - sample.w) * gamma_residual_ *
                                  std::exp(-n_ * kLogPi) +
                              8.0 * std::numeric_limits<double>::epsilon() * sample.epsilon;
    } else {
        const KernelEvaluation k = kernel_series(*cache_, p, m_);
        const double weight = std::pow(d, m_);
        sample.epsilon = k.value * weight;
        sample.error_budget = k.error_budget() * weight;
    }
    if (!(sample.epsilon > 0.0))
        throw NumericalFailure("epsilon came out non-positive at x = " + std::to_string(sample.x));
    return sample;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Balanced: return "balanced";
        case Verdict::NotBalanced: return "not_balanced";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

BalancedVerdict balanced_verdict(const Profile& profile, int n, int m,
                                 const BalancedOptions& opts) {
    BalancedVerdict out;
    out.m = m;
    if (n < 1) throw InputError("dimension must be >= 1");

    if (m <= n) {
        // The weighted Bergman space is {0}: nothing to be balanced.
        out.verdict = Verdict::NotBalanced;
        out.reason = "trivial-space: m <= n leaves no square-integrable monomials";
        return out;
    }

    const EpsilonEvaluator evaluator(profile, n, m, opts.method);
    out.gamma_hat = evaluator.gamma_hat();
    out.gamma_residual = evaluator.gamma_residual();

    const SampleBox box = default_sample_box(profile, opts.method);
    const std::vector<DomainPoint> points =
        sample_points(profile, n, opts.sample_count, opts.seed, box);

    std::vector<EpsilonSample> samples(points.size());
    std::vector<char> ok(points.size(), 0);
    par::for_each_index(points.size(), opts.exec, [&](std::size_t i) {
        try {
            samples[i] = evaluator.at(points[i]);
            ok[i] = 1;
        } catch (const Error&) {
            ok[i] = 0; // rejected sample; dropped below
        }
    });

    double min_eps = std::numeric_limits<double>::infinity();
    double max_eps = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!ok[i]) continue;
        ++kept;
        min_eps = std::min(min_eps, samples[i].epsilon);
        max_eps = std::max(max_eps, samples[i].epsilon);
        sum += samples[i].epsilon;
        if (opts.keep_samples) out.samples.push_back(samples[i]);
    }

    if (kept < std::max<std::size_t>(2, points.size() / 10)) {
        out.verdict = Verdict::Inconclusive;
        out.reason = "too few evaluable samples (" + std::to_string(kept) + " of " +
                     std::to_string(points.size()) + ")";
        return out;
    }

    out.constant_estimate = sum / static_cast<double>(kept);
    out.relative_spread = (max_eps - min_eps) / out.constant_estimate;
    if (out.relative_spread <= opts.tol) {
        out.verdict = Verdict::Balanced;
        out.reason = "relative spread within tolerance (numerical, non-certifying)";
    } else {
        out.verdict = Verdict::NotBalanced;
        out.reason = "epsilon varies across the sample";
    }
    return out;
}

QuantizationScan regular_quantization_scan(const Profile& profile, int n, int m_from, int m_to,
                                           const BalancedOptions& opts) {
    QuantizationScan scan;
    for (int m = m_from; m <= m_to; ++m) {
        try {
            scan.verdicts.push_back(balanced_verdict(profile, n, m, opts));
        } catch (const Error& e) {
            BalancedVerdict failed;
            failed.m = m;
            failed.verdict = Verdict::Inconclusive;
            failed.reason = e.what();
            scan.verdicts.push_back(std::move(failed));
        }
    }
    scan.all_balanced = !scan.verdicts.empty() &&
                        std::all_of(scan.verdicts.begin(), scan.verdicts.end(),
                                    [](const BalancedVerdict& v) {
                                        return v.verdict == Verdict::Balanced;
                                    });
    return scan;
}

} // namespace hartogs
