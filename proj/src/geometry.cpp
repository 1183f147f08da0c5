#include "hartogs/geometry.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace hartogs {

namespace {

using Complex = std::complex<double>;

/// Radial jet of the potential Phi = -log(F(x) - s).
RadialJet2 potential_radial_jet(const Profile& profile, double x, double s) {
    const Jet2 f = profile.jet(x);
    const double d = f.v - s;
    RadialJet2 jet;
    jet.fx = -f.d1 / d;
    jet.fs = 1.0 / d;
    jet.fxx = -f.d2 / d + f.d1 * f.d1 / (d * d);
    jet.fxs = -f.d1 / (d * d);
    jet.fss = 1.0 / (d * d);
    return jet;
}

} // namespace

Eigen::MatrixXcd hessian_from_radial(const RadialJet2& jet, const DomainPoint& p) {
    const int n = p.n();
    const auto& z = p.coords();
    Eigen::MatrixXcd h(n, n);
    h(0, 0) = jet.fx + p.x() * jet.fxx;
    for (int b = 1; b < n; ++b) {
        const Complex v = std::conj(z[0]) * z[static_cast<std::size_t>(b)] * jet.fxs;
        h(0, b) = v;
        h(b, 0) = std::conj(v);
    }
    for (int a = 1; a < n; ++a)
        for (int b = 1; b < n; ++b) {
            Complex v = std::conj(z[static_cast<std::size_t>(a)]) *
                        z[static_cast<std::size_t>(b)] * jet.fss;
            if (a == b) v += jet.fs;
            h(a, b) = v;
        }
    return h;
}

MetricSample metric_tensor(const Profile& profile, const DomainPoint& p) {
    require_interior(profile, p);
    MetricSample sample{p, hessian_from_radial(potential_radial_jet(profile, p.x(), p.s()), p),
                        0.0, std::nullopt};
    const Complex det = sample.g.determinant();
    sample.det_g = det.real();
    return sample;
}

double metric_fd_check(const Profile& profile, const DomainPoint& p, double h) {
    if (!(h > 0.0)) throw DomainError("finite-difference step h must be positive");
    const int n = p.n();

    // Conservative margin: the stencil must stay interior after any +-2h move.
    {
        const auto& z = p.coords();
        double worst_x = (std::abs(z[0]) + 4.0 * h) * (std::abs(z[0]) + 4.0 * h);
        double worst_s = 0.0;
        for (int k = 1; k < n; ++k) {
            const double r = std::abs(z[static_cast<std::size_t>(k)]) + 4.0 * h;
            worst_s += r * r;
        }
        if (!(worst_x < profile.x0()))
            throw DomainError("insufficient margin for the finite-difference stencil (x0)");
        const double f = profile.value(worst_x);
        if (!(f - worst_s >= kBoundaryMargin * f))
            throw DomainError("insufficient margin for the finite-difference stencil (boundary)");
    }

    auto phi_at = [&](const std::vector<Complex>& z) {
        return potential(profile, DomainPoint(z));
    };
    auto displaced = [&](int coord, Complex delta) {
        std::vector<Complex> z = p.coords();
        z[static_cast<std::size_t>(coord)] += delta;
        return z;
    };

    // d/du d/dv of phi for real displacement directions u, v (4-point stencil,
    // plain second difference on the diagonal).
    auto mixed = [&](int cu, Complex eu, int cv, Complex ev) {
        if (cu == cv && eu == ev) {
            const double fp = phi_at(displaced(cu, eu * h));
            const double f0 = potential(profile, p);
            const double fm = phi_at(displaced(cu, -eu * h));
            return (fp - 2.0 * f0 + fm) / (h * h);
        }
        std::vector<Complex> zpp = displaced(cu, eu * h);
        zpp[static_cast<std::size_t>(cv)] += ev * h;
        std::vector<Complex> zpm = displaced(cu, eu * h);
        zpm[static_cast<std::size_t>(cv)] -= ev * h;
        std::vector<Complex> zmp = displaced(cu, -eu * h);
        zmp[static_cast<std::size_t>(cv)] += ev * h;
        std::vector<Complex> zmm = displaced(cu, -eu * h);
        zmm[static_cast<std::size_t>(cv)] -= ev * h;
        return (phi_at(zpp) - phi_at(zpm) - phi_at(zmp) + phi_at(zmm)) / (4.0 * h * h);
    };

    const MetricSample analytic = metric_tensor(profile, p);
    const Complex i(0.0, 1.0);

    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            // d^2/dz_a dzbar_b = 1/4 [(d_aa' + d_bb') + i (d_ab' - d_ba')] in
            // terms of real (a) and imaginary (b) direction derivatives.
            const double re_part = mixed(a, 1.0, b, 1.0) + mixed(a, i, b, i);
            const double im_part = mixed(a, 1.0, b, i) - mixed(a, i, b, 1.0);
            const Complex fd = 0.25 * Complex(re_part, im_part);
            worst = std::max(worst, std::abs(fd - analytic.g(a, b)));
        }
    return worst;
}

VolumeDensity volume_density(const Profile& profile, const DomainPoint& p) {
    const double d = require_interior(profile, p);
    const MetricSample sample = metric_tensor(profile, p);

    const int n = p.n();
    const double f = profile.value(p.x());
    const double g = profile.g(p.x());

    VolumeDensity out;
    out.det_g = sample.det_g;
    out.closed_form = f * f * g * std::pow(d, -(n + 1));
    out.defect = std::abs(out.det_g - out.closed_form) / std::abs(out.closed_form);
    return out;
}

double scalar_curvature(const Profile& profile, const DomainPoint& p, double h) {
    if (!(h > 0.0)) throw DomainError("finite-difference step h must be positive");
    require_interior(profile, p);

    const int n = p.n();
    const double x = p.x();
    const double s = p.s();
    const double ht = h * std::max(1.0, x);
    if (!(x - ht >= 0.0) || !(x + ht < profile.x0()))
        throw DomainError("insufficient margin in t for differencing log G (t = " +
                          std::to_string(x) + ", h = " + std::to_string(ht) + ")");

    auto log_g = [&](double t) { return std::log(profile.g(t)); };

    // Central differences with one Richardson pass (h, h/2).
    auto d1_at = [&](double step) { return (log_g(x + step) - log_g(x - step)) / (2.0 * step); };
    auto d2_at = [&](double step) {
        return (log_g(x + step) - 2.0 * log_g(x) + log_g(x - step)) / (step * step);
    };
    const double u1 = (4.0 * d1_at(ht / 2.0) - d1_at(ht)) / 3.0;
    const double u2 = (4.0 * d2_at(ht / 2.0) - d2_at(ht)) / 3.0;

    // Radial jet of log det g = 2 log F + log G - (n+1) log(F - s); everything
    // but the log G terms is analytic in the profile jet.
    const Jet2 f = profile.jet(x);
    const double d = f.v - s;
    const double a = f.d1 / f.v;

    RadialJet2 ld;
    ld.fx = 2.0 * a + u1 - (n + 1) * f.d1 / d;
    ld.fs = (n + 1) / d;
    ld.fxx = 2.0 * (f.d2 / f.v - a * a) + u2 - (n + 1) * (f.d2 / d - f.d1 * f.d1 / (d * d));
    ld.fxs = -(n + 1) * f.d1 / (d * d);
    ld.fss = (n + 1) / (d * d);

    const Eigen::MatrixXcd g = hessian_from_radial(potential_radial_jet(profile, x, s), p);
    const Eigen::MatrixXcd ricci = -hessian_from_radial(ld, p);

    Eigen::FullPivLU<Eigen::MatrixXcd> lu(g);
    if (!lu.isInvertible() || lu.rcond() < 1.0e-12)
        throw NumericalFailure("metric too ill-conditioned for curvature at x = " +
                               std::to_string(x));
    return 2.0 * lu.solve(ricci).trace().real();
}

CurvatureScan curvature_scan(const Profile& profile, const std::vector<DomainPoint>& grid,
                             double h, double tol, par::Exec exec) {
    if (grid.empty()) throw InputError("curvature scan needs at least one point");

    CurvatureScan out;
    out.points.resize(grid.size());
    par::for_each_index(grid.size(), exec, [&](std::size_t i) {
        CurvaturePoint& entry = out.points[i];
        entry.x = grid[i].x();
        entry.s = grid[i].s();
        try {
            entry.value = scalar_curvature(profile, grid[i], h);
            entry.ok = true;
        } catch (const Error&) {
            entry.ok = false;
        }
    });

    double sum = 0.0;
    std::size_t kept = 0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const CurvaturePoint& entry : out.points) {
        if (!entry.ok) {
            ++out.dropped;
            continue;
        }
        ++kept;
        sum += entry.value;
        lo = std::min(lo, entry.value);
        hi = std::max(hi, entry.value);
    }
    if (kept == 0) throw NumericalFailure("every grid point failed in the curvature scan");

    out.mean = sum / static_cast<double>(kept);
    const double denom = std::max(std::abs(out.mean), 1.0e-12);
    out.spread = (hi - lo) / denom;
    out.constant = out.spread <= tol;
    return out;
}

} // namespace hartogs
