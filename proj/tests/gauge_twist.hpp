#pragma once

// Test-only machinery for the potential-gauge invariance property in one
// complex dimension. Shifting the potential by -Re(c z) multiplies the weight
// by e^{m c Re z}; the monomials are then no longer orthogonal, so the
// reproducing kernel comes from the inverse Gram matrix:
//   K'(z, z) = v(z)^T A^{-1} v(z),   A_jk = <z^j, z^k>_twisted.
// Gauge invariance says e^{-m Phi'(z)} K'(z, z) equals the untwisted epsilon.
//
// This route shares nothing with the library's kernel evaluation beyond the
// quadrature primitive, which makes it a usable independent oracle.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "hartogs/profile.hpp"
#include "hartogs/quadrature.hpp"

namespace gauge {

struct TwistedSpace {
    hartogs::Profile profile;
    int m;
    double c;      // twist: Phi' = Phi - Re(c z), c real
    int k_cut;     // monomial degrees 0..k_cut
    Eigen::LDLT<Eigen::MatrixXd> gram;
};

// A_jk = 2 pi int r^{j+k+1} F(r^2)^{m-2} ... for the disc-type profiles the
// volume density of an n = 1 Hartogs domain is G(x), so the full integrand is
//   r^{j+k+1} F(r^2)^m G(r^2) I_{|j-k|}(m c r) * 2 pi / r-scaling,
// with I_d the modified Bessel function from the angular integral.
inline TwistedSpace build_twisted_space(const hartogs::Profile& profile, int m, double c,
                                        int k_cut) {
    const double r_max = std::sqrt(profile.evaluable_limit());
    const bool finite = std::isfinite(profile.x0());

    hartogs::quad::IntegrationOptions opts;
    opts.tol = 1e-13;
    opts.initial_panels = 16;

    Eigen::MatrixXd a(k_cut + 1, k_cut + 1);
    for (int j = 0; j <= k_cut; ++j) {
        for (int k = j; k <= k_cut; ++k) {
            const int d = k - j;
            auto integrand = [&](double r) {
                const double x = r * r;
                const double f = profile.value(x);
                return std::pow(r, j + k + 1) * std::pow(f, m) * profile.g(x) *
                       std::cyl_bessel_i(d, m * c * r);
            };
            const double upper = finite ? r_max : std::min(r_max, 60.0);
            const double value =
                2.0 * std::numbers::pi * hartogs::quad::integrate(integrand, 0.0, upper, opts).value;
            a(j, k) = value;
            a(k, j) = value;
        }
    }
    return TwistedSpace{profile, m, c, k_cut, a.ldlt()};
}

// epsilon at a real point z = r through the twisted route.
inline double twisted_epsilon(const TwistedSpace& space, double r) {
    Eigen::VectorXd v(space.k_cut + 1);
    double p = 1.0;
    for (int k = 0; k <= space.k_cut; ++k) {
        v(k) = p;
        p *= r;
    }
    const double kernel = v.dot(space.gram.solve(v));
    const double f = space.profile.value(r * r);
    // weight e^{-m Phi'} = F(x)^m e^{m c r} at the real point z = r
    return std::pow(f, space.m) * std::exp(space.m * space.c * r) * kernel;
}

} // namespace gauge
