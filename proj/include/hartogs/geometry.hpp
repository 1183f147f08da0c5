#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hartogs/parallel.hpp"
#include "hartogs/profile.hpp"

namespace hartogs {

/// First and second partial derivatives of a radial scalar rho(x, s), where
/// x = |z0|^2 and s = |z1|^2 + ... + |z_{n-1}|^2.
struct RadialJet2 {
    double fx = 0.0, fs = 0.0;
    double fxx = 0.0, fxs = 0.0, fss = 0.0;
};

/// Mixed complex Hessian d^2 rho / dz_a dzbar_b of a radial scalar at p,
/// assembled exactly from the radial jet by the chain rule. Hermitian by
/// construction.
Eigen::MatrixXcd hessian_from_radial(const RadialJet2& jet, const DomainPoint& p);

struct MetricSample {
    DomainPoint point;
    Eigen::MatrixXcd g;
    double det_g = 0.0;
    std::optional<double> scalar_curvature;
};

/// Metric tensor g_ab = d^2 Phi / dz_a dzbar_b with Phi = -log(F(x) - s),
/// from the analytic radial jet of the potential.
MetricSample metric_tensor(const Profile& profile, const DomainPoint& p);

/// Independent check of the metric assembly: max absolute deviation between
/// the analytic g and a central-difference Wirtinger Hessian of the potential
/// with step h (real and imaginary displacements). Requires interior margin
/// of 4h per coordinate.
double metric_fd_check(const Profile& profile, const DomainPoint& p, double h);

struct VolumeDensity {
    double det_g = 0.0;
    double closed_form = 0.0; // F(x)^2 G(x) / (F(x) - s)^(n+1)
    double defect = 0.0;      // relative difference of the two routes
};

VolumeDensity volume_density(const Profile& profile, const DomainPoint& p);

/// Scalar curvature under the convention
///   R_ab = -d^2 log det g / dz_a dzbar_b,  S = 2 tr(g^-1 R).
/// log det g comes from the closed-form density; its radial derivatives are
/// analytic except for log G, which is centrally differenced in t with one
/// Richardson pass (steps h and h/2).
double scalar_curvature(const Profile& profile, const DomainPoint& p, double h = 1.0e-4);

struct CurvaturePoint {
    double x = 0.0;
    double s = 0.0;
    double value = 0.0;
    bool ok = false;
};

struct CurvatureScan {
    bool constant = false;
    double spread = 0.0; // (max - min) / |mean|
    double mean = 0.0;
    std::vector<CurvaturePoint> points;
    int dropped = 0;
};

/// Per-point failures are dropped; everything failing is an error.
CurvatureScan curvature_scan(const Profile& profile, const std::vector<DomainPoint>& grid,
                             double h, double tol, par::Exec exec = par::Exec::Parallel);

} // namespace hartogs
