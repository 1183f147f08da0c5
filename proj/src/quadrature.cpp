#include "hartogs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

namespace hartogs::quad {

namespace {

// Kronrod-15 abscissae on [-1, 1] (positive half) and weights; the embedded
// Gauss-7 rule shares the odd-indexed abscissae.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double err;
};

struct PanelOrder {
    bool operator()(const Panel& p, const Panel& q) const { return p.err < q.err; }
};

// Internal marker: a node value of +-inf means the integrand is unbounded on
// the panel, which the driver reports as divergence (with the partial sum).
struct Unbounded {
    double t;
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b,
                     long long& evaluations) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    auto sample = [&](double t) {
        const double y = f(t);
        ++evaluations;
        if (std::isnan(y))
            throw EvaluationError("integrand returned NaN at t = " + std::to_string(t));
        if (std::isinf(y)) throw Unbounded{t};
        return y;
    };

    const double fc = sample(c);
    double kronrod = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    double resabs = kWgk[7] * std::abs(fc);

    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[i];
        const double f1 = sample(c - dx);
        const double f2 = sample(c + dx);
        kronrod += kWgk[i] * (f1 + f2);
        resabs += kWgk[i] * (std::abs(f1) + std::abs(f2));
        if (i % 2 == 1) gauss += kWg[i / 2] * (f1 + f2);
    }

    Panel p{a, b, kronrod * h, 0.0};
    const double diff = std::abs(kronrod - gauss) * std::abs(h);
    // Never report below the rounding floor of the panel itself.
    p.err = std::max(diff, std::abs(resabs * h) * 5.0e-16);
    return p;
}

bool converged(double err, double value, const IntegrationOptions& opts) {
    switch (opts.scale) {
        case Scale::Mixed: return err <= opts.tol * std::max(1.0, std::abs(value));
        case Scale::Relative: return err <= opts.tol * std::abs(value);
        case Scale::Absolute: return err <= opts.tol;
    }
    return false;
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const IntegrationOptions& opts) {
    std::function<double(double)> g = f;
    double lo = a, hi = b;
    if (std::isinf(b)) {
        // t = a + u/(1-u) sends [0,1) to [a, inf).
        g = [f, a](double u) {
            const double om = 1.0 - u;
            return f(a + u / om) / (om * om);
        };
        lo = 0.0;
        hi = 1.0;
    }

    long long evaluations = 0;
    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> queue;

    double total = 0.0, total_err = 0.0;
    try {
        const int init = std::max(1, opts.initial_panels);
        for (int i = 0; i < init; ++i) {
            const double pa = lo + (hi - lo) * i / init;
            const double pb = lo + (hi - lo) * (i + 1) / init;
            Panel p = evaluate_panel(g, pa, pb, evaluations);
            total += p.value;
            total_err += p.err;
            queue.push(p);
        }

        int panels = init;
        while (!converged(total_err, total, opts)) {
            if (panels >= opts.max_panels || evaluations >= opts.max_evaluations)
                throw NumericalFailure(
                    "quadrature did not converge: estimate " + std::to_string(total_err) +
                        " after " + std::to_string(panels) + " panels",
                    total, total_err);

            Panel worst = queue.top();
            queue.pop();
            const double mid = 0.5 * (worst.a + worst.b);
            if (!(worst.a < mid && mid < worst.b))
                throw NumericalFailure("quadrature panel narrower than double spacing", total,
                                       total_err);
            Panel left = evaluate_panel(g, worst.a, mid, evaluations);
            Panel right = evaluate_panel(g, mid, worst.b, evaluations);
            total += left.value + right.value - worst.value;
            total_err += left.err + right.err - worst.err;
            queue.push(left);
            queue.push(right);
            ++panels;
        }
    } catch (const Unbounded& u) {
        throw NumericalFailure("integrand unbounded near t = " + std::to_string(u.t) +
                                   " (divergent integral)",
                               total, total_err);
    }

    return {total, total_err, evaluations};
}

} // namespace hartogs::quad
