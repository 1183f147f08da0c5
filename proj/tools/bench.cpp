// Times the OpenMP kernels against the serial reference and checks that both
// produce identical numbers.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "hartogs/epsilon.hpp"
#include "hartogs/geometry.hpp"
#include "hartogs/moments.hpp"
#include "hartogs/parallel.hpp"

using namespace hartogs;
using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

void report_row(const char* name, double serial_s, double parallel_s, double max_diff) {
    std::printf("%-28s %10.3f ms %10.3f ms %8.2fx %12.3e\n", name, serial_s * 1e3,
                parallel_s * 1e3, serial_s / parallel_s, max_diff);
}

void bench_moment_table(const Profile& profile, int k_max, int m) {
    const auto t0 = Clock::now();
    const MomentTable serial = moment_table(profile, k_max, m, {}, par::Exec::Serial);
    const auto t1 = Clock::now();
    const MomentTable parallel = moment_table(profile, k_max, m, {}, par::Exec::Parallel);
    const auto t2 = Clock::now();

    double max_diff = 0.0;
    for (std::size_t k = 0; k < serial.entries.size(); ++k)
        max_diff = std::max(max_diff,
                            std::abs(serial.entries[k].value - parallel.entries[k].value));
    const std::string name = "moments " + profile.label() + " k<=" + std::to_string(k_max);
    report_row(name.c_str(), seconds(t0, t1), seconds(t1, t2), max_diff);
}

void bench_balanced(const Profile& profile, int n, int m, int samples) {
    BalancedOptions opts;
    opts.sample_count = samples;
    opts.keep_samples = false;

    opts.exec = par::Exec::Serial;
    const auto t0 = Clock::now();
    const BalancedVerdict serial = balanced_verdict(profile, n, m, opts);
    const auto t1 = Clock::now();
    opts.exec = par::Exec::Parallel;
    const BalancedVerdict parallel = balanced_verdict(profile, n, m, opts);
    const auto t2 = Clock::now();

    const double max_diff =
        std::abs(serial.constant_estimate - parallel.constant_estimate) +
        std::abs(serial.relative_spread - parallel.relative_spread);
    const std::string name = "balanced " + profile.label() + " x" + std::to_string(samples);
    report_row(name.c_str(), seconds(t0, t1), seconds(t1, t2), max_diff);
}

void bench_curvature(const Profile& profile, int n, int grid) {
    SampleBox box;
    box.x_hi = 0.7 * std::min(profile.x_cap(), profile.x0());
    box.x_lo = 0.05 * box.x_hi;
    box.w_hi = 0.7;
    const std::vector<DomainPoint> pts = sample_points(profile, n, grid, 7, box);

    const auto t0 = Clock::now();
    const CurvatureScan serial = curvature_scan(profile, pts, 1e-4, 1e-3, par::Exec::Serial);
    const auto t1 = Clock::now();
    const CurvatureScan parallel = curvature_scan(profile, pts, 1e-4, 1e-3, par::Exec::Parallel);
    const auto t2 = Clock::now();

    double max_diff = std::abs(serial.mean - parallel.mean);
    for (std::size_t i = 0; i < serial.points.size(); ++i)
        if (serial.points[i].ok && parallel.points[i].ok)
            max_diff = std::max(max_diff,
                                std::abs(serial.points[i].value - parallel.points[i].value));
    const std::string name = "curvature " + profile.label() + " x" + std::to_string(grid);
    report_row(name.c_str(), seconds(t0, t1), seconds(t1, t2), max_diff);
}

} // namespace

int main() {
    std::printf("threads: %d\n", par::max_threads());
    std::printf("%-28s %13s %13s %9s %12s\n", "kernel", "serial", "parallel", "speedup",
                "max |diff|");

    const Profile hyperbolic = make_builtin_profile("hyperbolic");
    const Profile springer = make_builtin_profile("springer");

    bench_moment_table(springer, 400, 3);
    bench_moment_table(hyperbolic, 400, 6);
    bench_balanced(hyperbolic, 2, 4, 20000);
    bench_balanced(springer, 2, 4, 20000);
    bench_curvature(hyperbolic, 2, 400);
    bench_curvature(springer, 2, 400);
    return 0;
}
