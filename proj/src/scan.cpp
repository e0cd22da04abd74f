#include "crohn/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>

#include "crohn/errors.hpp"
#include "crohn/stability.hpp"

namespace crohn {

double AxisRange::at(int i) const {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    return lo + (hi - lo) * t;
}

AxisRange default_r_c_range() { return {1e-3, 5e-2, 200}; }
AxisRange default_a_range() { return {5e-2, 1.0, 200}; }

Verdict classify_point(const ModelParams& base, double r_c, double a, double theta) {
    ModelParams p = base;
    p.r_c = r_c;
    p.a = a;
    p.f_b = kRecruitmentFraction * r_c;
    try {
        p.f_e = calibrate_fe(p, theta);
        const Equilibrium eq = steady_state(p);
        const Jacobian2x2 j = jacobian(p, eq);
        const StabilityVerdict v = turing_classify(p, eq, j);
        if (v.turing) return Verdict::Turing;
        if (!v.ode_stable) return Verdict::OdeUnstable;
        return Verdict::StableOnly;
    } catch (const Error&) {
        return Verdict::Infeasible;
    }
}

ScanGrid scan_region(const ModelParams& base, const AxisRange& r_c_range,
                     const AxisRange& a_range, unsigned threads) {
    for (const AxisRange* r : {&r_c_range, &a_range}) {
        if (r->points < 2 || !(r->lo < r->hi) || !(r->lo >= 0.0) || !std::isfinite(r->hi)) {
            throw DomainError("scan_region: ranges must satisfy 0 <= lo < hi with >= 2 points");
        }
    }
    ScanGrid grid;
    for (int i = 0; i < r_c_range.points; ++i) grid.r_c_axis.push_back(r_c_range.at(i));
    for (int i = 0; i < a_range.points; ++i) grid.a_axis.push_back(a_range.at(i));
    const std::size_t rows = grid.r_c_axis.size();
    const std::size_t cols = grid.a_axis.size();
    grid.verdicts.assign(rows * cols, Verdict::Infeasible);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, rows));

    // Rows are dealt round-robin; each worker writes only its own rows.
    auto work = [&](unsigned worker) {
        for (std::size_t r = worker; r < rows; r += threads) {
            for (std::size_t c = 0; c < cols; ++c) {
                grid.verdicts[r * cols + c] = classify_point(base, grid.r_c_axis[r], grid.a_axis[c]);
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    }
    return grid;
}

std::string scan_csv(const ScanGrid& grid) {
    std::string out = "r_c\\a";
    char buf[64];
    for (double a : grid.a_axis) {
        std::snprintf(buf, sizeof buf, ",%.12e", a);
        out += buf;
    }
    out += '\n';
    for (std::size_t r = 0; r < grid.r_c_axis.size(); ++r) {
        std::snprintf(buf, sizeof buf, "%.12e", grid.r_c_axis[r]);
        out += buf;
        for (std::size_t c = 0; c < grid.a_axis.size(); ++c) {
            out += ',';
            out += std::to_string(static_cast<int>(grid.at(r, c)));
        }
        out += '\n';
    }
    return out;
}

}  // namespace crohn
