#pragma once

#include <string>
#include <vector>

#include "crohn/model.hpp"

namespace crohn {

/// Integer codes match the scan.csv encoding.
enum class Verdict : int {
    Infeasible = -1,
    OdeUnstable = 0,
    StableOnly = 1,
    Turing = 2,
};

struct AxisRange {
    double lo = 0.0;
    double hi = 0.0;
    int points = 2;

    /// lo + (hi - lo) * i / (points - 1); refined grids reproduce coarse nodes exactly.
    double at(int i) const;
};

struct ScanGrid {
    std::vector<double> r_c_axis;
    std::vector<double> a_axis;
    std::vector<Verdict> verdicts;  ///< row-major, r_c index major

    Verdict at(std::size_t r_c_index, std::size_t a_index) const {
        return verdicts[r_c_index * a_axis.size() + a_index];
    }
};

/// Recipe shared by scan cells: f_b = 0.1 r_c and f_e calibrated at theta.
inline constexpr double kRecruitmentFraction = 0.1;

/// Classifies a single (r_c, a) pair with the calibration recipe applied to `base`.
Verdict classify_point(const ModelParams& base, double r_c, double a,
                       double theta = kTable1Theta);

/// Classifies the (r_c, a) rectangle, spreading rows over `threads` workers
/// (0 = hardware concurrency). Throws DomainError on empty ranges.
ScanGrid scan_region(const ModelParams& base, const AxisRange& r_c_range,
                     const AxisRange& a_range, unsigned threads = 0);

/// Default Fig. 3 rectangle: r_c in [1e-3, 5e-2], a in [5e-2, 1], 200 x 200.
AxisRange default_r_c_range();
AxisRange default_a_range();

/// CSV with a header row of a values, a leading column of r_c values and
/// integer verdict codes.
std::string scan_csv(const ScanGrid& grid);

}  // namespace crohn
