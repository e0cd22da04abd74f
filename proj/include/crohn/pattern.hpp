/**
 * @file pattern.hpp
 * @brief Pattern statistics of a simulated profile: peaks, dominant
 * wavelength and agreement with the linear unstable band.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crohn/solver.hpp"
#include "crohn/stability.hpp"

namespace crohn {

struct PeakSet {
    int count = 0;
    std::vector<double> positions;  ///< m
};

struct SpectralPeak {
    double xi2 = 0.0;         ///< 1/m^2
    double wavelength = 0.0;  ///< m, 2 pi / sqrt(xi2)
    int mode = 0;             ///< index k of the cosine mode cos(pi k x / L)
};

struct PatternReport {
    int peak_count = 0;
    std::vector<double> peak_positions;
    /// Empty when the low-variance path skipped spectral analysis.
    std::optional<double> dominant_xi2;
    std::optional<double> dominant_wavelength;
    bool in_predicted_band = false;
    bool band_checked = false;
    double spatial_variance = 0.0;  ///< (units/m^3)^2
};

/// Default relative height threshold for peak detection.
inline constexpr double kDefaultPeakThreshold = 0.1;
/// Variance below this fraction of beta_bar^2 counts as "no pattern".
inline constexpr double kLowVarianceFraction = 1e-6;

/// Strict local maxima of `field` above rel_threshold * max(field). Plateaus
/// report their midpoint; boundary nodes compare one-sided.
PeakSet detect_peaks(const std::vector<double>& field, const Domain1D& dom, double rel_threshold);
PeakSet detect_peaks(const FieldState& s, const Domain1D& dom, double rel_threshold);

/// Largest-magnitude nonzero cosine mode of (field - mean) under the even
/// extension. Throws DegenerateSpectrum for a constant field.
SpectralPeak dominant_wavelength(const std::vector<double>& field, const Domain1D& dom);
SpectralPeak dominant_wavelength(const FieldState& s, const Domain1D& dom);

/// Population variance of the nodal values.
double spatial_variance(const std::vector<double>& field);

/// Peaks, spectrum and band membership of the beta profile. When the variance
/// is below kLowVarianceFraction * beta_bar^2 the spectrum and band check are skipped.
PatternReport analyze_pattern(const FieldState& s, const Domain1D& dom,
                              const std::optional<Band>& band, double beta_bar,
                              double rel_threshold = kDefaultPeakThreshold);

/// A persistent pattern: variance above the low-variance floor and at least
/// three peaks.
bool has_pattern(const PatternReport& r, double beta_bar);

/// JSON text with keys peak_count, dominant_xi2, dominant_wavelength_m,
/// in_predicted_band, spatial_variance.
std::string report_json(const PatternReport& r);

/// "# key = value" lines suitable for appending to series.csv.
std::string report_metadata(const PatternReport& r);

}  // namespace crohn
