#include "crohn/pattern.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <numeric>

#include "crohn/errors.hpp"
#include "json.hpp"

namespace crohn {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// DCT-I of the input: the DFT of its even extension of period 2(n-1).
std::vector<double> cosine_spectrum(std::vector<double> in) {
    const int n = static_cast<int>(in.size());
    std::vector<double> out(in.size());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_r2r_1d(n, in.data(), out.data(), FFTW_REDFT00, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace

PeakSet detect_peaks(const std::vector<double>& field, const Domain1D& dom, double rel_threshold) {
    if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) {
        throw DomainError("detect_peaks: rel_threshold must lie in (0, 1)");
    }
    PeakSet peaks;
    const std::size_t n = field.size();
    if (n == 0) return peaks;
    const double top = *std::max_element(field.begin(), field.end());
    const double cutoff = rel_threshold * top;

    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && field[j + 1] == field[i]) ++j;
        const double value = field[i];
        const bool has_left = i > 0;
        const bool has_right = j + 1 < n;
        const bool left_ok = !has_left || field[i - 1] < value;
        const bool right_ok = !has_right || field[j + 1] < value;
        if ((has_left || has_right) && left_ok && right_ok && value > cutoff) {
            ++peaks.count;
            peaks.positions.push_back(0.5 * (dom.x(static_cast<int>(i)) + dom.x(static_cast<int>(j))));
        }
        i = j + 1;
    }
    return peaks;
}

PeakSet detect_peaks(const FieldState& s, const Domain1D& dom, double rel_threshold) {
    return detect_peaks(s.beta, dom, rel_threshold);
}

SpectralPeak dominant_wavelength(const std::vector<double>& field, const Domain1D& dom) {
    dom.validate();
    if (field.size() != static_cast<std::size_t>(dom.n_points)) {
        throw DomainError("dominant_wavelength: field size does not match the domain");
    }
    const double mean = std::accumulate(field.begin(), field.end(), 0.0) /
                        static_cast<double>(field.size());
    double spread = 0.0;
    double scale = 0.0;
    std::vector<double> centred(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        centred[i] = field[i] - mean;
        spread = std::max(spread, std::abs(centred[i]));
        scale = std::max(scale, std::abs(field[i]));
    }
    if (!(spread > 1e-14 * scale)) {
        throw DegenerateSpectrum("dominant_wavelength: field is constant");
    }

    const std::vector<double> spectrum = cosine_spectrum(std::move(centred));
    std::size_t best = 1;
    for (std::size_t k = 2; k < spectrum.size(); ++k) {
        if (std::abs(spectrum[k]) > std::abs(spectrum[best])) best = k;
    }
    SpectralPeak peak;
    peak.mode = static_cast<int>(best);
    const double xi = std::numbers::pi * static_cast<double>(best) / dom.length;
    peak.xi2 = xi * xi;
    peak.wavelength = 2.0 * dom.length / static_cast<double>(best);
    return peak;
}

SpectralPeak dominant_wavelength(const FieldState& s, const Domain1D& dom) {
    return dominant_wavelength(s.beta, dom);
}

double spatial_variance(const std::vector<double>& field) {
    if (field.empty()) return 0.0;
    const double n = static_cast<double>(field.size());
    const double mean = std::accumulate(field.begin(), field.end(), 0.0) / n;
    double acc = 0.0;
    for (double f : field) acc += (f - mean) * (f - mean);
    return acc / n;
}

PatternReport analyze_pattern(const FieldState& s, const Domain1D& dom,
                              const std::optional<Band>& band, double beta_bar,
                              double rel_threshold) {
    PatternReport r;
    const PeakSet peaks = detect_peaks(s.beta, dom, rel_threshold);
    r.peak_count = peaks.count;
    r.peak_positions = peaks.positions;
    r.spatial_variance = spatial_variance(s.beta);
    if (r.spatial_variance < kLowVarianceFraction * beta_bar * beta_bar) return r;

    const SpectralPeak dom_mode = dominant_wavelength(s.beta, dom);
    r.dominant_xi2 = dom_mode.xi2;
    r.dominant_wavelength = dom_mode.wavelength;
    r.band_checked = true;
    r.in_predicted_band =
        band.has_value() && dom_mode.xi2 > band->first && dom_mode.xi2 < band->second;
    return r;
}

bool has_pattern(const PatternReport& r, double beta_bar) {
    return r.spatial_variance >= kLowVarianceFraction * beta_bar * beta_bar && r.peak_count >= 3;
}

std::string report_json(const PatternReport& r) {
    nlohmann::ordered_json j;
    j["peak_count"] = r.peak_count;
    j["dominant_xi2"] = r.dominant_xi2 ? nlohmann::ordered_json(*r.dominant_xi2) : nullptr;
    j["dominant_wavelength_m"] =
        r.dominant_wavelength ? nlohmann::ordered_json(*r.dominant_wavelength) : nullptr;
    j["in_predicted_band"] = r.in_predicted_band;
    j["spatial_variance"] = r.spatial_variance;
    return j.dump(2) + "\n";
}

std::string report_metadata(const PatternReport& r) {
    char buf[128];
    std::string out;
    std::snprintf(buf, sizeof buf, "# peak_count = %d\n", r.peak_count);
    out += buf;
    if (r.dominant_xi2) {
        std::snprintf(buf, sizeof buf, "# dominant_xi2 = %.12e\n", *r.dominant_xi2);
        out += buf;
        std::snprintf(buf, sizeof buf, "# dominant_wavelength_m = %.12e\n", *r.dominant_wavelength);
        out += buf;
    } else {
        out += "# dominant_xi2 = none\n# dominant_wavelength_m = none\n";
    }
    out += std::string("# in_predicted_band = ") + (r.in_predicted_band ? "true" : "false") + "\n";
    std::snprintf(buf, sizeof buf, "# spatial_variance = %.12e\n", r.spatial_variance);
    out += buf;
    return out;
}

}  // namespace crohn
