#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "crohn/errors.hpp"
#include "crohn/model.hpp"
#include "crohn/pattern.hpp"
#include "crohn/solver.hpp"
#include "json.hpp"

using namespace crohn;

namespace {

Domain1D domain(int n, double length) {
    Domain1D d;
    d.n_points = n;
    d.length = length;
    return d;
}

std::vector<double> cosine_field(const Domain1D& d, double wavelength, double offset,
                                 double phase_shift = 0.0) {
    std::vector<double> f(static_cast<std::size_t>(d.n_points));
    for (int i = 0; i < d.n_points; ++i) {
        const double x = d.x(i) - phase_shift;
        f[static_cast<std::size_t>(i)] =
            2.5e15 * (offset + std::cos(2.0 * std::numbers::pi * x / wavelength));
    }
    return f;
}

}  // namespace

TEST_CASE("constant field has no peaks and no spectrum") {
    const Domain1D d = domain(64, 1e-3);
    const std::vector<double> flat(64, 7.0);
    CHECK(detect_peaks(flat, d, 0.1).count == 0);
    CHECK_THROWS_AS(dominant_wavelength(flat, d), DegenerateSpectrum);
}

TEST_CASE("peaks of a shifted cosine lie one wavelength apart") {
    const double lambda0 = 2e-4;
    const Domain1D d = domain(1001, 5 * lambda0);
    const auto f = cosine_field(d, lambda0, 2.0, lambda0 / 2);
    const PeakSet peaks = detect_peaks(f, d, 0.1);
    REQUIRE(peaks.count == 5);
    for (int k = 0; k < 5; ++k) {
        const double expected = lambda0 / 2 + k * lambda0;
        CHECK(std::abs(peaks.positions[static_cast<std::size_t>(k)] - expected) <= d.dx());
    }
}

TEST_CASE("boundary maxima count one-sided") {
    const double lambda0 = 2e-4;
    const Domain1D d = domain(1001, 5 * lambda0);
    const auto f = cosine_field(d, lambda0, 2.0);
    const PeakSet peaks = detect_peaks(f, d, 0.1);
    // Maxima at 0, lambda0, ..., 5 lambda0: four interior plus both ends.
    REQUIRE(peaks.count == 6);
    CHECK(peaks.positions.front() == 0.0);
    CHECK(peaks.positions.back() == doctest::Approx(d.length));
}

TEST_CASE("plateau reports its midpoint") {
    const Domain1D d = domain(16, 15.0);  // dx = 1
    std::vector<double> f(16, 0.0);
    f[5] = f[6] = f[7] = 3.0;
    f[12] = 1.0;
    const PeakSet peaks = detect_peaks(f, d, 0.1);
    REQUIRE(peaks.count == 2);
    CHECK(peaks.positions[0] == doctest::Approx(6.0));
    CHECK(peaks.positions[1] == doctest::Approx(12.0));
    // Below the relative threshold.
    CHECK(detect_peaks(f, d, 0.5).count == 1);
    CHECK_THROWS_AS(detect_peaks(f, d, 0.0), DomainError);
    CHECK_THROWS_AS(detect_peaks(f, d, 1.0), DomainError);
}

TEST_CASE("peak detection is scale invariant") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Domain1D d = domain(400, 1e-2);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> f(400);
        for (double& v : f) v = u(rng);
        const PeakSet base = detect_peaks(f, d, 0.3);
        for (double s : {1e-3, 4.0, 1e17}) {
            std::vector<double> g = f;
            for (double& v : g) v *= s;
            const PeakSet scaled = detect_peaks(g, d, 0.3);
            CHECK(scaled.count == base.count);
            CHECK(scaled.positions == base.positions);
        }
    }
}

TEST_CASE("single-mode fields recover their wavelength") {
    const Domain1D d = domain(3000, 0.03);
    // Bin width in wavelength near lambda: lambda^2 / (2 L).
    for (int mode : {3, 17, 60, 306, 612, 1000}) {
        const double lambda0 = 2.0 * d.length / mode;
        const SpectralPeak peak = dominant_wavelength(cosine_field(d, lambda0, 1.0), d);
        INFO("mode " << mode);
        CHECK(peak.mode == mode);
        CHECK(std::abs(peak.wavelength - lambda0) <= lambda0 * lambda0 / (2 * d.length));
        CHECK(peak.wavelength == doctest::Approx(2 * std::numbers::pi / std::sqrt(peak.xi2)));
    }
    // Off-grid wavelength: still within one bin.
    const double lambda0 = 1.2345e-4;
    const SpectralPeak peak = dominant_wavelength(cosine_field(d, lambda0, 1.0, 3e-5), d);
    const double k_exact = 2.0 * d.length / lambda0;
    CHECK(std::abs(peak.mode - k_exact) <= 1.0);
}

TEST_CASE("variance and report") {
    const Domain1D d = domain(3000, 0.03);
    const double lambda0 = 2.0 * d.length / 306;
    FieldState s;
    s.beta = cosine_field(d, lambda0, 2.0);
    s.gamma.assign(s.beta.size(), 0.0);

    const double xi2 = std::pow(2 * std::numbers::pi / lambda0, 2);
    const PatternReport in = analyze_pattern(s, d, Band{xi2 / 10, xi2 * 10}, 3e16);
    CHECK(in.band_checked);
    CHECK(in.in_predicted_band);
    CHECK(in.dominant_xi2.value() == doctest::Approx(xi2));
    CHECK(in.peak_count >= 3);
    CHECK(has_pattern(in, 3e16));
    // Variance of A cos: A^2/2 (sampled over whole periods plus one endpoint).
    CHECK(in.spatial_variance == doctest::Approx(2.5e15 * 2.5e15 / 2).epsilon(1e-3));

    const PatternReport out = analyze_pattern(s, d, Band{xi2 * 2, xi2 * 10}, 3e16);
    CHECK_FALSE(out.in_predicted_band);
    const PatternReport none = analyze_pattern(s, d, std::nullopt, 3e16);
    CHECK_FALSE(none.in_predicted_band);

    const auto j = nlohmann::json::parse(report_json(in));
    CHECK(j.size() == 5);
    CHECK(j.at("peak_count").get<int>() == in.peak_count);
    CHECK(j.at("dominant_xi2").get<double>() == *in.dominant_xi2);
    CHECK(j.at("dominant_wavelength_m").get<double>() == *in.dominant_wavelength);
    CHECK(j.at("in_predicted_band").get<bool>());
    CHECK(j.at("spatial_variance").get<double>() == in.spatial_variance);
    CHECK(report_metadata(in).find("# in_predicted_band = true") != std::string::npos);
}

TEST_CASE("low-variance fields skip the band check") {
    const Domain1D d = domain(100, 1e-3);
    FieldState s;
    s.beta.assign(100, 3e16);
    s.gamma.assign(100, 3e15);
    s.beta[40] *= 1.0 + 1e-12;
    const PatternReport r = analyze_pattern(s, d, Band{1.0, 1e12}, 3e16);
    CHECK_FALSE(r.band_checked);
    CHECK_FALSE(r.in_predicted_band);
    CHECK_FALSE(r.dominant_xi2.has_value());
    CHECK_FALSE(has_pattern(r, 3e16));
    const auto j = nlohmann::json::parse(report_json(r));
    CHECK(j.at("dominant_xi2").is_null());
}

TEST_CASE("dominant wavelength survives halving dx") {
    for (const ModelParams& p : {table1_params(), table1_calibrated_params()}) {
        double wavelength[2];
        int i = 0;
        for (int n : {3000, 5999}) {
            const Domain1D d = domain(n, 0.03);
            SimConfig cfg;
            cfg.snapshot_every = cfg.t_end;
            const FieldState last = simulate(p, d, cfg).back();
            wavelength[i++] = dominant_wavelength(last.beta, d).wavelength;
        }
        INFO("f_e = " << p.f_e);
        CHECK(std::abs(wavelength[1] - wavelength[0]) < 0.05 * wavelength[0]);
    }
}
