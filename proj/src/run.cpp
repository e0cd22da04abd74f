#include "crohn/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "crohn/errors.hpp"
#include "crohn/pattern.hpp"
#include "crohn/scan.hpp"
#include "crohn/stability.hpp"

namespace crohn {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + path.string());
    f << content;
    if (!f) throw Error("failed writing " + path.string());
}

std::string sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

std::string minutes_label(double t) {
    char buf[40];
    if (std::abs(t - std::round(t)) < 1e-9) {
        std::snprintf(buf, sizeof buf, "%.0f", std::round(t));
    } else {
        std::snprintf(buf, sizeof buf, "%g", t);
    }
    return buf;
}

std::string snapshot_csv(const FieldState& s, const Domain1D& dom) {
    std::string out = "x,beta,gamma\n";
    out.reserve(s.beta.size() * 64);
    char buf[96];
    for (std::size_t i = 0; i < s.beta.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e\n", dom.x(static_cast<int>(i)),
                      s.beta[i], s.gamma[i]);
        out += buf;
    }
    return out;
}

struct Linear {
    Equilibrium eq;
    Jacobian2x2 j;
    StabilityVerdict verdict;
};

Linear linear_analysis(const ModelParams& p) {
    Linear l;
    l.eq = steady_state(p);
    l.j = jacobian(p, l.eq);
    l.verdict = turing_classify(p, l.eq, l.j);
    return l;
}

void run_steady(const RunConfig& cfg, std::ostream& out) {
    const Equilibrium eq = steady_state(cfg.params);
    out << "beta_bar = " << sci(eq.beta_bar) << "\n"
        << "gamma_bar = " << sci(eq.gamma_bar) << "\n"
        << "theta = " << sci(eq.theta) << "\n"
        << "f_e = " << sci(cfg.params.f_e) << (cfg.fe_calibrated ? " (calibrated)" : " (given)")
        << "\n";
}

void run_stability(const RunConfig& cfg, std::ostream& out) {
    const Linear l = linear_analysis(cfg.params);
    out << "m11 = " << sci(l.j.m11) << "\n"
        << "m12 = " << sci(l.j.m12) << "\n"
        << "m21 = " << sci(l.j.m21) << "\n"
        << "m22 = " << sci(l.j.m22) << "\n"
        << "trace = " << sci(l.verdict.trace) << "\n"
        << "det = " << sci(l.verdict.det) << "\n"
        << "ode_stable = " << (l.verdict.ode_stable ? "true" : "false") << "\n"
        << "turing_condition_value = " << sci(l.verdict.turing_condition_value) << "\n"
        << "turing = " << (l.verdict.turing ? "true" : "false") << "\n";
}

void run_dispersion(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const Linear l = linear_analysis(cfg.params);
    const DispersionCurve curve = default_dispersion(cfg.params, l.j, cfg.dispersion_samples);
    std::string csv = "xi2,growth_rate\n";
    for (std::size_t i = 0; i < curve.xi2_samples.size(); ++i) {
        csv += sci(curve.xi2_samples[i]) + "," + sci(curve.growth_rates[i]) + "\n";
    }
    write_file(dir / "dispersion.csv", csv);
    if (const auto band = unstable_band(curve)) {
        out << "lambda_minus = " << sci(band->first) << "\n"
            << "lambda_plus = " << sci(band->second) << "\n";
    } else {
        out << "band = empty\n";
    }
}

void run_simulate(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const Linear l = linear_analysis(cfg.params);
    const std::optional<Band> band = band_roots(cfg.params, l.j);

    SimConfig sim = cfg.sim;
    sim.initial.seed = cfg.seed;

    std::string series = "t,beta_variance,gamma_variance,beta_max,peak_count\n";
    FieldState last;
    int snapshots = 0;
    simulate(cfg.params, cfg.domain, sim, [&](const FieldState& s) {
        write_file(dir / ("snap_t" + minutes_label(s.time) + ".csv"), snapshot_csv(s, cfg.domain));
        double beta_max = 0.0;
        for (double b : s.beta) beta_max = std::max(beta_max, b);
        const PeakSet peaks = detect_peaks(s.beta, cfg.domain, kDefaultPeakThreshold);
        series += sci(s.time) + "," + sci(spatial_variance(s.beta)) + "," +
                  sci(spatial_variance(s.gamma)) + "," + sci(beta_max) + "," +
                  std::to_string(peaks.count) + "\n";
        last = s;
        ++snapshots;
    });

    const PatternReport report = analyze_pattern(last, cfg.domain, band, l.eq.beta_bar);
    write_file(dir / "series.csv", series + report_metadata(report));
    write_file(dir / "report.json", report_json(report));

    out << "snapshots = " << snapshots << "\n"
        << "peak_count = " << report.peak_count << "\n";
    if (report.dominant_xi2) {
        out << "dominant_xi2 = " << sci(*report.dominant_xi2) << "\n"
            << "dominant_wavelength_m = " << sci(*report.dominant_wavelength) << "\n";
    }
    out << "in_predicted_band = " << (report.in_predicted_band ? "true" : "false") << "\n"
        << "spatial_variance = " << sci(report.spatial_variance) << "\n";
}

void run_scan(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const ScanGrid grid = scan_region(cfg.params, cfg.scan_r_c, cfg.scan_a, cfg.scan_threads);
    write_file(dir / "scan.csv", scan_csv(grid));
    std::size_t counts[4] = {0, 0, 0, 0};
    for (Verdict v : grid.verdicts) ++counts[static_cast<int>(v) + 1];
    out << "cells = " << grid.verdicts.size() << "\n"
        << "turing = " << counts[3] << "\n"
        << "stable_only = " << counts[2] << "\n"
        << "ode_unstable = " << counts[1] << "\n"
        << "infeasible = " << counts[0] << "\n";
}

}  // namespace

std::optional<Command> command_from_name(std::string_view name) {
    if (name == "steady") return Command::Steady;
    if (name == "stability") return Command::Stability;
    if (name == "dispersion") return Command::Dispersion;
    if (name == "simulate") return Command::Simulate;
    if (name == "scan") return Command::Scan;
    return std::nullopt;
}

void run(Command cmd, const RunConfig& cfg, std::ostream& out) {
    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + cfg.out_dir + ": " + ec.message());
    write_file(dir / "manifest.txt", manifest_text(cfg));

    switch (cmd) {
        case Command::Steady: run_steady(cfg, out); break;
        case Command::Stability: run_stability(cfg, out); break;
        case Command::Dispersion: run_dispersion(cfg, dir, out); break;
        case Command::Simulate: run_simulate(cfg, dir, out); break;
        case Command::Scan: run_scan(cfg, dir, out); break;
    }
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
        dynamic_cast<const InfeasibleCalibration*>(&e)) {
        return 1;
    }
    return 2;
}

}  // namespace crohn
