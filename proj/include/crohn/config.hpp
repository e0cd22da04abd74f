/**
 * @file config.hpp
 * @brief Flat `key = value` run configuration with Table 1 defaults.
 *
 * Lines are `key = value`; `#` starts a comment. Unknown keys are rejected.
 * When `f_e` is omitted the Table 1 value is used, unless `theta_target` is
 * given (or `f_e = auto`), in which case f_e is calibrated so that the
 * equilibrium sits at beta_bar = theta_target * b_i.
 */
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "crohn/model.hpp"
#include "crohn/scan.hpp"
#include "crohn/solver.hpp"

namespace crohn {

struct RunConfig {
    ModelParams params = table1_params();
    bool fe_calibrated = false;
    double theta_target = kTable1Theta;

    Domain1D domain;
    SimConfig sim;

    AxisRange scan_r_c = default_r_c_range();
    AxisRange scan_a = default_a_range();
    unsigned scan_threads = 0;

    int dispersion_samples = 512;

    std::string out_dir = "out";
    std::uint64_t seed = 0;
};

/// Parses and validates configuration text. Throws ConfigError carrying the
/// line number for syntax errors and naming the key for invalid values.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file; a missing file is a ConfigError.
RunConfig load_config(const std::string& path);

/// Fully resolved configuration in the same format; parse_config(manifest_text(c))
/// reproduces c (f_e is written as a number).
std::string manifest_text(const RunConfig& cfg);

}  // namespace crohn
