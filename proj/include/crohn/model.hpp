/**
 * @file model.hpp
 * @brief Bacteria/phagocyte kinetics and the positive homogeneous steady state.
 *
 * The model couples a bacterial density beta and a phagocyte density gamma:
 *
 *   d_t beta  - d_b beta''  = r_b (1 - beta/b_i) beta - a beta gamma / (s_b + beta)
 *                             + f_e (1 - beta/b_i) gamma
 *   d_t gamma - d_c gamma'' = f_b beta - r_c gamma
 *
 * Rates are in 1/min, diffusivities in m^2/min and densities in units/m^3.
 */
#pragma once

#include <utility>

namespace crohn {

struct ModelParams {
    double r_b = 0.0;  ///< bacterial reproduction rate (1/min)
    double r_c = 0.0;  ///< phagocyte death rate (1/min)
    double d_b = 0.0;  ///< bacterial diffusivity (m^2/min)
    double d_c = 0.0;  ///< phagocyte diffusivity (m^2/min)
    double b_i = 0.0;  ///< luminal carrying capacity (units/m^3)
    double f_b = 0.0;  ///< immune recruitment rate (1/min)
    double a = 0.0;    ///< maximal phagocytosis rate, 1/handling time (1/min)
    double s_b = 0.0;  ///< Holling-II half-saturation density (units/m^3)
    double f_e = 0.0;  ///< epithelial porosity feedback (1/min)

    /// Equilibrium phagocyte/bacteria ratio f_b / r_c.
    double kappa() const { return f_b / r_c; }
    /// Diffusivity ratio d_b / d_c.
    double delta() const { return d_b / d_c; }
    /// Handling time 1/a (min).
    double handling_time() const { return 1.0 / a; }
    /// Phagocytosis efficiency a / s_b.
    double phagocytosis_efficiency() const { return a / s_b; }

    /// Throws DomainError unless all nine coefficients are finite and strictly positive.
    void validate() const;

    /// Weaker check used by the time integrator: all coefficients finite and
    /// non-negative, with the ones that appear in denominators or as
    /// diffusivities (b_i, s_b, r_c, d_b, d_c) strictly positive.
    void validate_dynamics() const;

    bool operator==(const ModelParams&) const = default;
};

/// Table 1 values, with f_e as printed (0.0856).
ModelParams table1_params();

/// Table 1 values with f_e recomputed so that beta_bar = 0.3 b_i holds exactly.
ModelParams table1_calibrated_params();

/// Equilibrium fraction used to calibrate f_e for the Table 1 set.
inline constexpr double kTable1Theta = 0.3;

struct Equilibrium {
    double beta_bar = 0.0;   ///< units/m^3
    double gamma_bar = 0.0;  ///< units/m^3, kappa * beta_bar
    double theta = 0.0;      ///< beta_bar / b_i
};

struct ReactionRates {
    double beta = 0.0;   ///< d_t beta from kinetics alone
    double gamma = 0.0;  ///< d_t gamma from kinetics alone
};

/// Reaction right-hand sides of the model at a single point, physical units.
/// Throws DomainError on negative or non-finite densities.
ReactionRates reaction_terms(const ModelParams& p, double beta, double gamma);

/// Same kinetics on densities scaled by b_i (u = beta/b_i, v = gamma/b_i).
/// Returns rates of the scaled densities. No validation; used in inner loops.
inline ReactionRates scaled_reaction_terms(const ModelParams& p, double half_sat_scaled,
                                           double u, double v) {
    const double logistic = 1.0 - u;
    return {p.r_b * logistic * u - p.a * u * v / (half_sat_scaled + u) + p.f_e * logistic * v,
            p.f_b * u - p.r_c * v};
}

/// Steady-state characterization F(beta) on physical densities:
/// (r_b + f_e kappa)(1 - beta/b_i) - a kappa beta / (s_b + beta).
double equilibrium_residual(const ModelParams& p, double beta);

/// Unique root of the steady-state characterization in (0, b_i), found by
/// bisection and cross-checked against the closed-form quadratic root.
Equilibrium steady_state(const ModelParams& p);

/// The closed-form root in b_i-scaled units (theta). Exposed for testing.
double steady_state_theta_closed_form(const ModelParams& p);

/// f_e that places the equilibrium at beta_bar = theta_target * b_i.
/// The f_e field of `p` is ignored; a may be zero. Throws
/// InfeasibleCalibration when the result is not strictly positive.
double calibrate_fe(const ModelParams& p, double theta_target);

/// Convenience: copy of `p` with f_e replaced by calibrate_fe(p, theta_target).
ModelParams with_calibrated_fe(ModelParams p, double theta_target);

}  // namespace crohn
