/**
 * @file stability.hpp
 * @brief Linearization at the positive equilibrium: ODE stability, the Turing
 * condition and the dispersion relation of Fourier modes.
 */
#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "crohn/model.hpp"

namespace crohn {

/// Linearization matrix M at (beta_bar, gamma_bar), entries in 1/min.
struct Jacobian2x2 {
    double m11 = 0.0;
    double m12 = 0.0;
    double m21 = 0.0;
    double m22 = 0.0;

    double trace() const { return m11 + m22; }
    double det() const { return m11 * m22 - m12 * m21; }
};

struct StabilityVerdict {
    double trace = 0.0;  ///< 1/min
    double det = 0.0;    ///< 1/min^2
    bool ode_stable = false;
    /// a kappa beta_bar^2/(s_b+beta_bar)^2 - r_b theta - f_e kappa (1/min).
    /// Only meaningful after turing_classify.
    double turing_condition_value = 0.0;
    bool turing = false;
};

struct DispersionCurve {
    std::vector<double> xi2_samples;   ///< 1/m^2
    std::vector<double> growth_rates;  ///< 1/min
    double lambda_minus = 0.0;         ///< 1/m^2, lower root of a2(xi^2)
    double lambda_plus = 0.0;          ///< 1/m^2, upper root of a2(xi^2)
    bool band_nonempty = false;
};

/// Band endpoints (lambda_minus, lambda_plus) in 1/m^2.
using Band = std::pair<double, double>;

Jacobian2x2 jacobian(const ModelParams& p, const Equilibrium& eq);

/// trace/det/ode_stable. Throws InternalError when det(M) <= 0.
StabilityVerdict ode_stability(const Jacobian2x2& j, const ModelParams& p);

/// Full verdict including the Turing double inequality. Throws InternalError
/// if the condition value and m11 disagree beyond 1e-9 of the kinetic rate scale.
StabilityVerdict turing_classify(const ModelParams& p, const Equilibrium& eq,
                                 const Jacobian2x2& j);

/// Coefficients of det(M_{lambda,xi}) = lambda^2 + a1 lambda + a2 at a given xi^2.
struct CharacteristicPoly {
    double a1 = 0.0;
    double a2 = 0.0;
};
CharacteristicPoly characteristic_poly(const ModelParams& p, const Jacobian2x2& j, double xi2);

/// Largest real part among the roots of lambda^2 + a1 lambda + a2.
double largest_real_root(double a1, double a2);

/// Growth rate of the Fourier mode with squared wavenumber xi2.
double growth_rate(const ModelParams& p, const Jacobian2x2& j, double xi2);

/// Exact roots of a2(xi^2) = 0, or nullopt when no positive interval exists.
std::optional<Band> band_roots(const ModelParams& p, const Jacobian2x2& j);

/// Dispersion sampled at the given squared wavenumbers.
DispersionCurve dispersion(const ModelParams& p, const Jacobian2x2& j,
                           std::span<const double> xi2_samples);

/// Dispersion sampled uniformly on [0, xi2_max] (samples >= 2, endpoints included).
DispersionCurve dispersion(const ModelParams& p, const Jacobian2x2& j, double xi2_max,
                           int samples);

/// Default sampling: `samples` log-spaced points on [lambda_minus/100, lambda_plus*100]
/// when a band exists, otherwise four decades either side of sqrt(det/(d_b d_c)).
DispersionCurve default_dispersion(const ModelParams& p, const Jacobian2x2& j,
                                   int samples = 512);

std::optional<Band> unstable_band(const DispersionCurve& curve);

/// Small-delta approximations of the band endpoints: det/(d_c m11) and m11/(d_c delta).
Band taylor_band(const ModelParams& p, const Jacobian2x2& j);

/// Absolute guard below which a2 is treated as zero (1/min^2).
inline constexpr double kA2ZeroGuard = 1e-12;

}  // namespace crohn
