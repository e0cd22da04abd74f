#include "crohn/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crohn/errors.hpp"

namespace crohn {

namespace {
constexpr double kIdentityRelTol = 1e-9;

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        out[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * t);
    }
    return out;
}
}  // namespace

Jacobian2x2 jacobian(const ModelParams& p, const Equilibrium& eq) {
    p.validate();
    if (!(eq.beta_bar > 0.0 && eq.beta_bar < p.b_i)) {
        throw DomainError("jacobian: equilibrium density outside (0, b_i)");
    }
    const double k = p.kappa();
    const double theta = eq.theta;
    const double denom = p.s_b + eq.beta_bar;
    Jacobian2x2 j;
    j.m11 = p.r_b * (1.0 - 2.0 * theta) - p.a * p.s_b * k * eq.beta_bar / (denom * denom) -
            p.f_e * k * theta;
    j.m12 = -p.a * eq.beta_bar / denom + p.f_e * (1.0 - theta);
    j.m21 = p.f_b;
    j.m22 = -p.r_c;
    return j;
}

StabilityVerdict ode_stability(const Jacobian2x2& j, const ModelParams& p) {
    p.validate();
    StabilityVerdict v;
    v.trace = j.trace();
    v.det = j.det();
    if (!(v.det > 0.0)) {
        std::ostringstream os;
        os << "ode_stability: det(M) = " << v.det << " is not positive";
        throw InternalError(os.str());
    }
    v.ode_stable = v.trace < 0.0;
    return v;
}

StabilityVerdict turing_classify(const ModelParams& p, const Equilibrium& eq,
                                 const Jacobian2x2& j) {
    StabilityVerdict v = ode_stability(j, p);
    const double k = p.kappa();
    const double denom = p.s_b + eq.beta_bar;
    const double value = p.a * k * eq.beta_bar * eq.beta_bar / (denom * denom) -
                         p.r_b * eq.theta - p.f_e * k;

    // value and m11 differ by exactly the steady-state residual, so compare on
    // the scale of the terms that cancel in that residual.
    const double scale = std::max({std::abs(j.m11), p.r_b + p.f_e * k});
    if (!(std::abs(value - j.m11) <= kIdentityRelTol * scale)) {
        std::ostringstream os;
        os.precision(17);
        os << "turing_classify: condition value " << value << " differs from m11 " << j.m11;
        throw InternalError(os.str());
    }
    v.turing_condition_value = value;
    v.turing = value > 0.0 && value < p.r_c;
    return v;
}

CharacteristicPoly characteristic_poly(const ModelParams& p, const Jacobian2x2& j, double xi2) {
    CharacteristicPoly c;
    c.a1 = -j.trace() + (p.d_b + p.d_c) * xi2;
    c.a2 = j.det() - (j.m11 * p.d_c + j.m22 * p.d_b) * xi2 + p.d_b * p.d_c * xi2 * xi2;
    return c;
}

double largest_real_root(double a1, double a2) {
    if (std::abs(a2) < kA2ZeroGuard) return std::max(0.0, -a1);
    const double disc = a1 * a1 - 4.0 * a2;
    if (disc < 0.0) return -0.5 * a1;
    const double q = -0.5 * (a1 + std::copysign(std::sqrt(disc), a1));
    if (q == 0.0) return 0.0;
    return std::max(q, a2 / q);
}

double growth_rate(const ModelParams& p, const Jacobian2x2& j, double xi2) {
    const auto c = characteristic_poly(p, j, xi2);
    return largest_real_root(c.a1, c.a2);
}

std::optional<Band> band_roots(const ModelParams& p, const Jacobian2x2& j) {
    // a2 / (d_b d_c) = X^2 + b X + c with X = xi^2.
    const double b = -(j.m11 / p.d_b + j.m22 / p.d_c);
    const double c = j.det() / (p.d_b * p.d_c);
    if (!(b < 0.0)) return std::nullopt;  // c > 0: both roots share the sign of -b
    const double disc = b * b - 4.0 * c;
    if (disc < 0.0) return std::nullopt;
    const double q = -0.5 * (b - std::sqrt(disc));  // b < 0, larger root first
    const double hi = q;
    const double lo = c / q;
    if (!(lo < hi)) return std::nullopt;
    return Band{lo, hi};
}

DispersionCurve dispersion(const ModelParams& p, const Jacobian2x2& j,
                           std::span<const double> xi2_samples) {
    p.validate();
    DispersionCurve curve;
    curve.xi2_samples.assign(xi2_samples.begin(), xi2_samples.end());
    curve.growth_rates.reserve(xi2_samples.size());
    for (double x : xi2_samples) curve.growth_rates.push_back(growth_rate(p, j, x));
    if (auto band = band_roots(p, j)) {
        curve.lambda_minus = band->first;
        curve.lambda_plus = band->second;
        curve.band_nonempty = true;
    }
    return curve;
}

DispersionCurve dispersion(const ModelParams& p, const Jacobian2x2& j, double xi2_max,
                           int samples) {
    if (!(xi2_max > 0.0) || samples < 2) {
        throw DomainError("dispersion: need xi2_max > 0 and at least two samples");
    }
    std::vector<double> xs(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        xs[static_cast<std::size_t>(i)] =
            xi2_max * static_cast<double>(i) / static_cast<double>(samples - 1);
    }
    return dispersion(p, j, xs);
}

DispersionCurve default_dispersion(const ModelParams& p, const Jacobian2x2& j, int samples) {
    if (samples < 2) throw DomainError("dispersion: need at least two samples");
    if (auto band = band_roots(p, j)) {
        return dispersion(p, j, log_spaced(band->first / 100.0, band->second * 100.0, samples));
    }
    const double centre = std::sqrt(j.det() / (p.d_b * p.d_c));
    return dispersion(p, j, log_spaced(centre * 1e-4, centre * 1e4, samples));
}

std::optional<Band> unstable_band(const DispersionCurve& curve) {
    if (!curve.band_nonempty) return std::nullopt;
    return Band{curve.lambda_minus, curve.lambda_plus};
}

Band taylor_band(const ModelParams& p, const Jacobian2x2& j) {
    return {j.det() / (p.d_c * j.m11), j.m11 / (p.d_c * p.delta())};
}

}  // namespace crohn
