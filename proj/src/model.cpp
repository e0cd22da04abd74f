#include "crohn/model.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "crohn/errors.hpp"

namespace crohn {

namespace {

constexpr double kBisectionRelTol = 1e-12;
constexpr double kCrossCheckRelTol = 1e-9;

void require(bool ok, const char* name, double value, const char* what) {
    if (!ok) {
        std::ostringstream os;
        os << "parameter " << name << " = " << value << " must be " << what;
        throw DomainError(os.str());
    }
}

struct Field {
    const char* name;
    double value;
};

// F in b_i-scaled form: (r_b + f_e k)(1 - u) - a k u / (sigma + u).
double scaled_residual(double growth, double predation, double sigma, double u) {
    return growth * (1.0 - u) - predation * u / (sigma + u);
}

}  // namespace

void ModelParams::validate() const {
    const Field fields[] = {{"r_b", r_b}, {"r_c", r_c}, {"d_b", d_b}, {"d_c", d_c}, {"b_i", b_i},
                            {"f_b", f_b}, {"a", a},     {"s_b", s_b}, {"f_e", f_e}};
    for (const auto& f : fields) {
        require(std::isfinite(f.value) && f.value > 0.0, f.name, f.value,
                "finite and strictly positive");
    }
}

void ModelParams::validate_dynamics() const {
    const Field positive[] = {{"b_i", b_i}, {"s_b", s_b}, {"r_c", r_c}, {"d_b", d_b}, {"d_c", d_c}};
    for (const auto& f : positive) {
        require(std::isfinite(f.value) && f.value > 0.0, f.name, f.value,
                "finite and strictly positive");
    }
    const Field nonneg[] = {{"r_b", r_b}, {"f_b", f_b}, {"a", a}, {"f_e", f_e}};
    for (const auto& f : nonneg) {
        require(std::isfinite(f.value) && f.value >= 0.0, f.name, f.value,
                "finite and non-negative");
    }
}

ModelParams table1_params() {
    ModelParams p;
    p.r_b = 0.0347;
    p.r_c = 0.02;
    p.d_b = 1e-13;
    p.d_c = 1e-10;
    p.b_i = 1e17;
    p.f_b = 0.002;
    p.a = 0.3129;
    p.s_b = 1e15;
    p.f_e = 0.0856;
    return p;
}

ModelParams table1_calibrated_params() {
    return with_calibrated_fe(table1_params(), kTable1Theta);
}

ReactionRates reaction_terms(const ModelParams& p, double beta, double gamma) {
    p.validate_dynamics();
    if (!std::isfinite(beta) || !std::isfinite(gamma)) {
        throw DomainError("reaction_terms: non-finite density");
    }
    if (beta < 0.0 || gamma < 0.0) {
        throw DomainError("reaction_terms: negative density");
    }
    const double logistic = 1.0 - beta / p.b_i;
    return {p.r_b * logistic * beta - p.a * beta * gamma / (p.s_b + beta) +
                p.f_e * logistic * gamma,
            p.f_b * beta - p.r_c * gamma};
}

double equilibrium_residual(const ModelParams& p, double beta) {
    const double k = p.kappa();
    return (p.r_b + p.f_e * k) * (1.0 - beta / p.b_i) - p.a * k * beta / (p.s_b + beta);
}

double steady_state_theta_closed_form(const ModelParams& p) {
    // Clearing (sigma + u) gives  c u^2 - (c (1 - sigma) - a k) u - c sigma = 0
    // with c = r_b + f_e k. The product of the roots is -sigma < 0, so exactly
    // one root is positive; the other is spurious.
    const double k = p.kappa();
    const double c = p.r_b + p.f_e * k;
    const double sigma = p.s_b / p.b_i;
    const double b = -(c * (1.0 - sigma) - p.a * k);
    const double disc = b * b + 4.0 * c * c * sigma;
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    const double r1 = q / c;
    const double r2 = -c * sigma / q;
    return r1 > 0.0 ? r1 : r2;
}

Equilibrium steady_state(const ModelParams& p) {
    p.validate();
    const double k = p.kappa();
    const double growth = p.r_b + p.f_e * k;
    const double predation = p.a * k;
    const double sigma = p.s_b / p.b_i;

    // F(0) = growth > 0 and F(1) < 0; F strictly decreasing.
    double lo = 0.0;
    double hi = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (scaled_residual(growth, predation, sigma, mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= kBisectionRelTol * 0.5 * (lo + hi)) break;
    }
    const double theta = 0.5 * (lo + hi);

    const double theta_quad = steady_state_theta_closed_form(p);
    if (!(std::abs(theta - theta_quad) <= kCrossCheckRelTol * theta_quad)) {
        std::ostringstream os;
        os.precision(17);
        os << "steady_state: bisection root " << theta << " disagrees with quadratic root "
           << theta_quad;
        throw InternalError(os.str());
    }

    Equilibrium eq;
    eq.theta = theta;
    eq.beta_bar = theta * p.b_i;
    eq.gamma_bar = k * eq.beta_bar;
    return eq;
}

double calibrate_fe(const ModelParams& p, double theta_target) {
    if (!(theta_target > 0.0 && theta_target < 1.0)) {
        throw DomainError("calibrate_fe: theta_target must lie in (0, 1)");
    }
    ModelParams q = p;
    q.f_e = 1.0;  // placeholder so the remaining fields can be validated
    q.validate_dynamics();
    if (!(q.r_b > 0.0 && q.f_b > 0.0)) {
        throw DomainError("calibrate_fe: r_b and f_b must be strictly positive");
    }
    const double k = p.kappa();
    const double beta_bar = theta_target * p.b_i;
    const double fe =
        (p.a * k * beta_bar / ((p.s_b + beta_bar) * (1.0 - theta_target)) - p.r_b) / k;
    if (!(fe > 0.0)) {
        std::ostringstream os;
        os << "calibrate_fe: equilibrium at theta = " << theta_target
           << " requires f_e = " << fe << " <= 0";
        throw InfeasibleCalibration(os.str());
    }
    return fe;
}

ModelParams with_calibrated_fe(ModelParams p, double theta_target) {
    p.f_e = calibrate_fe(p, theta_target);
    return p;
}

}  // namespace crohn
