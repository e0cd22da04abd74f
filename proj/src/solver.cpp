#include "crohn/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "crohn/errors.hpp"

namespace crohn {

namespace {

// Scaled densities in [-kClampTol, 0) are round-off and get clamped to zero.
constexpr double kClampTol = 1e-12;

long long whole_steps(double span, double dt, const char* what) {
    const double ratio = span / dt;
    const double rounded = std::round(ratio);
    if (!(rounded >= 1.0) || std::abs(ratio - rounded) > 1e-9 * rounded) {
        std::ostringstream os;
        os << what << " = " << span << " must be a positive multiple of dt = " << dt;
        throw DomainError(os.str());
    }
    return static_cast<long long>(rounded);
}

void check_and_clamp(std::vector<double>& f, const char* name, bool check_capacity) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        double& value = f[i];
        if (!std::isfinite(value)) {
            std::ostringstream os;
            os << name << " became non-finite at node " << i;
            throw InvariantViolation(os.str());
        }
        if (value < 0.0) {
            if (value < -kClampTol) {
                std::ostringstream os;
                os << name << " = " << value << " b_i is negative at node " << i;
                throw InvariantViolation(os.str());
            }
            value = 0.0;
        }
        if (check_capacity && value >= 1.0) {
            std::ostringstream os;
            os << name << " reached the carrying capacity at node " << i;
            throw InvariantViolation(os.str());
        }
    }
}

}  // namespace

void Domain1D::validate() const {
    if (n_points < 16) throw DomainError("domain: n_points must be at least 16");
    if (!(std::isfinite(length) && length > 0.0)) throw DomainError("domain: length must be positive");
}

void SimConfig::validate() const {
    if (!(std::isfinite(dt) && dt > 0.0)) throw DomainError("dt must be positive");
    if (!(t_end >= dt)) throw DomainError("t_end must be at least dt");
    whole_steps(t_end, dt, "t_end");
    whole_steps(snapshot_every, dt, "snapshot_every");
    if (initial.kind == InitialKind::Spot) {
        if (!(initial.spot_half_width >= 0.0 && initial.spot_amplitude >= 0.0 &&
              initial.background >= 0.0)) {
            throw DomainError("spot initial condition needs non-negative width and densities");
        }
    } else if (!(initial.noise >= 0.0 && initial.noise < 1.0)) {
        throw DomainError("perturbation noise must lie in [0, 1)");
    }
}

double max_stable_dt(const ModelParams& p) {
    const double k = p.kappa();
    const double fastest = std::max({p.r_b + p.f_e * k, p.a * k, p.f_b, p.r_c});
    return 0.2 / fastest;
}

FieldState initial_state(const ModelParams& p, const Domain1D& dom, const InitialCondition& ic) {
    dom.validate();
    const auto n = static_cast<std::size_t>(dom.n_points);
    FieldState s;
    s.beta.assign(n, 0.0);
    s.gamma.assign(n, 0.0);
    if (ic.kind == InitialKind::Spot) {
        for (int i = 0; i < dom.n_points; ++i) {
            const bool inside = std::abs(dom.x(i) - ic.spot_center) <= ic.spot_half_width;
            s.beta[static_cast<std::size_t>(i)] = inside ? ic.spot_amplitude : ic.background;
        }
        return s;
    }
    const Equilibrium eq = steady_state(p);
    std::mt19937_64 rng(ic.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        s.beta[i] = eq.beta_bar * (1.0 + ic.noise * unit(rng));
        s.gamma[i] = eq.gamma_bar * (1.0 + ic.noise * unit(rng));
    }
    return s;
}

void Stepper::Tridiagonal::build(int n, double r) {
    const auto m = static_cast<std::size_t>(n);
    upper.assign(m, 0.0);
    inv_pivot.assign(m, 0.0);
    lower.assign(m, -r);
    lower[0] = 0.0;
    lower[m - 1] = -2.0 * r;
    const double diag = 1.0 + 2.0 * r;

    double pivot = diag;
    inv_pivot[0] = 1.0 / pivot;
    upper[0] = -2.0 * r * inv_pivot[0];
    for (std::size_t i = 1; i < m; ++i) {
        pivot = diag - lower[i] * upper[i - 1];
        inv_pivot[i] = 1.0 / pivot;
        upper[i] = (i + 1 < m) ? -r * inv_pivot[i] : 0.0;
    }
}

void Stepper::Tridiagonal::solve(std::vector<double>& rhs) const {
    const std::size_t m = rhs.size();
    rhs[0] *= inv_pivot[0];
    for (std::size_t i = 1; i < m; ++i) {
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) * inv_pivot[i];
    }
    for (std::size_t i = m - 1; i-- > 0;) {
        rhs[i] -= upper[i] * rhs[i + 1];
    }
}

Stepper::Stepper(const ModelParams& p, const Domain1D& dom, double dt)
    : p_(p), dt_(dt), half_sat_(p.s_b / p.b_i) {
    p.validate_dynamics();
    dom.validate();
    if (!(std::isfinite(dt) && dt > 0.0)) throw DomainError("step: dt must be positive");
    const double bound = max_stable_dt(p);
    if (dt > bound) {
        std::ostringstream os;
        os << "step: dt = " << dt << " exceeds the explicit reaction bound " << bound;
        throw DomainError(os.str());
    }
    const double dx2 = dom.dx() * dom.dx();
    beta_sys_.build(dom.n_points, dt * p.d_b / dx2);
    gamma_sys_.build(dom.n_points, dt * p.d_c / dx2);
}

void Stepper::advance(std::vector<double>& u, std::vector<double>& v) const {
    const std::size_t n = u.size();
    if (v.size() != n || n != beta_sys_.inv_pivot.size()) {
        throw DomainError("step: field size does not match the domain");
    }
    const bool below_capacity = *std::max_element(u.begin(), u.end()) < 1.0;

    rhs_u_.resize(n);
    rhs_v_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ReactionRates r = scaled_reaction_terms(p_, half_sat_, u[i], v[i]);
        rhs_u_[i] = u[i] + dt_ * r.beta;
        rhs_v_[i] = v[i] + dt_ * r.gamma;
    }
    beta_sys_.solve(rhs_u_);
    gamma_sys_.solve(rhs_v_);
    check_and_clamp(rhs_u_, "beta", below_capacity);
    check_and_clamp(rhs_v_, "gamma", false);
    u.swap(rhs_u_);
    v.swap(rhs_v_);
}

FieldState step(const ModelParams& p, const Domain1D& dom, const FieldState& s, double dt) {
    const Stepper stepper(p, dom, dt);
    const std::size_t n = s.beta.size();
    if (s.gamma.size() != n) throw DomainError("step: beta and gamma sizes differ");
    std::vector<double> u(n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(s.beta[i] >= 0.0) || !(s.gamma[i] >= 0.0) || !std::isfinite(s.beta[i]) ||
            !std::isfinite(s.gamma[i])) {
            throw DomainError("step: input state must be finite and non-negative");
        }
        u[i] = s.beta[i] / p.b_i;
        v[i] = s.gamma[i] / p.b_i;
    }
    stepper.advance(u, v);
    FieldState out;
    out.time = s.time + dt;
    out.beta.resize(n);
    out.gamma.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.beta[i] = u[i] * p.b_i;
        out.gamma[i] = v[i] * p.b_i;
    }
    return out;
}

void simulate_from(const ModelParams& p, const Domain1D& dom, const SimConfig& cfg,
                   FieldState start, const SnapshotObserver& observer) {
    cfg.validate();
    const Stepper stepper(p, dom, cfg.dt);
    const long long n_steps = whole_steps(cfg.t_end, cfg.dt, "t_end");
    const long long cadence = whole_steps(cfg.snapshot_every, cfg.dt, "snapshot_every");
    const std::size_t n = static_cast<std::size_t>(dom.n_points);
    if (start.beta.size() != n || start.gamma.size() != n) {
        throw DomainError("simulate: initial state does not match the domain");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(start.beta[i] >= 0.0 && start.beta[i] < p.b_i && start.gamma[i] >= 0.0) ||
            !std::isfinite(start.gamma[i])) {
            throw DomainError("simulate: initial state must satisfy 0 <= beta < b_i, gamma >= 0");
        }
    }

    std::vector<double> u(n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = start.beta[i] / p.b_i;
        v[i] = start.gamma[i] / p.b_i;
    }
    const double t0 = start.time;

    FieldState snap;
    snap.beta.resize(n);
    snap.gamma.resize(n);
    auto emit = [&](double t) {
        snap.time = t;
        for (std::size_t i = 0; i < n; ++i) {
            snap.beta[i] = u[i] * p.b_i;
            snap.gamma[i] = v[i] * p.b_i;
        }
        observer(snap);
    };

    emit(t0);
    for (long long k = 1; k <= n_steps; ++k) {
        try {
            stepper.advance(u, v);
        } catch (const InvariantViolation& e) {
            std::ostringstream os;
            os << "at t = " << t0 + static_cast<double>(k) * cfg.dt << " min: " << e.what();
            throw InvariantViolation(os.str());
        }
        if (k % cadence == 0 || k == n_steps) emit(t0 + static_cast<double>(k) * cfg.dt);
    }
}

void simulate(const ModelParams& p, const Domain1D& dom, const SimConfig& cfg,
              const SnapshotObserver& observer) {
    simulate_from(p, dom, cfg, initial_state(p, dom, cfg.initial), observer);
}

std::vector<FieldState> simulate(const ModelParams& p, const Domain1D& dom,
                                 const SimConfig& cfg) {
    std::vector<FieldState> out;
    simulate(p, dom, cfg, [&](const FieldState& s) { out.push_back(s); });
    return out;
}

double trapezoid_mass(const std::vector<double>& f, double dx) {
    if (f.empty()) return 0.0;
    double sum = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
    return sum * dx;
}

}  // namespace crohn
