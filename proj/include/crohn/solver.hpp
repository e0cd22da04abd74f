/**
 * @file solver.hpp
 * @brief Semi-implicit 1-D integrator for the bacteria/phagocyte system.
 *
 * Each step evaluates the kinetics explicitly at the current state and then
 * solves one backward-Euler diffusion system per species,
 *
 *   (I - dt d L) u_new = u + dt R(u, v),
 *
 * where L is the second-difference operator with ghost-node reflection at both
 * ends (homogeneous Neumann). Densities are advanced in b_i-scaled form.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "crohn/model.hpp"

namespace crohn {

struct Domain1D {
    double length = 0.03;  ///< m
    int n_points = 3000;

    double dx() const { return length / static_cast<double>(n_points - 1); }
    double x(int i) const { return static_cast<double>(i) * dx(); }

    /// Throws DomainError unless n_points >= 16 and length > 0.
    void validate() const;
};

struct FieldState {
    double time = 0.0;          ///< min
    std::vector<double> beta;   ///< units/m^3 per node
    std::vector<double> gamma;  ///< units/m^3 per node
};

enum class InitialKind {
    Spot,       ///< beta = amplitude inside the spot, background elsewhere; gamma = 0
    Perturbed,  ///< homogeneous equilibrium times (1 + noise * U(-1, 1)) per node
};

struct InitialCondition {
    InitialKind kind = InitialKind::Spot;
    double spot_center = 0.015;      ///< m
    double spot_half_width = 5e-5;   ///< m
    double spot_amplitude = 1e15;    ///< units/m^3
    double background = 0.0;         ///< units/m^3
    double noise = 1e-3;             ///< relative amplitude for Perturbed
    std::uint64_t seed = 0;
};

struct SimConfig {
    double dt = 1.0;                ///< min
    double t_end = 20160.0;         ///< min (two weeks)
    double snapshot_every = 2016.0; ///< min, positive multiple of dt
    InitialCondition initial;

    void validate() const;
};

/// Largest step admitted by the explicit reaction update:
/// 0.2 / max(r_b + f_e kappa, a kappa, f_b, r_c).
double max_stable_dt(const ModelParams& p);

/// Initial fields for a configuration. Perturbed requires strictly positive params.
FieldState initial_state(const ModelParams& p, const Domain1D& dom, const InitialCondition& ic);

/// Pre-factorized stepper; reuse across many steps with fixed p, dom, dt.
class Stepper {
public:
    Stepper(const ModelParams& p, const Domain1D& dom, double dt);

    /// Advances scaled densities u = beta/b_i, v = gamma/b_i in place.
    /// Throws InvariantViolation on negativity beyond 1e-12, on u >= 1 when
    /// the input satisfied u < 1, or on non-finite values.
    void advance(std::vector<double>& u, std::vector<double>& v) const;

    double dt() const { return dt_; }

private:
    struct Tridiagonal {
        // LU factors of the constant Neumann diffusion matrix.
        std::vector<double> upper;     // modified super-diagonal
        std::vector<double> inv_pivot; // 1 / modified diagonal
        std::vector<double> lower;     // sub-diagonal
        void build(int n, double r);
        void solve(std::vector<double>& rhs) const;
    };

    ModelParams p_;
    double dt_;
    double half_sat_;
    Tridiagonal beta_sys_;
    Tridiagonal gamma_sys_;
    mutable std::vector<double> rhs_u_;
    mutable std::vector<double> rhs_v_;
};

/// One step on physical densities; returns the new state with time + dt.
FieldState step(const ModelParams& p, const Domain1D& dom, const FieldState& s, double dt);

/// Called with every emitted snapshot; the reference is valid for the call only.
using SnapshotObserver = std::function<void(const FieldState&)>;

/// Runs from the configured initial condition to t_end, calling `observer`
/// at t = 0, every snapshot_every minutes and at t_end (always).
void simulate(const ModelParams& p, const Domain1D& dom, const SimConfig& cfg,
              const SnapshotObserver& observer);

/// As above, collecting the snapshots.
std::vector<FieldState> simulate(const ModelParams& p, const Domain1D& dom, const SimConfig& cfg);

/// Runs from an explicit starting state instead of cfg.initial.
void simulate_from(const ModelParams& p, const Domain1D& dom, const SimConfig& cfg,
                   FieldState start, const SnapshotObserver& observer);

/// Trapezoidal integral of a nodal field (the quantity the discrete Neumann
/// operator conserves).
double trapezoid_mass(const std::vector<double>& f, double dx);

}  // namespace crohn
