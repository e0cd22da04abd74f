#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

#include "crohn/errors.hpp"
#include "crohn/stability.hpp"
#include "test_support.hpp"

using namespace crohn;
using crohn::test::random_params;
using crohn::test::rel_close;

namespace {

// Frozen from a 40-digit evaluation of the M-matrix formulas for the
// calibrated Table 1 set (f_e = 0.08558064516...).
constexpr double kM11 = 0.010335785639958377;
constexpr double kM12 = -0.2429;
constexpr double kDet = 2.7908428720083247e-4;
constexpr double kTrace = -9.664214360041623e-3;
constexpr double kLambdaMinus = 271254256.03174405;
constexpr double kLambdaPlus = 102886602143.55202;

// Root of a2(xi^2) between lo and hi by bisection on its sign.
double bisect_a2(const ModelParams& p, const Jacobian2x2& j, double lo, double hi) {
    const double f_lo = characteristic_poly(p, j, lo).a2;
    for (int i = 0; i < 300; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f = characteristic_poly(p, j, mid).a2;
        if ((f > 0.0) == (f_lo > 0.0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double max_eigen_real(const Jacobian2x2& j) {
    Eigen::Matrix2d m;
    m << j.m11, j.m12, j.m21, j.m22;
    const Eigen::EigenSolver<Eigen::Matrix2d> es(m);
    return std::max(es.eigenvalues()[0].real(), es.eigenvalues()[1].real());
}

struct Setup {
    ModelParams p;
    Equilibrium eq;
    Jacobian2x2 j;
};

Setup table1() {
    Setup s;
    s.p = table1_calibrated_params();
    s.eq = steady_state(s.p);
    s.j = jacobian(s.p, s.eq);
    return s;
}

}  // namespace

TEST_CASE("jacobian entries for Table 1") {
    const Setup s = table1();
    CHECK(rel_close(s.j.m11, kM11, 1e-9));
    CHECK(rel_close(s.j.m12, kM12, 1e-9));
    CHECK(s.j.m21 == s.p.f_b);
    CHECK(s.j.m22 == -s.p.r_c);
    CHECK(rel_close(s.j.det(), kDet, 1e-9));
    CHECK(rel_close(s.j.trace(), kTrace, 1e-9));
    // Rounded values quoted for the parameter set.
    CHECK(rel_close(s.j.m11, 1.0335e-2, 1e-3));
    CHECK(rel_close(s.j.m12, -2.4289e-1, 1e-3));
    CHECK(rel_close(s.j.det(), 2.791e-4, 1e-3));
    CHECK(rel_close(s.j.trace(), -9.665e-3, 1e-3));
}

TEST_CASE("jacobian matches finite differences of the kinetics") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const ModelParams p = random_params(rng);
        const Equilibrium eq = steady_state(p);
        const Jacobian2x2 j = jacobian(p, eq);
        const double hb = 1e-5 * eq.beta_bar;
        const double hg = 1e-5 * eq.gamma_bar;
        const auto bp = reaction_terms(p, eq.beta_bar + hb, eq.gamma_bar);
        const auto bm = reaction_terms(p, eq.beta_bar - hb, eq.gamma_bar);
        const auto gp = reaction_terms(p, eq.beta_bar, eq.gamma_bar + hg);
        const auto gm = reaction_terms(p, eq.beta_bar, eq.gamma_bar - hg);
        const double scale = std::max({std::abs(j.m11), std::abs(j.m12), p.r_b, p.f_e, p.a});
        INFO("trial " << trial);
        CHECK(std::abs((bp.beta - bm.beta) / (2 * hb) - j.m11) < 1e-6 * scale);
        CHECK(std::abs((gp.beta - gm.beta) / (2 * hg) - j.m12) < 1e-6 * scale);
        CHECK(std::abs((bp.gamma - bm.gamma) / (2 * hb) - j.m21) < 1e-6 * scale);
        CHECK(std::abs((gp.gamma - gm.gamma) / (2 * hg) - j.m22) < 1e-6 * scale);
    }
}

TEST_CASE("Table 1 verdicts") {
    const Setup s = table1();
    const StabilityVerdict ode = ode_stability(s.j, s.p);
    CHECK(ode.ode_stable);
    const StabilityVerdict v = turing_classify(s.p, s.eq, s.j);
    CHECK(v.turing);
    CHECK(v.ode_stable);
    CHECK(rel_close(v.turing_condition_value, 1.033e-2, 1e-3));
    CHECK(v.turing_condition_value > 0.0);
    CHECK(v.turing_condition_value < s.p.r_c);
}

TEST_CASE("large phagocyte death rate stays ODE stable") {
    ModelParams p = table1_params();
    p.r_c = 1.0;
    p.f_b = 0.1 * p.r_c;
    p = with_calibrated_fe(p, 0.3);
    const Equilibrium eq = steady_state(p);
    const Jacobian2x2 j = jacobian(p, eq);
    const StabilityVerdict v = ode_stability(j, p);
    // kappa = 0.1 and theta = 0.3 leave m11 unchanged; trace = m11 - 1.
    CHECK(rel_close(v.trace, kM11 - 1.0, 1e-9));
    CHECK(v.ode_stable);
}

TEST_CASE("zero trace is not stable") {
    const ModelParams p = table1_params();
    const Jacobian2x2 j{0.02, -0.2429, p.f_b, -0.02};
    const StabilityVerdict v = ode_stability(j, p);
    CHECK(v.trace == 0.0);
    CHECK_FALSE(v.ode_stable);
}

TEST_CASE("non-positive determinant is an internal error") {
    const ModelParams p = table1_params();
    const Jacobian2x2 j{0.0, 0.0, p.f_b, -p.r_c};
    CHECK_THROWS_AS(ode_stability(j, p), InternalError);
}

TEST_CASE("vanishing predation is not Turing") {
    ModelParams p = table1_params();
    p.a = 1e-12;
    const Equilibrium eq = steady_state(p);
    const Jacobian2x2 j = jacobian(p, eq);
    const StabilityVerdict v = turing_classify(p, eq, j);
    CHECK(v.turing_condition_value < 0.0);
    CHECK(rel_close(v.turing_condition_value, -p.r_b * eq.theta - p.f_e * p.kappa(), 1e-9));
    CHECK_FALSE(v.turing);
    const auto curve = default_dispersion(p, j);
    CHECK_FALSE(unstable_band(curve).has_value());
}

TEST_CASE("slow phagocyte turnover narrows the window") {
    ModelParams p = table1_params();
    p.r_c = 1e-3;
    p.f_b = 0.1 * p.r_c;
    p = with_calibrated_fe(p, 0.3);
    const Equilibrium eq = steady_state(p);
    const Jacobian2x2 j = jacobian(p, eq);
    const StabilityVerdict v = turing_classify(p, eq, j);
    // Independent arithmetic: the condition value does not depend on r_c when
    // kappa and theta are pinned, so it equals the Table 1 m11 and exceeds r_c.
    CHECK(rel_close(v.turing_condition_value, kM11, 1e-9));
    CHECK_FALSE(v.turing);
    CHECK_FALSE(v.ode_stable);
}

TEST_CASE("equilibrium identity and determinant sign over random parameters") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 1000; ++trial) {
        const ModelParams p = random_params(rng);
        const Equilibrium eq = steady_state(p);
        const Jacobian2x2 j = jacobian(p, eq);
        INFO("trial " << trial);
        REQUIRE(j.det() > 0.0);
        const StabilityVerdict v = turing_classify(p, eq, j);
        const double scale = std::max(std::abs(j.m11), p.r_b + p.f_e * p.kappa());
        CHECK(std::abs(v.turing_condition_value - j.m11) <= 1e-9 * scale);
        CHECK(v.ode_stable == (j.trace() < 0.0));
        if (v.turing) CHECK(v.ode_stable);
    }
}

TEST_CASE("unstable band for Table 1") {
    const Setup s = table1();
    const auto band = band_roots(s.p, s.j);
    REQUIRE(band.has_value());
    CHECK(rel_close(band->first, kLambdaMinus, 1e-9));
    CHECK(rel_close(band->second, kLambdaPlus, 1e-9));

    // Sign-change oracle on a2.
    const double lo = bisect_a2(s.p, s.j, 1.0, 1e10);
    const double hi = bisect_a2(s.p, s.j, 1e10, 1e13);
    CHECK(rel_close(band->first, lo, 1e-9));
    CHECK(rel_close(band->second, hi, 1e-9));

    const Band taylor = taylor_band(s.p, s.j);
    CHECK(rel_close(band->first, taylor.first, 0.02));
    CHECK(rel_close(band->second, taylor.second, 0.02));
    CHECK(band->second / band->first > 100.0);
}

TEST_CASE("dispersion at zero wavenumber matches eigenvalues of M") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const ModelParams p = random_params(rng);
        const Equilibrium eq = steady_state(p);
        const Jacobian2x2 j = jacobian(p, eq);
        const DispersionCurve c = dispersion(p, j, 1.0, 2);
        const double expected = max_eigen_real(j);
        const double scale = std::max(std::abs(j.m11) + std::abs(j.m22), 1e-300);
        CHECK(std::abs(c.growth_rates[0] - expected) <= 1e-12 * std::max(1.0, scale));
    }
}

TEST_CASE("growth is positive exactly inside the band") {
    const Setup s = table1();
    const DispersionCurve curve = default_dispersion(s.p, s.j);
    REQUIRE(curve.xi2_samples.size() == 512);
    REQUIRE(curve.band_nonempty);
    int inside = 0;
    for (std::size_t i = 0; i < curve.xi2_samples.size(); ++i) {
        const double x = curve.xi2_samples[i];
        const double g = curve.growth_rates[i];
        if (x > curve.lambda_minus && x < curve.lambda_plus) {
            CHECK(g > 0.0);
            ++inside;
        } else {
            CHECK(g <= 0.0);
        }
        if (x > curve.lambda_plus) CHECK(g < 0.0);
    }
    CHECK(inside > 100);
    CHECK(curve.xi2_samples.front() == doctest::Approx(curve.lambda_minus / 100.0));
    CHECK(curve.xi2_samples.back() == doctest::Approx(curve.lambda_plus * 100.0));
}

TEST_CASE("equal diffusivities give an empty band") {
    Setup s = table1();
    s.p.d_b = s.p.d_c;
    CHECK_FALSE(band_roots(s.p, s.j).has_value());
    const DispersionCurve curve = default_dispersion(s.p, s.j);
    CHECK_FALSE(unstable_band(curve).has_value());
    for (double g : curve.growth_rates) CHECK(g < 0.0);
}

TEST_CASE("reducing d_b never shrinks the band") {
    std::mt19937_64 rng(5);
    int with_band = 0;
    for (int trial = 0; trial < 300; ++trial) {
        ModelParams p = random_params(rng);
        const Equilibrium eq = steady_state(p);
        const Jacobian2x2 j = jacobian(p, eq);
        double prev_width = -1.0;
        for (int step = 0; step < 12; ++step) {
            const auto band = band_roots(p, j);
            const double width = band ? band->second - band->first : 0.0;
            if (band) ++with_band;
            CHECK(width >= prev_width);
            prev_width = width;
            p.d_b *= 0.5;
        }
    }
    CHECK(with_band > 0);
}

TEST_CASE("largest real root") {
    CHECK(largest_real_root(1.0, -2.0) == doctest::Approx(1.0));  // (l - 1)(l + 2)
    CHECK(largest_real_root(3.0, 2.0) == doctest::Approx(-1.0));  // (l + 1)(l + 2)
    CHECK(largest_real_root(2.0, 5.0) == doctest::Approx(-1.0));  // complex pair
    CHECK(largest_real_root(1.0, 0.0) == 0.0);
    CHECK(largest_real_root(-1.0, 1e-13) == 1.0);  // a2 below the zero guard
}

TEST_CASE("dispersion argument checks") {
    const Setup s = table1();
    CHECK_THROWS_AS(dispersion(s.p, s.j, 0.0, 10), DomainError);
    CHECK_THROWS_AS(dispersion(s.p, s.j, 1e9, 1), DomainError);
}
