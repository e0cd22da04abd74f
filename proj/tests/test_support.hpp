#pragma once

#include <cmath>
#include <random>

#include "crohn/model.hpp"

namespace crohn::test {

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

/// Strictly positive parameters spread over several decades around Table 1.
inline ModelParams random_params(std::mt19937_64& rng) {
    ModelParams p;
    p.r_b = log_uniform(rng, 1e-3, 1.0);
    p.r_c = log_uniform(rng, 1e-4, 1.0);
    p.d_b = log_uniform(rng, 1e-15, 1e-9);
    p.d_c = log_uniform(rng, 1e-13, 1e-8);
    p.b_i = log_uniform(rng, 1e14, 1e19);
    p.f_b = log_uniform(rng, 1e-5, 1.0);
    p.a = log_uniform(rng, 1e-3, 10.0);
    p.s_b = log_uniform(rng, 1e12, 1e18);
    p.f_e = log_uniform(rng, 1e-4, 1.0);
    return p;
}

inline bool rel_close(double x, double y, double tol) {
    return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y));
}

}  // namespace crohn::test
