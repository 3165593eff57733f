#pragma once

#include <cmath>
#include <random>

#include "zkcyl/field.hpp"

namespace zkcyl::testing {

/// Small grid for tests that only need a few milliseconds per solve.
inline DiscretizationPtr small_disc(int n = 32, double L = 1.0, int n_inner = 8, int n_outer = 16,
                                    double rho1 = 8.0) {
    return make_discretization(make_torus_grid(L, n), build_layout(1.0, rho1, n_inner, n_outer));
}

inline Field random_field(const DiscretizationPtr& disc, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Field f(disc);
    for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values.data()[i] = dist(rng);
    return f;
}

}  // namespace zkcyl::testing
