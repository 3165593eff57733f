#pragma once

#include <functional>

#include "zkcyl/types.hpp"

namespace zkcyl {

struct GmresOptions {
    int restart = 30;
    int max_iterations = 300;
    /// Stop once ||b - A x|| <= rel_tol * ||b||.
    double rel_tol = 1e-3;
};

struct GmresResult {
    Vector x;
    int iterations = 0;
    double residual = 0.0;  ///< final residual norm relative to ||b||
    bool converged = false;
};

using LinearMap = std::function<Vector(const Vector&)>;

/// Restarted GMRES with right preconditioning (solves A M^{-1} y = b,
/// x = M^{-1} y) starting from x = 0. Givens rotations, modified Gram-Schmidt.
GmresResult gmres(const LinearMap& apply, const Vector& b, const LinearMap& precondition,
                  const GmresOptions& options = {});

}  // namespace zkcyl
