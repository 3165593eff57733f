#pragma once

#include <vector>

#include <Eigen/LU>

#include "zkcyl/dynamics.hpp"
#include "zkcyl/field.hpp"
#include "zkcyl/gmres.hpp"

namespace zkcyl {

struct GroundStateProfile {
    Field field;
    double c = 1.0;
    Rational p{7, 3};
    double residual_norm = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    int newton_iterations = 0;
    int gmres_iterations = 0;
};

struct GroundStateOptions {
    /// Converged once the residual max-norm drops below this.
    double tol = 1e-10;
    /// Accepted on stagnation if the residual is already below this.
    double accept_tol = 1e-9;
    int max_newton = 40;
    GmresOptions gmres{30, 400, 1e-3};
    /// Project every iterate onto fields even in x.
    bool enforce_even = true;
    /// Seeds tried in order when Newton fails from the given seed; each is
    /// a Gaussian a exp(-(x^2 + rho^2)).
    std::vector<double> continuation_amplitudes{2.5, 3.5};
    bool verbose = false;
};

/// Discrete residual of Delta Q - c Q + Q^p with tau rows replaced by the
/// constraint functionals applied to Q.
Field residual(const Field& field, double c, const Rational& p);

/// Linear part of the residual, (Delta - c) v with constraint rows.
Field residual_linear(const Field& v, double c);

/// Jacobian-vector product of the residual at `field` by a forward finite
/// difference. The linear part is applied exactly; the difference quotient
/// is taken only over the pointwise power term.
Field residual_jvp(const Field& field, const Field& direction, double c, const Rational& p);

/// Inverts the linear part (Delta - c) per wavenumber; used as the
/// right preconditioner in GMRES.
class HelmholtzPreconditioner {
public:
    HelmholtzPreconditioner(DiscretizationPtr disc, double c);
    Field apply(const Field& v) const;

private:
    DiscretizationPtr disc_;
    std::vector<Eigen::PartialPivLU<DenseMatrix>> lu_;
};

/// Newton-Krylov solve of the ground-state equation from `seed`.
/// Throws SolverFailure on stagnation/divergence and when the iteration
/// collapses onto the zero solution.
GroundStateProfile solve_ground_state(const Field& seed, double c, const Rational& p,
                                      const GroundStateOptions& options = {});

/// (3p - 7) / (2 (5 - p)); throws DomainError for p = 5.
double energy_mass_ratio(const Rational& p);

/// Exact spectral translation u(x) -> u(x - distance), periodic on the torus.
Field shift_in_x(const Field& field, double distance);

/// Mirror in x (x -> -x) around the origin node.
Field mirror_x(const Field& field);

}  // namespace zkcyl
