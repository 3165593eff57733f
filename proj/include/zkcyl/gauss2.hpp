#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "zkcyl/dynamics.hpp"
#include "zkcyl/field.hpp"

namespace zkcyl {

/// Two-stage Gauss-Legendre collocation (classical order 4).
struct GaussTableau {
    static constexpr double sqrt3 = 1.7320508075688772935;
    static constexpr double c1 = 0.5 - sqrt3 / 6.0;
    static constexpr double c2 = 0.5 + sqrt3 / 6.0;
    static constexpr double a11 = 0.25;
    static constexpr double a12 = 0.25 - sqrt3 / 6.0;
    static constexpr double a21 = 0.25 + sqrt3 / 6.0;
    static constexpr double a22 = 0.25;
    static constexpr double b1 = 0.5;
    static constexpr double b2 = 0.5;
};

/// How the two coupled stage equations are solved inside each simplified
/// Newton iteration.
enum class StageCoupling {
    /// Alternate K1 and K2 solves with I + i h a_ii k (L - k^2); one
    /// factorization per wavenumber since a11 = a22.
    Sweep,
    /// Exact solve of the coupled linear stage system by diagonalizing the
    /// Butcher matrix; two factorizations per wavenumber.
    Coupled,
};

struct StageOptions {
    double newton_tol = 1e-6;
    int max_newton = 50;
    StageCoupling coupling = StageCoupling::Coupled;
    /// Solve the per-wavenumber stage systems through the shared transverse
    /// eigenbasis instead of one LU factorization per wavenumber.
    bool eigenbasis = true;
};

struct StepStats {
    int iterations = 0;
    double last_change = 0.0;
};

/// Factorized per-wavenumber stage matrices for one step size h.
///
/// The cache is bound to (h, discretization) at construction; a different h
/// needs a new StageSolver.
class StageSolver {
public:
    StageSolver(double h, DiscretizationPtr disc, StageOptions options = {});

    double h() const noexcept { return h_; }
    const StageOptions& options() const noexcept { return options_; }
    const Discretization& disc() const noexcept { return *disc_; }
    const DiscretizationPtr& disc_ptr() const noexcept { return disc_; }

    /// Number of LU factorizations held (zero on the eigenbasis path).
    std::size_t factorization_count() const noexcept { return lu_.size(); }
    bool uses_eigenbasis() const noexcept { return !scale_.empty(); }

    /// Solves the stage system of factor f for every wavenumber row of `rhs`
    /// in place (tau columns of `rhs` are treated as zero).
    void solve_stages(int f, ComplexMatrix& rhs) const;

    /// Stage matrix of wavenumber row j and factor index f (0 for Sweep;
    /// 0/1 for the two Butcher eigenvalues with Coupled).
    DenseComplexMatrix stage_matrix(int j, int f = 0) const;

    /// One Gauss step. Throws StepFailure if the simplified Newton iteration
    /// does not converge within max_newton iterations.
    Field step(const Field& u, const Nonlinearity& nl, StepStats* stats = nullptr) const;

private:
    ModalField nonlinear_term(const ModalField& stage_value, const Nonlinearity& nl) const;

    double h_;
    DiscretizationPtr disc_;
    StageOptions options_;
    int factors_per_mode_;
    std::vector<Eigen::PartialPivLU<DenseComplexMatrix>> lu_;
    // Eigenbasis path: per-factor diagonal multipliers (modes x m) and the
    // transposed basis changes.
    std::vector<ComplexMatrix> scale_;
    bool real_basis_ = false;
    DenseMatrix to_basis_re_t_, from_basis_re_t_;
    DenseComplexMatrix to_basis_t_, from_basis_t_;
    // Coupled variant: Butcher eigenvalues and eigenvector matrices.
    std::array<Complex, 2> butcher_eig_{};
    Eigen::Matrix2cd butcher_T_;
    Eigen::Matrix2cd butcher_Tinv_;
};

enum class StopReason {
    Completed,
    BlowUp,
    StepFailure,
    NonFinite,
};

std::string to_string(StopReason reason);

struct BlowUpDetector {
    /// Fires once L-infinity exceeds this multiple of its initial value ...
    double linf_factor = 10.0;
    /// ... and the step needed more Newton iterations than this.
    int newton_trigger = 10;
};

struct EvolveOptions {
    StageOptions stage;
    BlowUpDetector detector;
    double t0 = 0.0;
    /// Reference L-infinity for the detector; <= 0 means "use u0".
    double linf_reference = 0.0;
    /// Called with (step index, t, field, newton iterations) after each step.
    std::function<void(long, double, const Field&, int)> on_step;
};

struct EvolveReport {
    Field final_field;
    double t_final = 0.0;
    long steps_taken = 0;
    StopReason stop = StopReason::Completed;
    std::string message;
    int max_iterations = 0;
    double linf_initial = 0.0;
    double linf_final = 0.0;
};

/// N_t uniform steps of size (t_end - t0) / N_t starting at options.t0.
EvolveReport evolve(const Field& u0, double t_end, long n_steps, const Nonlinearity& nl,
                    const EvolveOptions& options = {});

}  // namespace zkcyl
