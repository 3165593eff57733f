#include "zkcyl/gauss2.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "zkcyl/error.hpp"

namespace zkcyl {

namespace {

using T = GaussTableau;

/// Row j of the wavenumber ladder: multiplier of the odd derivative (zero at
/// Nyquist) and k itself for the even part.
struct ModeFactors {
    double odd;
    double k;
};

ModeFactors mode_factors(const TorusGrid& grid, int j) {
    const double k = grid.k(j);
    return {j == grid.nyquist() ? 0.0 : k, k};
}

/// out = -i k (L - k^2) v on interior rows, zero on tau rows.
void apply_linear(const Discretization& disc, const ComplexMatrix& v, ComplexMatrix& out) {
    const auto& grid = disc.grid();
    const auto& op = disc.transverse();
    const DenseMatrix lap_t = op.laplacian.transpose();
    RealMatrix re = v.real() * lap_t;
    RealMatrix im = v.imag() * lap_t;
    out.resize(v.rows(), v.cols());
    for (int j = 0; j < grid.modes(); ++j) {
        const auto [odd, k] = mode_factors(grid, j);
        for (Eigen::Index m = 0; m < v.cols(); ++m) {
            const Complex lv = Complex(re(j, m), im(j, m)) - (k * k) * v(j, m);
            out(j, m) = Complex(0.0, -odd) * lv;
        }
    }
    for (int r : op.tau_rows) out.col(r).setZero();
}

double physical_max(const Discretization& disc, const ComplexMatrix& modal) {
    RealMatrix phys;
    disc.fft().inverse(modal, phys);
    return phys.cwiseAbs().maxCoeff();
}

}  // namespace

StageSolver::StageSolver(double h, DiscretizationPtr disc, StageOptions options)
    : h_(h), disc_(std::move(disc)), options_(options) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ConfigError("time step must be positive");
    }
    if (!(options_.newton_tol > 0.0) || options_.max_newton < 1) {
        throw ConfigError("Newton tolerance must be positive and max_newton >= 1");
    }

    std::vector<Complex> factors;
    if (options_.coupling == StageCoupling::Sweep) {
        factors = {Complex(T::a11, 0.0)};
    } else {
        Eigen::Matrix2d a;
        a << T::a11, T::a12, T::a21, T::a22;
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(a.cast<Complex>());
        butcher_eig_ = {es.eigenvalues()(0), es.eigenvalues()(1)};
        butcher_T_ = es.eigenvectors();
        butcher_Tinv_ = butcher_T_.inverse();
        factors = {butcher_eig_[0], butcher_eig_[1]};
    }
    factors_per_mode_ = static_cast<int>(factors.size());

    const int modes = disc_->modes();
    if (options_.eigenbasis) {
        const TransverseEigenbasis basis = transverse_eigenbasis(disc_->transverse());
        // an ill-conditioned basis would amplify rounding; fall back to LU
        if (basis.condition < 1e8) {
            const auto m = basis.eigenvalues.size();
            real_basis_ = basis.real;
            if (real_basis_) {
                to_basis_re_t_ = basis.to_basis.real().transpose();
                from_basis_re_t_ = basis.from_basis.real().transpose();
            } else {
                to_basis_t_ = basis.to_basis.transpose();
                from_basis_t_ = basis.from_basis.transpose();
            }
            for (const Complex d : factors) {
                ComplexMatrix sc(modes, m);
                for (int j = 0; j < modes; ++j) {
                    const auto [odd, k] = mode_factors(disc_->grid(), j);
                    const Complex sigma = h_ * d * Complex(0.0, odd);
                    for (Eigen::Index i = 0; i < m; ++i) {
                        const Complex denom = 1.0 + sigma * (basis.eigenvalues(i) - k * k);
                        if (!(std::abs(denom) > 1e-14)) {
                            std::ostringstream msg;
                            msg << "singular stage matrix at k=" << k << " (row " << j << "), h=" << h_;
                            throw NumericalError(msg.str());
                        }
                        sc(j, i) = 1.0 / denom;
                    }
                }
                scale_.push_back(std::move(sc));
            }
            return;
        }
    }

    lu_.resize(static_cast<std::size_t>(modes) * factors_per_mode_);
    for (int j = 0; j < modes; ++j) {
        for (int f = 0; f < factors_per_mode_; ++f) {
            auto& lu = lu_[static_cast<std::size_t>(j) * factors_per_mode_ + f];
            lu.compute(stage_matrix(j, f));
            const double rcond = lu.rcond();
            if (!(rcond > 1e-14)) {
                std::ostringstream msg;
                msg << "singular stage matrix at k=" << disc_->grid().k(j) << " (row " << j << "), h=" << h_
                    << ", rcond=" << rcond;
                throw NumericalError(msg.str());
            }
        }
    }
}

DenseComplexMatrix StageSolver::stage_matrix(int j, int f) const {
    const auto& op = disc_->transverse();
    const int n = op.size();
    Complex d(T::a11, 0.0);
    if (options_.coupling == StageCoupling::Coupled) d = butcher_eig_.at(static_cast<std::size_t>(f));
    const auto [odd, k] = mode_factors(disc_->grid(), j);
    // I - h d J_k with J_k = -i k (L - k^2)
    DenseComplexMatrix m = DenseComplexMatrix::Identity(n, n);
    const Complex scale = h_ * d * Complex(0.0, odd);
    m += scale * (op.laplacian - (k * k) * DenseMatrix::Identity(n, n)).cast<Complex>();
    for (int r = 0; r < 3; ++r) {
        m.row(op.tau_rows[r]) = op.constraints.row(r).cast<Complex>();
    }
    return m;
}

void StageSolver::solve_stages(int f, ComplexMatrix& rhs) const {
    for (int r : disc_->transverse().tau_rows) rhs.col(r).setZero();
    if (!scale_.empty()) {
        const auto& sc = scale_.at(static_cast<std::size_t>(f));
        if (real_basis_) {
            ComplexMatrix t(rhs.rows(), sc.cols());
            t.real() = rhs.real() * to_basis_re_t_;
            t.imag() = rhs.imag() * to_basis_re_t_;
            t.array() *= sc.array();
            rhs.real() = t.real() * from_basis_re_t_;
            rhs.imag() = t.imag() * from_basis_re_t_;
        } else {
            ComplexMatrix t = (rhs * to_basis_t_).cwiseProduct(sc);
            rhs = t * from_basis_t_;
        }
        return;
    }
    for (Eigen::Index j = 0; j < rhs.rows(); ++j) {
        ComplexVector r = rhs.row(j).transpose();
        r = lu_[static_cast<std::size_t>(j) * factors_per_mode_ + f].solve(r);
        rhs.row(j) = r.transpose();
    }
}

ModalField StageSolver::nonlinear_term(const ModalField& stage_value, const Nonlinearity& nl) const {
    const auto& grid = disc_->grid();
    if (!nl.active) return ModalField(disc_);
    Field u = inverse_x(stage_value);
    signed_power(u.values, nl.p, u.values);
    ModalField g = forward_x(u);
    if (nl.dealias) {
        for (int j = grid.N / 3 + 1; j < grid.modes(); ++j) g.values.row(j).setZero();
    }
    for (int j = 0; j < grid.modes(); ++j) {
        g.values.row(j) *= Complex(0.0, -mode_factors(grid, j).odd);
    }
    for (int r : disc_->transverse().tau_rows) g.values.col(r).setZero();
    return g;
}

Field StageSolver::step(const Field& u, const Nonlinearity& nl, StepStats* stats) const {
    if (u.values.rows() != disc_->nx() || u.values.cols() != disc_->nr()) {
        throw ShapeError("step: field does not match the solver's discretization");
    }
    const double h = h_;

    const ModalField U = forward_x(u);
    ComplexMatrix JU;
    apply_linear(*disc_, U.values, JU);

    // warm start: both stages at the explicit right-hand side
    ComplexMatrix K1 = JU + nonlinear_term(U, nl).values;
    ComplexMatrix K2 = K1;

    ModalField stage(disc_);
    ComplexMatrix rhs1, rhs2, JK;
    double change = 0.0;
    int it = 0;
    bool converged = false;
    for (it = 1; it <= options_.max_newton; ++it) {
        ComplexMatrix K1_new, K2_new;
        if (options_.coupling == StageCoupling::Sweep) {
            stage.values = U.values + h * (T::a11 * K1 + T::a12 * K2);
            apply_linear(*disc_, K2, JK);
            rhs1 = JU + (h * T::a12) * JK + nonlinear_term(stage, nl).values;
            solve_stages(0, rhs1);
            K1_new = std::move(rhs1);

            stage.values = U.values + h * (T::a21 * K1_new + T::a22 * K2);
            apply_linear(*disc_, K1_new, JK);
            rhs2 = JU + (h * T::a21) * JK + nonlinear_term(stage, nl).values;
            solve_stages(0, rhs2);
            K2_new = std::move(rhs2);
        } else {
            stage.values = U.values + h * (T::a11 * K1 + T::a12 * K2);
            const ComplexMatrix R1 = JU + nonlinear_term(stage, nl).values;
            stage.values = U.values + h * (T::a21 * K1 + T::a22 * K2);
            const ComplexMatrix R2 = JU + nonlinear_term(stage, nl).values;
            ComplexMatrix W1 = butcher_Tinv_(0, 0) * R1 + butcher_Tinv_(0, 1) * R2;
            ComplexMatrix W2 = butcher_Tinv_(1, 0) * R1 + butcher_Tinv_(1, 1) * R2;
            solve_stages(0, W1);
            solve_stages(1, W2);
            K1_new = butcher_T_(0, 0) * W1 + butcher_T_(0, 1) * W2;
            K2_new = butcher_T_(1, 0) * W1 + butcher_T_(1, 1) * W2;
        }

        change = std::max(physical_max(*disc_, K1_new - K1), physical_max(*disc_, K2_new - K2));
        K1 = std::move(K1_new);
        K2 = std::move(K2_new);
        if (!std::isfinite(change)) break;
        if (change < options_.newton_tol) {
            converged = true;
            break;
        }
    }
    if (stats != nullptr) {
        stats->iterations = std::min(it, options_.max_newton);
        stats->last_change = change;
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "simplified Newton iteration did not converge in " << options_.max_newton
            << " iterations (last change " << change << ", h=" << h_ << ")";
        throw StepFailure(msg.str(), options_.max_newton, change);
    }

    ModalField next(disc_, U.values + h * (T::b1 * K1 + T::b2 * K2));
    return inverse_x(next);
}

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::Completed: return "completed";
        case StopReason::BlowUp: return "blow-up";
        case StopReason::StepFailure: return "step-failure";
        case StopReason::NonFinite: return "non-finite";
    }
    return "unknown";
}

EvolveReport evolve(const Field& u0, double t_end, long n_steps, const Nonlinearity& nl,
                    const EvolveOptions& options) {
    if (n_steps < 1) {
        throw ConfigError("number of time steps must be >= 1");
    }
    const double span = t_end - options.t0;
    if (!(span > 0.0)) {
        throw ConfigError("t_end must be greater than the start time");
    }
    const double h = span / static_cast<double>(n_steps);
    StageSolver solver(h, u0.disc_ptr(), options.stage);

    EvolveReport report{.final_field = u0};
    report.t_final = options.t0;
    report.linf_initial = u0.values.cwiseAbs().maxCoeff();
    const double linf_ref = options.linf_reference > 0.0 ? options.linf_reference : report.linf_initial;
    report.linf_final = report.linf_initial;

    for (long s = 1; s <= n_steps; ++s) {
        StepStats stats;
        Field next(u0.disc_ptr());
        try {
            next = solver.step(report.final_field, nl, &stats);
        } catch (const StepFailure& e) {
            report.stop = StopReason::StepFailure;
            report.message = e.what();
            report.max_iterations = std::max(report.max_iterations, e.iterations());
            break;
        }
        const double li = next.values.cwiseAbs().maxCoeff();
        if (!std::isfinite(li)) {
            report.stop = StopReason::NonFinite;
            report.message = "non-finite values after step " + std::to_string(s);
            break;
        }
        report.final_field = std::move(next);
        report.t_final = s == n_steps ? t_end : options.t0 + static_cast<double>(s) * h;
        report.steps_taken = s;
        report.linf_final = li;
        report.max_iterations = std::max(report.max_iterations, stats.iterations);
        if (options.on_step) options.on_step(s, report.t_final, report.final_field, stats.iterations);
        if (li > options.detector.linf_factor * linf_ref && stats.iterations > options.detector.newton_trigger) {
            report.stop = StopReason::BlowUp;
            std::ostringstream msg;
            msg << "blow-up detector fired at t=" << report.t_final << ": L-infinity " << li << " exceeds "
                << options.detector.linf_factor << " x " << linf_ref << " with " << stats.iterations
                << " Newton iterations";
            report.message = msg.str();
            break;
        }
    }
    return report;
}

}  // namespace zkcyl
