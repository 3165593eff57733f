#include "zkcyl/ground_state.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "zkcyl/diagnostics.hpp"
#include "zkcyl/error.hpp"

namespace zkcyl {

namespace {

/// (L - k^2) applied per wavenumber and returned in physical space, with the
/// tau columns overwritten by C v.
RealMatrix helmholtz_part(const Field& v, double c) {
    const auto& disc = v.disc();
    const auto& grid = disc.grid();
    const auto& op = disc.transverse();
    ModalField modal = forward_x(v);
    const DenseMatrix lap_t = op.laplacian.transpose();
    ComplexMatrix applied(modal.values.rows(), modal.values.cols());
    applied.real() = modal.values.real() * lap_t;
    applied.imag() = modal.values.imag() * lap_t;
    for (int j = 0; j < grid.modes(); ++j) {
        const double k = grid.k(j);
        applied.row(j) -= (k * k) * modal.values.row(j);
    }
    RealMatrix out;
    disc.fft().inverse(applied, out);
    out -= c * v.values;
    const RealMatrix constrained = v.values * op.constraints.transpose();
    for (int r = 0; r < 3; ++r) out.col(op.tau_rows[r]) = constrained.col(r);
    return out;
}

Eigen::Map<const Vector> flat(const RealMatrix& m) { return {m.data(), m.size()}; }

RealMatrix unflat(const Vector& v, const Discretization& disc) {
    return Eigen::Map<const RealMatrix>(v.data(), disc.nx(), disc.nr());
}

void make_even(Field& f) {
    const Field mirrored = mirror_x(f);
    f.values = 0.5 * (f.values + mirrored.values);
}

}  // namespace

Field residual_linear(const Field& v, double c) { return Field(v.disc_ptr(), helmholtz_part(v, c)); }

Field residual(const Field& field, double c, const Rational& p) {
    RealMatrix out = helmholtz_part(field, c);
    RealMatrix power;
    signed_power(field.values, p, power);
    const auto& op = field.disc().transverse();
    for (int r : op.tau_rows) power.col(r).setZero();
    out += power;
    return Field(field.disc_ptr(), std::move(out));
}

Field residual_jvp(const Field& field, const Field& direction, double c, const Rational& p) {
    RealMatrix out = helmholtz_part(direction, c);
    const double v_norm = direction.values.cwiseAbs().maxCoeff();
    if (v_norm == 0.0) return Field(field.disc_ptr(), std::move(out));
    const double eps = std::sqrt(std::numeric_limits<double>::epsilon()) *
                       (1.0 + field.values.cwiseAbs().maxCoeff()) / v_norm;
    RealMatrix base, shifted;
    signed_power(field.values, p, base);
    signed_power(field.values + eps * direction.values, p, shifted);
    RealMatrix quotient = (shifted - base) / eps;
    for (int r : field.disc().transverse().tau_rows) quotient.col(r).setZero();
    out += quotient;
    return Field(field.disc_ptr(), std::move(out));
}

HelmholtzPreconditioner::HelmholtzPreconditioner(DiscretizationPtr disc, double c) : disc_(std::move(disc)) {
    const auto& grid = disc_->grid();
    const auto& op = disc_->transverse();
    const int n = op.size();
    lu_.resize(grid.modes());
    for (int j = 0; j < grid.modes(); ++j) {
        const double k = grid.k(j);
        DenseMatrix a = op.laplacian - (k * k + c) * DenseMatrix::Identity(n, n);
        for (int r = 0; r < 3; ++r) a.row(op.tau_rows[r]) = op.constraints.row(r);
        lu_[j].compute(a);
    }
}

Field HelmholtzPreconditioner::apply(const Field& v) const {
    ModalField modal = forward_x(v);
    const int n = disc_->nr();
    DenseMatrix parts(n, 2);
    for (int j = 0; j < disc_->modes(); ++j) {
        parts.col(0) = modal.values.row(j).real().transpose();
        parts.col(1) = modal.values.row(j).imag().transpose();
        const DenseMatrix sol = lu_[j].solve(parts);
        for (int m = 0; m < n; ++m) modal.values(j, m) = Complex(sol(m, 0), sol(m, 1));
    }
    return inverse_x(modal);
}

namespace {

GroundStateProfile newton_krylov(const Field& seed, double c, const Rational& p, const GroundStateOptions& opt,
                                 const HelmholtzPreconditioner& pre) {
    const auto& disc = seed.disc();
    Field q = seed;
    if (opt.enforce_even) make_even(q);
    Field r = residual(q, c, p);
    double r_max = r.values.cwiseAbs().maxCoeff();
    double r_two = r.values.norm();

    GroundStateProfile profile{q, c, p};
    int stalled = 0;
    int newton = 0;
    bool converged = r_max < opt.tol;
    while (!converged && newton < opt.max_newton) {
        ++newton;
        const Field base = q;
        auto apply = [&](const Vector& v) -> Vector {
            Field dir(base.disc_ptr(), unflat(v, disc));
            return flat(residual_jvp(base, dir, c, p).values);
        };
        auto precondition = [&](const Vector& v) -> Vector {
            Field f(base.disc_ptr(), unflat(v, disc));
            return flat(pre.apply(f).values);
        };
        const Vector rhs = -flat(r.values);
        const GmresResult lin = gmres(apply, rhs, precondition, opt.gmres);
        profile.gmres_iterations += lin.iterations;
        Field delta(base.disc_ptr(), unflat(lin.x, disc));
        if (opt.enforce_even) make_even(delta);

        double step = 1.0;
        Field trial = base;
        Field trial_r = r;
        for (;;) {
            trial.values = base.values + step * delta.values;
            trial_r = residual(trial, c, p);
            const double two = trial_r.values.norm();
            if ((std::isfinite(two) && two <= (1.0 - 1e-4 * step) * r_two) || step < 1.0 / 64.0) break;
            step *= 0.5;
        }
        const double new_max = trial_r.values.cwiseAbs().maxCoeff();
        const double new_two = trial_r.values.norm();
        if (opt.verbose) {
            std::cerr << "newton " << newton << ": |R|max=" << new_max << " step=" << step
                      << " gmres=" << lin.iterations << " (rel " << lin.residual << ")\n";
        }
        if (!std::isfinite(new_two)) {
            throw SolverFailure("Newton-Krylov iteration diverged", r_max);
        }
        stalled = new_two > 0.9 * r_two ? stalled + 1 : 0;
        q = std::move(trial);
        r = std::move(trial_r);
        r_max = new_max;
        r_two = new_two;
        if (r_max < opt.tol) {
            converged = true;
        } else if (stalled >= 3) {
            break;
        }
    }
    profile.newton_iterations = newton;
    profile.residual_norm = r_max;
    if (!converged && !(r_max < opt.accept_tol)) {
        std::ostringstream msg;
        msg << "Newton-Krylov iteration " << (stalled >= 3 ? "stagnated" : "hit the iteration limit")
            << " with residual " << r_max;
        throw SolverFailure(msg.str(), r_max);
    }
    if (q.values.cwiseAbs().maxCoeff() < 1e-6) {
        throw SolverFailure("Newton-Krylov iteration converged to the trivial solution", r_max);
    }
    profile.field = std::move(q);
    return profile;
}

}  // namespace

GroundStateProfile solve_ground_state(const Field& seed, double c, const Rational& p,
                                      const GroundStateOptions& options) {
    if (!(c > 0.0)) {
        throw ConfigError("wave speed c must be positive");
    }
    if (seed.values.cwiseAbs().maxCoeff() == 0.0) {
        throw ConfigError("ground-state seed must be nonzero");
    }
    const HelmholtzPreconditioner pre(seed.disc_ptr(), c);
    std::vector<Field> seeds{seed};
    for (double a : options.continuation_amplitudes) {
        seeds.push_back(gaussian_data(seed.disc_ptr(), a, 1.0));
    }
    std::string failures;
    double last_residual = std::numeric_limits<double>::infinity();
    for (const Field& s : seeds) {
        try {
            GroundStateProfile profile = newton_krylov(s, c, p, options, pre);
            const Nonlinearity nl(p);
            profile.mass = mass(profile.field);
            profile.energy = energy(profile.field, nl);
            return profile;
        } catch (const SolverFailure& e) {
            failures += std::string(failures.empty() ? "" : "; ") + e.what();
            last_residual = e.last_residual();
            if (options.verbose) std::cerr << "ground state: " << e.what() << "\n";
        }
    }
    throw SolverFailure("ground-state solve failed for every seed: " + failures, last_residual);
}

double energy_mass_ratio(const Rational& p) {
    const std::int64_t a = p.num();
    const std::int64_t b = p.den();
    if (a == 5 * b) {
        throw DomainError("energy/mass ratio is undefined at p = 5");
    }
    const Rational ratio(3 * a - 7 * b, 2 * (5 * b - a));
    return ratio.value();
}

Field shift_in_x(const Field& field, double distance) {
    ModalField modal = forward_x(field);
    const auto& grid = field.disc().grid();
    for (int j = 0; j < grid.modes(); ++j) {
        modal.values.row(j) *= std::polar(1.0, -grid.k(j) * distance);
    }
    return inverse_x(modal);
}

Field mirror_x(const Field& field) {
    const auto& grid = field.disc().grid();
    Field out(field.disc_ptr());
    for (int n = 0; n < grid.N; ++n) out.values.row(n) = field.values.row(grid.mirror(n));
    return out;
}

}  // namespace zkcyl
