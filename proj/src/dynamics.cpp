#include "zkcyl/dynamics.hpp"

#include <cmath>

#include "zkcyl/error.hpp"

namespace zkcyl {

Nonlinearity::Nonlinearity(Rational power, bool dealias_flag) : p(power), dealias(dealias_flag) {
    if (!p.has_odd_denominator()) {
        throw ConfigError("nonlinearity power " + p.str() + " must have an odd denominator");
    }
    if (!(p.value() > 1.0)) {
        throw ConfigError("nonlinearity power " + p.str() + " must exceed 1");
    }
}

Nonlinearity Nonlinearity::off() {
    Nonlinearity nl;
    nl.active = false;
    return nl;
}

namespace {

double int_power(double base, std::int64_t e) {
    double result = 1.0;
    while (e > 0) {
        if (e & 1) result *= base;
        base *= base;
        e >>= 1;
    }
    return result;
}

/// |u|^q for q > 0, u >= 0. Denominators 1 and 3 avoid the general pow.
double magnitude_power(double a, const Rational& q) {
    if (a == 0.0) return 0.0;
    if (q.den() == 1) return int_power(a, q.num());
    if (q.den() == 3) return int_power(std::cbrt(a), q.num());
    return std::pow(a, q.value());
}

}  // namespace

double signed_power(double u, const Rational& p) {
    if (u == 0.0) return 0.0;
    const double m = magnitude_power(std::abs(u), p);
    return u < 0.0 ? -m : m;
}

double abs_power(double u, const Rational& q) { return magnitude_power(std::abs(u), q); }

void signed_power(const RealMatrix& in, const Rational& p, RealMatrix& out) {
    out.resize(in.rows(), in.cols());
    const auto size = in.size();
    const double* src = in.data();
    double* dst = out.data();
    for (Eigen::Index i = 0; i < size; ++i) dst[i] = signed_power(src[i], p);
}

namespace {

void apply_linear(const ModalField& modal, ComplexMatrix& out) {
    const auto& disc = modal.disc();
    const auto& grid = disc.grid();
    const auto& lap = disc.transverse().laplacian;
    // (L - k^2) u for every k at once: u L^T with rows = wavenumbers.
    out.noalias() = modal.values * lap.transpose().cast<Complex>();
    for (int j = 0; j < grid.modes(); ++j) {
        const double k = grid.k(j);
        const double kk = j == grid.nyquist() ? 0.0 : k;
        out.row(j) = Complex(0.0, -kk) * (out.row(j) - (k * k) * modal.values.row(j));
    }
}

void zero_tau_columns(const TransverseOperator& op, ComplexMatrix& m) {
    for (int r : op.tau_rows) m.col(r).setZero();
}

}  // namespace

ModalField modal_rhs_linear(const ModalField& modal) {
    ModalField out(modal.disc_ptr());
    apply_linear(modal, out.values);
    zero_tau_columns(modal.disc().transverse(), out.values);
    return out;
}

ModalField modal_rhs(const ModalField& modal, const Nonlinearity& nl) {
    const auto& disc = modal.disc();
    const auto& grid = disc.grid();
    ModalField out(modal.disc_ptr());
    apply_linear(modal, out.values);
    if (!nl.active) {
        zero_tau_columns(disc.transverse(), out.values);
        return out;
    }

    Field u = inverse_x(modal);
    signed_power(u.values, nl.p, u.values);
    ModalField nonlinear = forward_x(u);
    if (nl.dealias) {
        const int cutoff = grid.N / 3;
        for (int j = cutoff + 1; j < grid.modes(); ++j) nonlinear.values.row(j).setZero();
    }
    for (int j = 0; j < grid.modes(); ++j) {
        const double kk = j == grid.nyquist() ? 0.0 : grid.k(j);
        out.values.row(j) -= Complex(0.0, kk) * nonlinear.values.row(j);
    }
    zero_tau_columns(disc.transverse(), out.values);
    return out;
}

Field gaussian_data(const DiscretizationPtr& disc, double lambda, double alpha) {
    if (!(alpha > 0.0)) {
        throw ConfigError("Gaussian width parameter alpha must be positive");
    }
    Field f(disc);
    const auto& x = disc->grid().nodes;
    const auto& rho = disc->layout().physical_rho();
    for (int n = 0; n < disc->nx(); ++n) {
        for (int j = 0; j < disc->nr(); ++j) {
            f.values(n, j) = lambda * std::exp(-alpha * (x[n] * x[n] + rho[j] * rho[j]));
        }
    }
    return f;
}

Field scale_data(const Field& field, double lambda) { return Field(field.disc_ptr(), lambda * field.values); }

}  // namespace zkcyl
