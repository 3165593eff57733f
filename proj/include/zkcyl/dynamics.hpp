#pragma once

#include "zkcyl/field.hpp"
#include "zkcyl/rational.hpp"

namespace zkcyl {

/// Power nonlinearity u^p with p > 1 rational with odd denominator, extended
/// to negative u as an odd function.
struct Nonlinearity {
    Rational p{7, 3};
    /// Zero the top third of the nonlinear term's spectrum (2/3 rule).
    bool dealias = false;
    /// When false the equation is linear (the power term is dropped).
    bool active = true;

    explicit Nonlinearity(Rational power = Rational{7, 3}, bool dealias_flag = false);

    /// The linear equation, for tests and linear-stability experiments.
    static Nonlinearity off();
};

/// |u|^p sign(u); exactly zero at u = 0.
double signed_power(double u, const Rational& p);
/// |u|^q.
double abs_power(double u, const Rational& q);

/// Elementwise signed_power, writing into `out` (may alias `in`).
void signed_power(const RealMatrix& in, const Rational& p, RealMatrix& out);

/// Right-hand side of the modal ZK equation
///   d/dt u_k = -i k (L - k^2) u_k - i k FFT(u^p)_k
/// on interior rows; tau rows carry homogeneous constraints and are zero.
/// The i k factor is dropped at the Nyquist row.
ModalField modal_rhs(const ModalField& modal, const Nonlinearity& nl);

/// Linear part only (the nonlinearity switched off).
ModalField modal_rhs_linear(const ModalField& modal);

/// lambda exp(-alpha (x^2 + rho^2)) on the tensor grid.
Field gaussian_data(const DiscretizationPtr& disc, double lambda, double alpha);

/// Pointwise lambda * field.
Field scale_data(const Field& field, double lambda);

}  // namespace zkcyl
