#include "zkcyl/radial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "zkcyl/error.hpp"

namespace zkcyl {

namespace {

/// Reverses row and column order, turning l = +1..-1 node order into -1..+1.
DenseMatrix reversed(const DenseMatrix& m) {
    return m.colwise().reverse().rowwise().reverse();
}

}  // namespace

RadialLayout::RadialLayout(double rho0, double rho1, int n_inner, int n_outer)
    : rho0_(rho0), rho1_(rho1) {
    if (!(rho0 > 0.0) || !(rho1 > rho0)) {
        throw ConfigError("radial layout needs 0 < rho0 < rho1, got rho0=" + std::to_string(rho0) +
                          " rho1=" + std::to_string(rho1));
    }
    if (n_inner < 4 || n_outer < 4) {
        throw ConfigError("radial Chebyshev degrees must be >= 4, got N_I=" + std::to_string(n_inner) +
                          " N_II=" + std::to_string(n_outer));
    }
    inner_ = cheb_kernel(n_inner);
    outer_ = cheb_kernel(n_outer);

    const double r02 = rho0 * rho0;
    inner_s_.resize(n_inner + 1);
    for (int i = 0; i <= n_inner; ++i) {
        const double l = inner_.points[n_inner - i];
        inner_s_[i] = r02 * (1.0 + l) / 2.0;
    }
    inner_s_.front() = 0.0;
    inner_s_.back() = r02;

    outer_rho_.resize(n_outer + 1);
    for (int i = 0; i <= n_outer; ++i) {
        const double l = outer_.points[i];
        outer_rho_[i] = rho0 * (1.0 + l) / 2.0 + rho1 * (1.0 - l) / 2.0;
    }
    outer_rho_.front() = rho0;
    outer_rho_.back() = rho1;

    physical_rho_.reserve(size());
    for (double s : inner_s_) physical_rho_.push_back(std::sqrt(s));
    physical_rho_[inner_interface_index()] = rho0;
    for (double r : outer_rho_) physical_rho_.push_back(r);

    // int f rho drho = 1/2 int f ds = rho0^2/4 int f dl on domain I;
    // = (rho1 - rho0)/2 int f rho dl on domain II.
    const auto w_inner = clenshaw_curtis_weights(n_inner);
    const auto w_outer = clenshaw_curtis_weights(n_outer);
    quad_weights_.resize(size());
    for (int i = 0; i <= n_inner; ++i) {
        quad_weights_[i] = r02 / 4.0 * w_inner[n_inner - i];
    }
    for (int i = 0; i <= n_outer; ++i) {
        quad_weights_[outer_offset() + i] = (rho1 - rho0) / 2.0 * w_outer[i] * outer_rho_[i];
    }

    inner_ds_ = reversed(inner_.D) * (2.0 / r02);
    outer_drho_ = outer_.D * (2.0 / (rho0 - rho1));
}

bool RadialLayout::same_shape(const RadialLayout& other) const noexcept {
    return rho0_ == other.rho0_ && rho1_ == other.rho1_ && n_inner() == other.n_inner() &&
           n_outer() == other.n_outer();
}

RadialLayout build_layout(double rho0, double rho1, int n_inner, int n_outer) {
    return RadialLayout(rho0, rho1, n_inner, n_outer);
}

DenseMatrix inner_operator(const RadialLayout& layout) {
    const double dl = 2.0 / (layout.rho0() * layout.rho0());
    const DenseMatrix d1 = reversed(layout.inner_kernel().D) * dl;
    const DenseMatrix d2 = reversed(layout.inner_kernel().D2) * (dl * dl);
    DenseMatrix op = 4.0 * d1;
    const auto& s = layout.inner_s();
    for (int i = 0; i < layout.inner_size(); ++i) {
        op.row(i) += 4.0 * s[i] * d2.row(i);
    }
    return op;
}

DenseMatrix outer_operator(const RadialLayout& layout) {
    const double dl = 2.0 / (layout.rho0() - layout.rho1());
    const DenseMatrix d1 = layout.outer_kernel().D * dl;
    DenseMatrix op = layout.outer_kernel().D2 * (dl * dl);
    const auto& rho = layout.outer_rho();
    for (int i = 0; i < layout.outer_size(); ++i) {
        op.row(i) += d1.row(i) / rho[i];
    }
    return op;
}

bool TransverseOperator::is_tau_row(int row) const noexcept {
    return std::find(tau_rows.begin(), tau_rows.end(), row) != tau_rows.end();
}

TransverseOperator assemble_transverse(const RadialLayout& layout) {
    const int n = layout.size();
    const int ni = layout.inner_size();
    const int off = layout.outer_offset();

    TransverseOperator op;
    op.laplacian = DenseMatrix::Zero(n, n);
    op.laplacian.topLeftCorner(ni, ni) = inner_operator(layout);
    op.laplacian.bottomRightCorner(layout.outer_size(), layout.outer_size()) = outer_operator(layout);

    op.tau_rows = {layout.inner_interface_index(), layout.outer_interface_index(), layout.boundary_index()};

    op.constraints = DenseMatrix::Zero(3, n);
    // value matching
    op.constraints(0, layout.inner_interface_index()) = 1.0;
    op.constraints(0, layout.outer_interface_index()) = -1.0;
    // derivative matching: 2 rho0 u_s^I - u_rho^II at the interface
    op.constraints.block(1, 0, 1, ni) = 2.0 * layout.rho0() * layout.inner_ds().row(ni - 1);
    op.constraints.block(1, off, 1, layout.outer_size()) = -layout.outer_drho().row(0);
    // Dirichlet at rho1
    op.constraints(2, layout.boundary_index()) = 1.0;

    op.matrix = op.laplacian;
    for (int r = 0; r < 3; ++r) {
        op.matrix.row(op.tau_rows[r]) = op.constraints.row(r);
    }
    return op;
}

TransverseEigenbasis transverse_eigenbasis(const TransverseOperator& op) {
    const int n = op.size();
    const int m = n - 3;
    // orthonormal basis of the constraint null space
    Eigen::HouseholderQR<DenseMatrix> qr(op.constraints.transpose());
    const DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(n, n);
    const DenseMatrix z = q.rightCols(m);

    std::vector<int> interior;
    for (int r = 0; r < n; ++r) {
        if (!op.is_tau_row(r)) interior.push_back(r);
    }
    DenseMatrix g(m, m), h(m, m);
    const DenseMatrix lz = op.laplacian * z;
    for (int i = 0; i < m; ++i) {
        g.row(i) = z.row(interior[i]);
        h.row(i) = lz.row(interior[i]);
    }
    const Eigen::PartialPivLU<DenseMatrix> g_lu(g);
    Eigen::EigenSolver<DenseMatrix> es(g_lu.solve(h));
    if (es.info() != Eigen::Success) throw NumericalError("transverse eigendecomposition failed");

    TransverseEigenbasis basis;
    basis.eigenvalues = es.eigenvalues();
    const DenseComplexMatrix v = es.eigenvectors();
    const Eigen::PartialPivLU<DenseComplexMatrix> v_lu(v);
    // V^-1 G^-1 S
    const DenseComplexMatrix vg = v_lu.solve(g_lu.inverse().cast<Complex>());
    basis.to_basis = DenseComplexMatrix::Zero(m, n);
    for (int i = 0; i < m; ++i) basis.to_basis.col(interior[i]) = vg.col(i);
    basis.from_basis = z.cast<Complex>() * v;

    const Eigen::JacobiSVD<DenseComplexMatrix> svd(v);
    const auto& sv = svd.singularValues();
    basis.condition = sv(0) / sv(sv.size() - 1);
    const double scale = basis.eigenvalues.cwiseAbs().maxCoeff();
    basis.real = basis.eigenvalues.imag().cwiseAbs().maxCoeff() <= 1e-12 * scale &&
                 v.imag().cwiseAbs().maxCoeff() == 0.0;
    return basis;
}

}  // namespace zkcyl
