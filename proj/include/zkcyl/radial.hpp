#pragma once

#include <array>
#include <vector>

#include "zkcyl/chebyshev.hpp"
#include "zkcyl/types.hpp"

namespace zkcyl {

/// Two Chebyshev domains covering rho in [0, rho1].
///
/// Domain I (axis to interface) uses s = rho^2 with s = rho0^2 (1 + l)/2.
/// Domain II uses rho = rho0 (1 + l)/2 + rho1 (1 - l)/2.
///
/// Transverse nodes are stored in increasing rho: indices 0..N_I are domain I
/// from the axis (l = -1) to the interface (l = 1); indices N_I+1..N_I+N_II+1
/// are domain II from the interface (l = 1) to rho1 (l = -1). The two
/// interface nodes N_I and N_I+1 therefore share rho = rho0.
class RadialLayout {
public:
    RadialLayout(double rho0, double rho1, int n_inner, int n_outer);

    double rho0() const noexcept { return rho0_; }
    double rho1() const noexcept { return rho1_; }
    int n_inner() const noexcept { return inner_.degree; }
    int n_outer() const noexcept { return outer_.degree; }

    const ChebKernel& inner_kernel() const noexcept { return inner_; }
    const ChebKernel& outer_kernel() const noexcept { return outer_; }

    int size() const noexcept { return n_inner() + n_outer() + 2; }
    int inner_size() const noexcept { return n_inner() + 1; }
    int outer_size() const noexcept { return n_outer() + 1; }
    int outer_offset() const noexcept { return n_inner() + 1; }

    int axis_index() const noexcept { return 0; }
    int inner_interface_index() const noexcept { return n_inner(); }
    int outer_interface_index() const noexcept { return n_inner() + 1; }
    int boundary_index() const noexcept { return size() - 1; }

    /// s at domain-I nodes (ordered axis -> interface).
    const std::vector<double>& inner_s() const noexcept { return inner_s_; }
    /// rho at domain-II nodes (ordered interface -> rho1).
    const std::vector<double>& outer_rho() const noexcept { return outer_rho_; }
    /// Physical rho at every transverse node.
    const std::vector<double>& physical_rho() const noexcept { return physical_rho_; }
    /// Weights w_j with sum_j w_j f(rho_j) ~ int_0^rho1 f(rho) rho drho.
    const std::vector<double>& quad_weights() const noexcept { return quad_weights_; }

    /// d/ds on domain I in node order (axis -> interface).
    const DenseMatrix& inner_ds() const noexcept { return inner_ds_; }
    /// d/drho on domain II in node order.
    const DenseMatrix& outer_drho() const noexcept { return outer_drho_; }

    bool same_shape(const RadialLayout& other) const noexcept;

private:
    double rho0_;
    double rho1_;
    ChebKernel inner_;
    ChebKernel outer_;
    std::vector<double> inner_s_;
    std::vector<double> outer_rho_;
    std::vector<double> physical_rho_;
    std::vector<double> quad_weights_;
    DenseMatrix inner_ds_;
    DenseMatrix outer_drho_;
};

RadialLayout build_layout(double rho0 = 1.0, double rho1 = 20.0, int n_inner = 20, int n_outer = 100);

/// 4 s d_ss + 4 d_s on domain I, (N_I+1)^2, node order of RadialLayout.
DenseMatrix inner_operator(const RadialLayout& layout);

/// d_rhorho + (1/rho) d_rho on domain II, (N_II+1)^2.
DenseMatrix outer_operator(const RadialLayout& layout);

/// Transverse Laplacian on both domains with three tau rows.
///
/// `laplacian` is the plain block-diagonal collocation operator.
/// `matrix` equals `laplacian` except for the tau rows, which hold the
/// constraint functionals:
///   tau_rows[0] (domain I interface row):  u^I(rho0^2) - u^II(rho0) = 0
///   tau_rows[1] (domain II interface row): 2 rho0 u^I_s(rho0^2) - u^II_rho(rho0) = 0
///   tau_rows[2] (domain II row at rho1):   u^II(rho1) = 0
/// `constraints` holds the same three functionals as a 3 x size matrix.
struct TransverseOperator {
    DenseMatrix matrix;
    DenseMatrix laplacian;
    DenseMatrix constraints;
    std::array<int, 3> tau_rows{};

    int size() const noexcept { return static_cast<int>(matrix.rows()); }
    bool is_tau_row(int row) const noexcept;
};

TransverseOperator assemble_transverse(const RadialLayout& layout);

/// Eigendecomposition of the transverse Laplacian restricted to fields that
/// satisfy the three homogeneous constraints.
///
/// With Z a basis of the constraint null space and S the selection of the
/// non-tau rows, C = (S Z)^-1 S Laplacian Z = V diag(eigenvalues) V^-1. A
/// system (I + sigma (Laplacian - mu)) x = r on non-tau rows, constraints
/// on tau rows with zero right-hand side, then solves as
///   x = from_basis diag(1 / (1 + sigma (eigenvalues - mu))) to_basis r,
/// which lets every wavenumber share one decomposition. The tau entries of
/// r are ignored.
struct TransverseEigenbasis {
    ComplexVector eigenvalues;
    /// m x n, zero in the tau columns.
    DenseComplexMatrix to_basis;
    /// n x m.
    DenseComplexMatrix from_basis;
    /// Spectral condition number of V.
    double condition = 0.0;
    /// All eigenvalues (and hence V) real to rounding.
    bool real = false;
};

TransverseEigenbasis transverse_eigenbasis(const TransverseOperator& op);

}  // namespace zkcyl
