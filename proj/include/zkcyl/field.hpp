#pragma once

#include <memory>

#include "zkcyl/radial.hpp"
#include "zkcyl/torus.hpp"
#include "zkcyl/types.hpp"

namespace zkcyl {

/// Batched real FFT along x for an N x M row-major array (M transverse
/// columns). Forward is normalized by 1/N so that a row of modal values
/// holds the Fourier coefficients of the trigonometric interpolant:
///   u(x_n) = sum_j c_j exp(i k_j (x_n + pi L)).
/// Plans use FFTW's new-array interface and are safe for concurrent use.
class FourierTransform {
public:
    FourierTransform(int n, int columns);
    ~FourierTransform();
    FourierTransform(const FourierTransform&) = delete;
    FourierTransform& operator=(const FourierTransform&) = delete;

    int size() const noexcept { return n_; }
    int columns() const noexcept { return columns_; }

    void forward(const RealMatrix& in, ComplexMatrix& out) const;
    /// Consumes a half spectrum; the result is real by construction.
    void inverse(const ComplexMatrix& in, RealMatrix& out) const;

private:
    int n_;
    int columns_;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
};

/// Everything a field needs to know about its grid. Immutable once built
/// and shared between fields, solvers, and diagnostics.
class Discretization {
public:
    Discretization(TorusGrid grid, RadialLayout layout);

    const TorusGrid& grid() const noexcept { return grid_; }
    const RadialLayout& layout() const noexcept { return layout_; }
    const TransverseOperator& transverse() const noexcept { return op_; }
    const FourierTransform& fft() const noexcept { return fft_; }

    int nx() const noexcept { return grid_.N; }
    int nr() const noexcept { return layout_.size(); }
    int modes() const noexcept { return grid_.modes(); }

    bool same_shape(const Discretization& other) const noexcept;

private:
    TorusGrid grid_;
    RadialLayout layout_;
    TransverseOperator op_;
    FourierTransform fft_;
};

using DiscretizationPtr = std::shared_ptr<const Discretization>;

DiscretizationPtr make_discretization(const TorusGrid& grid, const RadialLayout& layout);

/// Real samples u(x_n, rho_j): N rows (x-nodes) by M columns (transverse nodes).
class Field {
public:
    explicit Field(DiscretizationPtr disc);
    Field(DiscretizationPtr disc, RealMatrix values);

    const Discretization& disc() const noexcept { return *disc_; }
    const DiscretizationPtr& disc_ptr() const noexcept { return disc_; }

    RealMatrix values;

private:
    DiscretizationPtr disc_;
};

/// Fourier-in-x coefficients over the half spectrum k_j, j = 0..N/2.
/// The negative wavenumbers are implied by conjugate symmetry.
class ModalField {
public:
    explicit ModalField(DiscretizationPtr disc);
    ModalField(DiscretizationPtr disc, ComplexMatrix values);

    const Discretization& disc() const noexcept { return *disc_; }
    const DiscretizationPtr& disc_ptr() const noexcept { return disc_; }

    ComplexMatrix values;

private:
    DiscretizationPtr disc_;
};

ModalField forward_x(const Field& field);
Field inverse_x(const ModalField& modal);

/// Spectral x-derivative; the Nyquist coefficient is dropped.
Field dx(const Field& field);

/// Trigonometric interpolation of `field` onto `target`, which must share L
/// and the transverse layout but may use a different N.
Field resample_x(const Field& field, const DiscretizationPtr& target);

}  // namespace zkcyl
