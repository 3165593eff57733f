#include "zkcyl/field.hpp"

#include <algorithm>
#include <string>

#include <fftw3.h>

#include "fftw_lock.hpp"
#include "zkcyl/error.hpp"

namespace zkcyl {

FourierTransform::FourierTransform(int n, int columns) : n_(n), columns_(columns) {
    RealMatrix real_scratch(n, columns);
    ComplexMatrix modal_scratch(n / 2 + 1, columns);
    auto* r = real_scratch.data();
    auto* c = reinterpret_cast<fftw_complex*>(modal_scratch.data());
    const int dims[] = {n};
    std::lock_guard lock(detail::fftw_planner_mutex());
    // Column j of the row-major array is a strided sequence (stride = columns,
    // distance between sequences = 1).
    forward_plan_ = fftw_plan_many_dft_r2c(1, dims, columns, r, nullptr, columns, 1, c, nullptr, columns, 1,
                                           FFTW_ESTIMATE | FFTW_UNALIGNED);
    inverse_plan_ = fftw_plan_many_dft_c2r(1, dims, columns, c, nullptr, columns, 1, r, nullptr, columns, 1,
                                           FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (forward_plan_ == nullptr || inverse_plan_ == nullptr) {
        throw NumericalError("FFTW failed to plan the x-transforms");
    }
}

FourierTransform::~FourierTransform() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void FourierTransform::forward(const RealMatrix& in, ComplexMatrix& out) const {
    if (in.rows() != n_ || in.cols() != columns_) {
        throw ShapeError("forward transform: expected " + std::to_string(n_) + "x" + std::to_string(columns_) +
                         " samples, got " + std::to_string(in.rows()) + "x" + std::to_string(in.cols()));
    }
    out.resize(n_ / 2 + 1, columns_);
    // r2c does not modify its input.
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
    out *= 1.0 / n_;
}

void FourierTransform::inverse(const ComplexMatrix& in, RealMatrix& out) const {
    if (in.rows() != n_ / 2 + 1 || in.cols() != columns_) {
        throw ShapeError("inverse transform: expected " + std::to_string(n_ / 2 + 1) + "x" +
                         std::to_string(columns_) + " modes, got " + std::to_string(in.rows()) + "x" +
                         std::to_string(in.cols()));
    }
    ComplexMatrix scratch = in;  // c2r overwrites its input
    // Imaginary parts of the k = 0 and Nyquist rows are not representable in
    // a real signal; drop them explicitly.
    for (Eigen::Index j = 0; j < columns_; ++j) {
        scratch(0, j) = scratch(0, j).real();
        scratch(n_ / 2, j) = scratch(n_ / 2, j).real();
    }
    out.resize(n_, columns_);
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), reinterpret_cast<fftw_complex*>(scratch.data()),
                         out.data());
}

Discretization::Discretization(TorusGrid grid, RadialLayout layout)
    : grid_(std::move(grid)),
      layout_(std::move(layout)),
      op_(assemble_transverse(layout_)),
      fft_(grid_.N, layout_.size()) {}

bool Discretization::same_shape(const Discretization& other) const noexcept {
    return grid_.L == other.grid_.L && grid_.N == other.grid_.N && layout_.same_shape(other.layout_);
}

DiscretizationPtr make_discretization(const TorusGrid& grid, const RadialLayout& layout) {
    return std::make_shared<const Discretization>(grid, layout);
}

Field::Field(DiscretizationPtr disc) : values(RealMatrix::Zero(disc->nx(), disc->nr())), disc_(std::move(disc)) {}

Field::Field(DiscretizationPtr disc, RealMatrix v) : values(std::move(v)), disc_(std::move(disc)) {
    if (values.rows() != disc_->nx() || values.cols() != disc_->nr()) {
        throw ShapeError("field of shape " + std::to_string(values.rows()) + "x" + std::to_string(values.cols()) +
                         " does not match the grid " + std::to_string(disc_->nx()) + "x" +
                         std::to_string(disc_->nr()));
    }
}

ModalField::ModalField(DiscretizationPtr disc)
    : values(ComplexMatrix::Zero(disc->modes(), disc->nr())), disc_(std::move(disc)) {}

ModalField::ModalField(DiscretizationPtr disc, ComplexMatrix v) : values(std::move(v)), disc_(std::move(disc)) {
    if (values.rows() != disc_->modes() || values.cols() != disc_->nr()) {
        throw ShapeError("modal field of shape " + std::to_string(values.rows()) + "x" +
                         std::to_string(values.cols()) + " does not match " + std::to_string(disc_->modes()) +
                         "x" + std::to_string(disc_->nr()));
    }
}

ModalField forward_x(const Field& field) {
    ModalField modal(field.disc_ptr());
    field.disc().fft().forward(field.values, modal.values);
    return modal;
}

Field inverse_x(const ModalField& modal) {
    Field field(modal.disc_ptr());
    modal.disc().fft().inverse(modal.values, field.values);
    return field;
}

Field dx(const Field& field) {
    ModalField modal = forward_x(field);
    const auto& grid = field.disc().grid();
    for (int j = 0; j < grid.modes(); ++j) {
        const Complex ik(0.0, j == grid.nyquist() ? 0.0 : grid.k(j));
        modal.values.row(j) *= ik;
    }
    return inverse_x(modal);
}

Field resample_x(const Field& field, const DiscretizationPtr& target) {
    const auto& from = field.disc();
    if (from.grid().L != target->grid().L || !from.layout().same_shape(target->layout())) {
        throw ShapeError("resample_x: source and target differ in L or transverse layout");
    }
    const ModalField modal = forward_x(field);
    ModalField out(target);
    out.values.setZero();
    const int n_from = from.grid().nyquist();
    const int n_to = target->grid().nyquist();
    const int shared = std::min(n_from, n_to);
    for (int j = 0; j < shared; ++j) out.values.row(j) = modal.values.row(j);
    if (n_to > n_from) {
        // the old Nyquist row is a cosine; split it over +-k
        out.values.row(n_from) = 0.5 * modal.values.row(n_from);
    } else {
        // +-k both alias onto the new Nyquist row
        out.values.row(n_to) = 2.0 * modal.values.row(n_to).real().cast<Complex>();
        if (n_to == n_from) out.values.row(n_to) = modal.values.row(n_to);
    }
    return inverse_x(out);
}

}  // namespace zkcyl
