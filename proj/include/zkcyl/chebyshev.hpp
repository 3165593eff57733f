#pragma once

#include <span>
#include <vector>

#include "zkcyl/types.hpp"

namespace zkcyl {

/// Chebyshev-Gauss-Lobatto collocation data of degree N_c.
/// Points run from +1 down to -1: l_n = cos(pi n / N_c).
struct ChebKernel {
    int degree = 0;
    std::vector<double> points;
    DenseMatrix D;   ///< first derivative
    DenseMatrix D2;  ///< D * D
};

ChebKernel cheb_kernel(int degree);

/// Chebyshev coefficients a_n with sum_n a_n T_n(l_m) = samples[m].
/// Uses the discrete cosine transform (FFTW REDFT00).
std::vector<double> cheb_coefficients(std::span<const double> samples);

/// O(N^2) direct evaluation of the same cosine sum.
std::vector<double> cheb_coefficients_dense(std::span<const double> samples);

/// Clenshaw-Curtis weights for integrals over l in [-1, 1] at the
/// points cos(pi n / N_c).
std::vector<double> clenshaw_curtis_weights(int degree);

/// max |a_n| over the trailing ceil(fraction * size) coefficients.
double tail_magnitude(std::span<const double> coeffs, double fraction);

/// Batched coefficient transform for many sample columns of equal length.
/// Plans are created once; apply() is safe to call concurrently.
class CosineTransform {
public:
    explicit CosineTransform(int degree);
    ~CosineTransform();
    CosineTransform(const CosineTransform&) = delete;
    CosineTransform& operator=(const CosineTransform&) = delete;

    int degree() const noexcept { return degree_; }
    /// In-place: samples -> coefficients, length degree+1.
    void apply(std::span<double> data) const;

private:
    int degree_;
    void* plan_ = nullptr;
};

}  // namespace zkcyl
