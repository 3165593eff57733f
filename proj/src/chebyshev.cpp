#include "zkcyl/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fftw3.h>

#include "fftw_lock.hpp"
#include "zkcyl/error.hpp"

namespace zkcyl {

ChebKernel cheb_kernel(int degree) {
    if (degree < 2) {
        throw ConfigError("Chebyshev degree must be >= 2, got " + std::to_string(degree));
    }
    const int n = degree;
    ChebKernel k;
    k.degree = n;
    k.points.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        k.points[j] = std::cos(pi * j / n);
    }
    // sin form of the differences avoids cancellation near the endpoints.
    auto diff = [n](int i, int j) {
        return 2.0 * std::sin(pi * (j + i) / (2.0 * n)) * std::sin(pi * (j - i) / (2.0 * n));
    };
    auto weight = [n](int j) {
        const double c = (j == 0 || j == n) ? 2.0 : 1.0;
        return (j % 2 == 0) ? c : -c;
    };

    k.D = DenseMatrix::Zero(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j <= n; ++j) {
            if (i == j) continue;
            k.D(i, j) = weight(i) / weight(j) / diff(i, j);
            row_sum += k.D(i, j);
        }
        // negative-sum trick: rows annihilate constants to rounding.
        k.D(i, i) = -row_sum;
    }
    // explicit second-derivative entries, again with the negative-sum
    // diagonal; more accurate than squaring D near the endpoints.
    k.D2 = DenseMatrix::Zero(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j <= n; ++j) {
            if (i == j) continue;
            k.D2(i, j) = 2.0 * k.D(i, j) * (k.D(i, i) - 1.0 / diff(i, j));
            row_sum += k.D2(i, j);
        }
        k.D2(i, i) = -row_sum;
    }
    return k;
}

std::vector<double> cheb_coefficients(std::span<const double> samples) {
    if (samples.size() < 3) {
        throw ShapeError("Chebyshev coefficient transform needs at least 3 samples");
    }
    CosineTransform transform(static_cast<int>(samples.size()) - 1);
    std::vector<double> out(samples.begin(), samples.end());
    transform.apply(out);
    return out;
}

std::vector<double> cheb_coefficients_dense(std::span<const double> samples) {
    if (samples.size() < 3) {
        throw ShapeError("Chebyshev coefficient transform needs at least 3 samples");
    }
    const int n = static_cast<int>(samples.size()) - 1;
    std::vector<double> a(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        double s = 0.0;
        for (int m = 0; m <= n; ++m) {
            const double cm = (m == 0 || m == n) ? 0.5 : 1.0;
            // cos(pi k m / n) with the argument reduced modulo 2n for accuracy
            s += cm * samples[m] * std::cos(pi * static_cast<double>((static_cast<long>(k) * m) % (2 * n)) / n);
        }
        const double ck = (k == 0 || k == n) ? 2.0 : 1.0;
        a[k] = 2.0 * s / (n * ck);
    }
    return a;
}

std::vector<double> clenshaw_curtis_weights(int degree) {
    if (degree < 2) {
        throw ConfigError("Clenshaw-Curtis degree must be >= 2");
    }
    const int n = degree;
    std::vector<double> w(n + 1, 0.0);
    std::vector<double> v(n - 1, 1.0);
    auto theta = [n](int j) { return pi * j / n; };
    if (n % 2 == 0) {
        w[0] = w[n] = 1.0 / (static_cast<double>(n) * n - 1.0);
        for (int k = 1; k < n / 2; ++k) {
            for (int j = 1; j < n; ++j) v[j - 1] -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
        }
        for (int j = 1; j < n; ++j) v[j - 1] -= std::cos(n * theta(j)) / (static_cast<double>(n) * n - 1.0);
    } else {
        w[0] = w[n] = 1.0 / (static_cast<double>(n) * n);
        for (int k = 1; k <= (n - 1) / 2; ++k) {
            for (int j = 1; j < n; ++j) v[j - 1] -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
        }
    }
    for (int j = 1; j < n; ++j) w[j] = 2.0 * v[j - 1] / n;
    return w;
}

double tail_magnitude(std::span<const double> coeffs, double fraction) {
    if (coeffs.empty()) {
        throw ShapeError("tail_magnitude of an empty coefficient array");
    }
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw ConfigError("tail fraction must lie in (0, 1]");
    }
    const auto size = coeffs.size();
    auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(size) - 1e-12));
    count = std::clamp<std::size_t>(count, 1, size);
    double m = 0.0;
    for (std::size_t i = size - count; i < size; ++i) m = std::max(m, std::abs(coeffs[i]));
    return m;
}

CosineTransform::CosineTransform(int degree) : degree_(degree) {
    if (degree < 2) {
        throw ConfigError("cosine transform degree must be >= 2");
    }
    std::vector<double> scratch(degree + 1);
    std::lock_guard lock(detail::fftw_planner_mutex());
    plan_ = fftw_plan_r2r_1d(degree + 1, scratch.data(), scratch.data(), FFTW_REDFT00,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan_ == nullptr) {
        throw NumericalError("FFTW failed to plan a cosine transform");
    }
}

CosineTransform::~CosineTransform() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void CosineTransform::apply(std::span<double> data) const {
    if (static_cast<int>(data.size()) != degree_ + 1) {
        throw ShapeError("cosine transform length mismatch");
    }
    // REDFT00: Y_k = X_0 + (-1)^k X_n + 2 sum_{j=1}^{n-1} X_j cos(pi j k / n)
    fftw_execute_r2r(static_cast<fftw_plan>(plan_), data.data(), data.data());
    const double n = degree_;
    for (int k = 0; k <= degree_; ++k) {
        const double ck = (k == 0 || k == degree_) ? 2.0 : 1.0;
        data[k] /= n * ck;
    }
}

}  // namespace zkcyl
