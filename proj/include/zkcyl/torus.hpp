#pragma once

#include <vector>

namespace zkcyl {

/// Uniform grid on the torus x in [-pi L, pi L).
///
/// Nodes are x_n = L(-pi + 2 pi n / N), n = 0..N-1, so x = 0 is the node
/// n = N/2 and the grid is mirror-symmetric under n -> (N - n) mod N.
///
/// Wavenumbers follow the FFT index order: k_j = j/L for j = 0..N/2 and
/// k_j = (j - N)/L for j = N/2+1..N-1. The Nyquist entry is +N/(2L).
/// Modal fields store only the N/2+1 non-negative wavenumbers.
struct TorusGrid {
    double L = 1.0;
    int N = 0;
    std::vector<double> nodes;
    std::vector<double> wavenumbers;

    double spacing() const noexcept;
    double period() const noexcept;
    int modes() const noexcept { return N / 2 + 1; }
    int nyquist() const noexcept { return N / 2; }
    /// Wavenumber of half-spectrum row j (0 <= j <= N/2).
    double k(int j) const noexcept { return static_cast<double>(j) / L; }
    /// Index of the node x = 0.
    int origin() const noexcept { return N / 2; }
    /// Index of the mirror node -x_n.
    int mirror(int n) const noexcept { return (N - n) % N; }
};

TorusGrid make_torus_grid(double L, int N);

}  // namespace zkcyl
