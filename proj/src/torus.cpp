#include "zkcyl/torus.hpp"

#include <string>

#include "zkcyl/error.hpp"
#include "zkcyl/types.hpp"

namespace zkcyl {

double TorusGrid::spacing() const noexcept { return 2.0 * pi * L / N; }

double TorusGrid::period() const noexcept { return 2.0 * pi * L; }

TorusGrid make_torus_grid(double L, int N) {
    if (!(L > 0.0)) {
        throw ConfigError("torus scale L must be positive, got " + std::to_string(L));
    }
    if (N < 4 || (N & (N - 1)) != 0) {
        throw ConfigError("number of x-nodes must be a power of two >= 4, got " + std::to_string(N));
    }
    TorusGrid grid;
    grid.L = L;
    grid.N = N;
    grid.nodes.resize(N);
    grid.wavenumbers.resize(N);
    for (int n = 0; n < N; ++n) {
        grid.nodes[n] = L * (-pi + 2.0 * pi * n / N);
        const int j = n <= N / 2 ? n : n - N;
        grid.wavenumbers[n] = j / L;
    }
    return grid;
}

}  // namespace zkcyl
