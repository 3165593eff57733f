#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "zkcyl/diagnostics.hpp"
#include "zkcyl/error.hpp"
#include "zkcyl/gauss2.hpp"

using namespace zkcyl;
using zkcyl::testing::small_disc;

namespace {

DiscretizationPtr wide_disc(int n = 256, int n_outer = 100) {
    return make_discretization(make_torus_grid(5.0, n), build_layout(1, 20, 20, n_outer));
}

/// Gaussian energy in closed form for u = lambda exp(-alpha r^2), p = 7/3.
double gaussian_energy(double lambda, double alpha) {
    const double kinetic = 1.5 * lambda * lambda * alpha * std::pow(pi / (2 * alpha), 1.5);
    const double potential = 0.3 * std::pow(lambda, 10.0 / 3.0) * std::pow(3 * pi / (10 * alpha), 1.5);
    return kinetic - potential;
}

/// A bump at x = 0 plus a wake behind it whose |u| = level contour is
/// exactly rho = slope (x_peak - x).
Field cone_fixture(const DiscretizationPtr& disc, double level, double slope, bool with_wake = true) {
    Field f(disc);
    const auto& x = disc->grid().nodes;
    const auto& rho = disc->layout().physical_rho();
    for (int n = 0; n < disc->nx(); ++n) {
        for (int j = 0; j < disc->nr(); ++j) {
            double v = 3.0 * std::exp(-(x[n] * x[n] + rho[j] * rho[j]));
            const double behind = -x[n];
            if (with_wake && behind > 0.0) {
                const double q = rho[j] / (slope * behind);
                v += level * std::exp(1.0 - q * q);
            }
            f.values(n, j) = v;
        }
    }
    return f;
}

std::vector<DiagnosticsRecord> series(std::initializer_list<std::pair<double, double>> mass_energy) {
    std::vector<DiagnosticsRecord> out;
    double t = 0.0;
    for (auto [m, e] : mass_energy) {
        DiagnosticsRecord r;
        r.t = t;
        r.mass = m;
        r.energy = e;
        out.push_back(r);
        t += 0.1;
    }
    return out;
}

}  // namespace

TEST_CASE("diagnostics of the zero field") {
    const Field z(small_disc());
    CHECK(mass(z) == 0.0);
    CHECK(mass_parseval(z) == 0.0);
    CHECK(energy(z, Nonlinearity()) == 0.0);
    CHECK(linf(z) == 0.0);
    CHECK(fourier_tail(z) == 0.0);
}

TEST_CASE("Gaussian mass and energy against closed forms") {
    const auto disc = wide_disc();
    for (double lambda : {1.0, 2.0, 5.0}) {
        const Field g = gaussian_data(disc, lambda, 1.0);
        const double m_exact = lambda * lambda * std::pow(pi / 2, 1.5);
        CHECK(std::abs(mass(g) - m_exact) < 1e-10 * m_exact);
        CHECK(std::abs(mass_parseval(g) - m_exact) < 1e-10 * m_exact);
        const double e_exact = gaussian_energy(lambda, 1.0);
        MESSAGE("lambda " << lambda << " energy " << energy(g, Nonlinearity()) << " exact " << e_exact);
        CHECK(std::abs(energy(g, Nonlinearity()) - e_exact) < 1e-8 * std::abs(e_exact));
    }
}

TEST_CASE("linear energy is the Dirichlet integral") {
    const auto disc = wide_disc();
    const Field g = gaussian_data(disc, 2.0, 1.0);
    const double kinetic = 1.5 * 4.0 * std::pow(pi / 2, 1.5);
    CHECK(std::abs(energy(g, Nonlinearity::off()) - kinetic) < 1e-10 * kinetic);
}

TEST_CASE("spectral tails of smooth data are tiny") {
    const Field g = gaussian_data(wide_disc(), 1.0, 1.0);
    CHECK(fourier_tail(g) < 1e-14);
    const auto tails = cheb_tails(g);
    CHECK(tails.inner < 1e-12);
    CHECK(tails.outer < 1e-10);
    const auto rec = make_record(0.5, g, Nonlinearity(), 3);
    CHECK(rec.t == 0.5);
    CHECK(rec.newton_iters == 3);
    CHECK(rec.linf == 1.0);
    CHECK(rec.cheb_tail_I == tails.inner);
}

TEST_CASE("diagnostics text round trip") {
    std::stringstream io;
    write_diagnostics_header(io);
    const std::string header = io.str();
    CHECK(header == "t\tmass\tenergy\tlinf\tfourier_tail\tcheb_tail_I\tcheb_tail_II\tnewton_iters\n");
    DiagnosticsRecord a{0.1, 63.78311578443621, -1.7e-11, 4.19, 1e-17, 2e-16, 3e-15, 5};
    DiagnosticsRecord b{1.0 / 3.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7};
    write_diagnostics_row(io, a);
    write_diagnostics_row(io, b);
    const auto back = read_diagnostics(io);
    REQUIRE(back.size() == 2);
    CHECK(back[0].mass == a.mass);
    CHECK(back[0].energy == a.energy);
    CHECK(back[1].t == b.t);
    CHECK(back[1].newton_iters == 7);
    std::stringstream bad("t\tmass\n0\tx\n");
    CHECK_THROWS_AS(read_diagnostics(bad), FormatError);
}

TEST_CASE("drift report") {
    SUBCASE("constant-zero series drifts exactly zero") {
        const auto s = series({{0, 0}, {0, 0}, {0, 0}});
        const auto r = drift_report(s);
        CHECK(r.mass_drift == 0.0);
        CHECK(r.energy_drift == 0.0);
        CHECK_FALSE(r.flagged());
    }
    SUBCASE("fewer than two records") {
        const auto s = series({{1, 1}});
        CHECK_THROWS(drift_report(s));
    }
    SUBCASE("relative drifts and flags") {
        const auto s = series({{10, 2}, {10 + 1e-6, 2}, {10, 2 + 4e-3}});
        const auto r = drift_report(s);
        CHECK(r.mass_drift == doctest::Approx(1e-7).epsilon(1e-6));
        CHECK(r.energy_drift == doctest::Approx(2e-3).epsilon(1e-6));
        CHECK(r.energy_relative);
        CHECK(r.mass_flagged);
        CHECK(r.energy_flagged);
    }
    SUBCASE("vanishing initial energy falls back to absolute drift") {
        const auto s = series({{63.78, -1.7e-11}, {63.78, 3.0e-11}});
        const auto r = drift_report(s);
        CHECK_FALSE(r.energy_relative);
        CHECK(r.energy_drift == doctest::Approx(4.7e-11).epsilon(1e-6));
        CHECK_FALSE(r.flagged());
    }
}

TEST_CASE("an under-resolved transverse grid shows up as drift") {
    auto run = [](int n_outer) {
        const auto disc = make_discretization(make_torus_grid(2.0, 64), build_layout(1, 20, 12, n_outer));
        const Field u0 = gaussian_data(disc, 3.0, 1.0);
        std::vector<DiagnosticsRecord> records{make_record(0.0, u0, Nonlinearity())};
        EvolveOptions o;
        o.on_step = [&](long, double t, const Field& u, int it) {
            records.push_back(make_record(t, u, Nonlinearity(), it));
        };
        evolve(u0, 0.2, 40, Nonlinearity(), o);
        return drift_report(records);
    };
    const auto fine = run(60);
    const auto coarse = run(20);
    MESSAGE("energy drift N_II=60: " << fine.energy_drift << ", N_II=20: " << coarse.energy_drift
                                     << "; mass drift " << fine.mass_drift << ", " << coarse.mass_drift);
    CHECK_FALSE(fine.energy_flagged);
    CHECK(coarse.energy_flagged);
    CHECK(coarse.energy_drift > 100.0 * fine.energy_drift);
}

TEST_CASE("cone angle of a constructed wake") {
    const auto disc = wide_disc(512);
    const double level = 0.1;
    const Field f = cone_fixture(disc, level, 0.5);
    const auto c = cone_half_angle(f, level);
    MESSAGE("angle " << c.degrees << " from " << c.points << " columns, core " << c.core_radius);
    CHECK(c.radiation);
    // the wake lifts the node just behind x = 0 slightly
    CHECK(std::abs(c.x_peak) <= disc->grid().spacing());
    CHECK(std::abs(c.degrees - std::atan(0.5) * 180.0 / pi) < 0.5);

    const Field g = cone_fixture(disc, level, std::tan(29.7 * pi / 180.0));
    CHECK(std::abs(cone_half_angle(g, level).degrees - 29.7) < 0.5);
}

TEST_CASE("cone angle is scale invariant") {
    const auto disc = wide_disc(512);
    const Field f = cone_fixture(disc, 0.1, 0.5);
    const double base = cone_half_angle(f, 0.1).degrees;
    for (double s : {0.25, 3.0, 100.0}) {
        CHECK(cone_half_angle(scale_data(f, s), 0.1 * s).degrees == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("a bare bump has no radiation") {
    const auto disc = wide_disc(512);
    const auto c = cone_half_angle(cone_fixture(disc, 0.1, 0.5, false), 0.1);
    CHECK_FALSE(c.radiation);
    CHECK(c.points == 0);
    CHECK(c.core_radius == doctest::Approx(std::sqrt(std::log(30.0))).epsilon(1e-2));
    CHECK_THROWS_AS(cone_half_angle(cone_fixture(disc, 0.1, 0.5, false), 5.0), ConfigError);
    CHECK_THROWS_AS(cone_half_angle(cone_fixture(disc, 0.1, 0.5, false), 0.0), ConfigError);
}
