#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "zkcyl/diagnostics.hpp"
#include "zkcyl/dynamics.hpp"
#include "zkcyl/error.hpp"

using namespace zkcyl;
using zkcyl::testing::random_field;
using zkcyl::testing::small_disc;

namespace {

DiscretizationPtr paper_disc(int n = 512) {
    return make_discretization(make_torus_grid(5.0, n), build_layout(1, 20, 20, 100));
}

}  // namespace

TEST_CASE("signed power examples") {
    const Rational p(7, 3);
    CHECK(signed_power(8.0, p) == doctest::Approx(128.0).epsilon(1e-15));
    CHECK(signed_power(-8.0, p) == doctest::Approx(-128.0).epsilon(1e-15));
    CHECK(signed_power(0.0, p) == 0.0);
    CHECK(signed_power(-0.0, p) == 0.0);
}

TEST_CASE("signed power is exactly odd") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-50, 50);
    for (const Rational p : {Rational(7, 3), Rational(2), Rational(3), Rational(9, 5), Rational(11, 7)}) {
        for (int i = 0; i < 2000; ++i) {
            const double u = dist(rng);
            CHECK(signed_power(-u, p) == -signed_power(u, p));
        }
    }
}

TEST_CASE("signed power agrees with exp-log evaluation") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dist(1e-6, 20);
    for (const Rational p : {Rational(7, 3), Rational(2), Rational(9, 5)}) {
        for (int i = 0; i < 500; ++i) {
            const double u = dist(rng);
            const double ref = std::exp(p.value() * std::log(u));
            CHECK(std::abs(signed_power(u, p) - ref) <= 1e-14 * ref);
        }
    }
}

TEST_CASE("absolute power examples") {
    const Rational q(10, 3);
    CHECK(abs_power(-8.0, q) == doctest::Approx(1024.0).epsilon(1e-15));
    CHECK(abs_power(1.0, q) == 1.0);
    CHECK(abs_power(0.5, q) == doctest::Approx(std::pow(2.0, -10.0 / 3.0)).epsilon(1e-15));
    CHECK(abs_power(0.5, q) == doctest::Approx(0.0992).epsilon(1e-3));
    CHECK(abs_power(0.0, q) == 0.0);
}

TEST_CASE("nonlinearity validation") {
    CHECK_THROWS_AS(Nonlinearity(Rational(3, 2)), ConfigError);
    CHECK_THROWS_AS(Nonlinearity(Rational(1)), ConfigError);
    CHECK_THROWS_AS(Nonlinearity(Rational(1, 3)), ConfigError);
    CHECK_NOTHROW(Nonlinearity(Rational(7, 3)));
}

TEST_CASE("right-hand side of zero is zero") {
    const auto disc = small_disc();
    const ModalField zero(disc);
    CHECK(modal_rhs(zero, Nonlinearity()).values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mean mode and tau columns of the right-hand side vanish") {
    const auto disc = small_disc(32);
    const Field u = random_field(disc, 9);
    const ModalField rhs = modal_rhs(forward_x(u), Nonlinearity());
    CHECK(rhs.values.row(0).cwiseAbs().maxCoeff() == 0.0);
    for (int r : disc->transverse().tau_rows) CHECK(rhs.values.col(r).cwiseAbs().maxCoeff() == 0.0);
    // a profile constant in x only excites k = 0
    Field flat(disc);
    for (int n = 0; n < disc->nx(); ++n) flat.values.row(n) = u.values.row(0);
    CHECK(modal_rhs(forward_x(flat), Nonlinearity()).values.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("right-hand side is the transform of a real field") {
    const auto disc = small_disc(32);
    const Field u = random_field(disc, 10);
    const ModalField rhs = modal_rhs(forward_x(u), Nonlinearity());
    const ModalField again = forward_x(inverse_x(rhs));
    CHECK((rhs.values - again.values).cwiseAbs().maxCoeff() < 1e-12 * rhs.values.cwiseAbs().maxCoeff());
    CHECK(rhs.values.row(disc->grid().nyquist()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("linear right-hand side rotates a transverse eigenmode") {
    const auto disc = small_disc(16, 1.0, 10, 24);
    const auto& op = disc->transverse();
    const auto basis = transverse_eigenbasis(op);
    // the eigenvalue closest to zero and its eigenvector in nodal form
    Eigen::Index i0 = 0;
    basis.eigenvalues.cwiseAbs().minCoeff(&i0);
    const ComplexVector v = basis.from_basis.col(i0);
    const Complex lambda = basis.eigenvalues(i0);
    const int j = 3;
    const double k = disc->grid().k(j);

    ModalField m(disc);
    m.values.row(j) = v.transpose();
    const ModalField rhs = modal_rhs_linear(m);

    // dense matrix-vector oracle
    const int n = disc->nr();
    const DenseComplexMatrix dense =
        Complex(0, -k) * (op.laplacian - k * k * DenseMatrix::Identity(n, n)).cast<Complex>();
    const ComplexVector oracle = dense * v;
    for (int c = 0; c < n; ++c) {
        if (op.is_tau_row(c)) {
            CHECK(std::abs(rhs.values(j, c)) == 0.0);
            continue;
        }
        CHECK(std::abs(rhs.values(j, c) - oracle(c)) < 1e-10 * oracle.cwiseAbs().maxCoeff());
        // pure rotation: -i k (lambda - k^2) v
        CHECK(std::abs(rhs.values(j, c) - Complex(0, -k) * (lambda - k * k) * v(c)) <
              1e-9 * oracle.cwiseAbs().maxCoeff());
    }
    for (int r = 0; r < disc->modes(); ++r) {
        if (r != j) CHECK(rhs.values.row(r).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("Gaussian data masses") {
    const auto disc = paper_disc();
    auto analytic = [](double lambda, double alpha) { return lambda * lambda * std::pow(pi / (2 * alpha), 1.5); };
    const double m5 = mass(gaussian_data(disc, 5.0, 1.0));
    const double m65 = mass(gaussian_data(disc, 6.5, 1.0));
    CHECK(std::abs(m5 - 49.2175) < 1e-4);
    CHECK(std::abs(m65 - 83.1776) < 1e-4);
    CHECK(std::abs(m5 - analytic(5.0, 1.0)) < 1e-10 * m5);
    CHECK(std::abs(mass(gaussian_data(disc, 1.0, 2.5)) - analytic(1.0, 2.5)) < 1e-10);
    const Field zero = gaussian_data(disc, 0.0, 3.0);
    CHECK(zero.values.cwiseAbs().maxCoeff() == 0.0);
    CHECK(mass(zero) == 0.0);
    CHECK_THROWS_AS(gaussian_data(disc, 1.0, 0.0), ConfigError);
}

TEST_CASE("Gaussian peak sits on the origin node") {
    const auto disc = paper_disc();
    const Field g = gaussian_data(disc, 5.0, 1.0);
    CHECK(linf(g) == 5.0);
    CHECK(g.values(disc->grid().origin(), 0) == 5.0);
}

TEST_CASE("scaling data scales mass quadratically") {
    const auto disc = paper_disc();
    const Field g = gaussian_data(disc, 2.0, 1.0);
    CHECK((scale_data(g, 1.0).values - g.values).cwiseAbs().maxCoeff() == 0.0);
    for (double lambda : {0.99, 1.1, -0.5}) {
        CHECK(std::abs(mass(scale_data(g, lambda)) - lambda * lambda * mass(g)) < 1e-12 * mass(g));
    }
}
