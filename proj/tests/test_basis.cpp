#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rootstat/basis.hpp"
#include "support.hpp"

using namespace rootstat;

TEST_CASE("ground state value at the origin") {
    HermiteBasis basis(4);
    // quadrature-normalized Gaussian: phi_0(0) = pi^(-1/4)
    const double expected = std::pow(std::numbers::pi, -0.25);
    CHECK(basis.eval(0, 0.0) == doctest::Approx(expected).epsilon(1e-14));
    // normalization of phi_0^2 by Gauss-Hermite quadrature
    const GaussHermiteRule rule = gauss_hermite(24);
    double norm = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i) {
        const double h0 = basis.eval_poly(0, rule.nodes(i));
        norm += rule.weights(i) * h0 * h0;
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("odd functions vanish at the origin") {
    HermiteBasis basis(8);
    CHECK(basis.eval(1, 0.0) == 0.0);
    CHECK(basis.eval(3, 0.0) == 0.0);
}

TEST_CASE("recurrence matches the explicit polynomial form") {
    HermiteBasis basis(8);
    for (const double x : {2.3, -1.1, 0.4, 5.0}) {
        CHECK(basis.eval(5, x) ==
              doctest::Approx(testsupport::hermite_function(5, x)).epsilon(1e-12));
        CHECK(basis.eval(7, x) ==
              doctest::Approx(testsupport::hermite_function(7, x)).epsilon(1e-12));
    }
}

TEST_CASE("index out of range") {
    HermiteBasis basis(4);
    CHECK_THROWS_AS(basis.eval(4, 0.0), std::domain_error);
    CHECK_THROWS_AS(basis.eval(-1, 0.0), std::domain_error);
}

TEST_CASE("orthonormality: Gram matrix is the identity for s = 32") {
    const int s = 32;
    HermiteBasis basis(s);
    const GaussHermiteRule rule = gauss_hermite(2 * s + 4);
    Mat gram = Mat::Zero(s, s);
    for (int a = 0; a < rule.nodes.size(); ++a) {
        Vec h(s);
        for (int j = 0; j < s; ++j) h(j) = basis.eval_poly(j, rule.nodes(a));
        gram += rule.weights(a) * h * h.transpose();
    }
    CHECK((gram - Mat::Identity(s, s)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("scaled basis stays orthonormal in physical units") {
    const int s = 6;
    HermiteBasis basis(s, 2.5);
    for (int i = 0; i < s; ++i) {
        for (int j = i; j < s; ++j) {
            const double overlap = testsupport::simpson(
                [&](double x) { return basis.eval(i, x) * basis.eval(j, x); }, -30.0, 30.0, 4000);
            CHECK(overlap == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("Fourier conjugates carry the (-i)^j eigenvalue") {
    HermiteBasis basis(17);
    CHECK(basis.eval_conjugate(0, 0.7) == Complex(basis.eval(0, 0.7), 0.0));
    CHECK(basis.eval_conjugate(2, 1.0).real() == doctest::Approx(-basis.eval(2, 1.0)));
    CHECK(basis.eval_conjugate(2, 1.0).imag() == 0.0);

    // against the numerical Fourier integral, j <= 16, |p| <= 6
    for (const int j : {1, 3, 8, 16}) {
        for (const double p : {-6.0, -2.4, 0.9, 6.0}) {
            const Complex oracle = testsupport::fourier_transform(
                [&](double x) { return basis.eval(j, x); }, p);
            const Complex got = basis.eval_conjugate(j, p);
            CHECK(std::abs(got - oracle) < 1e-8);
        }
    }
}

TEST_CASE("recurrence is finite far into the tail") {
    HermiteBasis basis(65);
    for (int j = 0; j <= 64; j += 8) {
        for (double x = -12.0; x <= 12.0; x += 1.5) {
            CHECK(std::isfinite(basis.eval(j, x)));
        }
    }
}

TEST_CASE("eval_all agrees with single evaluations") {
    HermiteBasis basis(10);
    const Vec all = basis.eval_all(1.7);
    for (int j = 0; j < 10; ++j) CHECK(all(j) == doctest::Approx(basis.eval(j, 1.7)));
    const CVec allc = basis.eval_conjugate_all(-0.9);
    for (int j = 0; j < 10; ++j) {
        CHECK(std::abs(allc(j) - basis.eval_conjugate(j, -0.9)) < 1e-14);
    }
}

TEST_CASE("DFT unitary") {
    CHECK(dft_unitary(1)(0, 0) == Complex(1.0, 0.0));

    const CMat u2 = dft_unitary(2);
    const double r = 1.0 / std::numbers::sqrt2;
    CHECK(std::abs(u2(0, 0) - Complex(r, 0)) < 1e-15);
    CHECK(std::abs(u2(0, 1) - Complex(r, 0)) < 1e-15);
    CHECK(std::abs(u2(1, 0) - Complex(r, 0)) < 1e-15);
    CHECK(std::abs(u2(1, 1) - Complex(-r, 0)) < 1e-15);

    const CMat u4 = dft_unitary(4);
    const CMat gram = u4.adjoint() * u4;
    CHECK((gram - CMat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);

    CHECK_THROWS_AS(dft_unitary(0), std::domain_error);
}

TEST_CASE("register basis validates unitarity") {
    CHECK_NOTHROW(RegisterBasis(4));
    CHECK_NOTHROW(RegisterBasis(dft_unitary(3)));
    CMat bad = CMat::Identity(3, 3);
    bad(0, 0) = 1.5;
    CHECK_THROWS_AS(RegisterBasis{bad}, std::domain_error);
}
