#include <doctest.h>

#include <cmath>
#include <random>

#include "rootstat/errors.hpp"
#include "rootstat/fisher.hpp"
#include "support.hpp"

using namespace rootstat;

namespace {

Vec normalized_real_state(int s, std::mt19937_64& rng, bool positive_c0 = true) {
    std::normal_distribution<double> gauss;
    Vec c(s);
    for (int j = 0; j < s; ++j) c(j) = gauss(rng);
    c.normalize();
    if (positive_c0 && c(0) < 0) c = -c;
    if (positive_c0 && c(0) < 0.05) {
        c(0) = 0.3;
        c.normalize();
    }
    return c;
}

MeasurementProtocol qubit_identity_dft_protocol() {
    MeasurementProtocol p;
    p.X.resize(4, 2);
    p.X.topRows(2) = CMat::Identity(2, 2);
    p.X.bottomRows(2) = dft_unitary(2);
    p.t = Vec::Ones(4);
    p.k = Eigen::VectorXi::Zero(4);
    return p;
}

} // namespace

TEST_CASE("analytic Fisher matrix examples") {
    Vec c2(2);
    c2 << 1, 0;
    const Mat f1 = fisher_analytic(c2, 10);
    CHECK(f1.rows() == 1);
    CHECK(f1(0, 0) == doctest::Approx(40.0));

    c2 << 0.8, 0.6;
    const Mat f2 = fisher_analytic(c2, 1);
    CHECK(f2(0, 0) == doctest::Approx(6.25));

    Vec c3(3);
    c3 << 0.8, 0.6, 0.0;
    const Mat f3 = fisher_analytic(c3, 1);
    CHECK(f3(0, 0) == doctest::Approx(6.25));
    CHECK(f3(0, 1) == doctest::Approx(0.0));
    CHECK(f3(1, 1) == doctest::Approx(4.0));

    Vec bad(2);
    bad << 0.0, 1.0;
    CHECK_THROWS_AS(fisher_analytic(bad, 1), std::domain_error);
}

TEST_CASE("quadrature oracle matches the analytic form and is basis independent") {
    std::mt19937_64 rng(12);
    for (const int s : {2, 3, 5}) {
        for (int rep = 0; rep < 20; ++rep) {
            const Vec c = normalized_real_state(s, rng);
            const double n = 1.0 + rep;
            const Mat analytic = fisher_analytic(c, n);
            const Mat quad_a = fisher_quadrature(c, HermiteBasis(s), n);
            const Mat quad_b = fisher_quadrature(c, HermiteBasis(s + 8, 1.7), n);
            const double scale = analytic.cwiseAbs().maxCoeff();
            CHECK((quad_a - analytic).cwiseAbs().maxCoeff() / scale < 1e-6);
            CHECK((quad_b - analytic).cwiseAbs().maxCoeff() / scale < 1e-6);
        }
    }
}

TEST_CASE("covariance matrix and its eigenstructure") {
    Vec c(2);
    c << 0.8, 0.6;
    const Mat cov = covariance_full(c, 100);
    CHECK(cov(0, 0) == doctest::Approx(0.0009));
    CHECK(cov(0, 1) == doctest::Approx(-0.0012));
    CHECK(cov(1, 0) == doctest::Approx(-0.0012));
    CHECK(cov(1, 1) == doctest::Approx(0.0016));

    Eigen::SelfAdjointEigenSolver<Mat> es(cov);
    CHECK(std::abs(es.eigenvalues()(0)) < 1e-15);
    CHECK(es.eigenvalues()(1) == doctest::Approx(0.0025).epsilon(1e-12));

    CHECK((cov * c).norm() < 1e-15);
}

TEST_CASE("covariance against the tangent-space inverse Fisher matrix") {
    // on the tangent space at c, covariance_full restricted there must invert
    // fisher_analytic mapped through the chart c_1..c_{s-1}
    std::mt19937_64 rng(77);
    const int s = 3;
    const Vec c = normalized_real_state(s, rng);
    const double n = 50.0;
    const Mat fisher = fisher_analytic(c, n);
    const Mat cov = covariance_full(c, n);
    // chart tangent vectors: dc = e_i - (c_i/c_0) e_0 for i = 1..s-1
    Mat chart(s, s - 1);
    for (int i = 1; i < s; ++i) {
        Vec v = Vec::Zero(s);
        v(i) = 1.0;
        v(0) = -c(i) / c(0);
        chart.col(i - 1) = v;
    }
    // pushforward of the chart-inverse Fisher equals the full covariance
    const Mat pushforward = chart * fisher.inverse() * chart.transpose();
    CHECK((pushforward - cov).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("intensity examples") {
    MeasurementProtocol p;
    p.X = CMat::Identity(2, 2);
    p.t = Vec::Ones(2);
    p.k = Eigen::VectorXi::Zero(2);
    CVec c(2);
    c << Complex(3, 0), Complex(0, 4);
    const Vec lam = intensity(p, c);
    CHECK(lam(0) == doctest::Approx(9.0));
    CHECK(lam(1) == doctest::Approx(16.0));

    CHECK(intensity(p, CVec::Zero(2)).norm() == 0.0);

    MeasurementProtocol q = qubit_identity_dft_protocol();
    CVec e0(2);
    e0 << 1, 0;
    const Vec lam2 = intensity(q, e0);
    CHECK(lam2(0) == doctest::Approx(1.0));
    CHECK(lam2(1) == doctest::Approx(0.0));
    CHECK(lam2(2) == doctest::Approx(0.5));
    CHECK(lam2(3) == doctest::Approx(0.5));
}

TEST_CASE("hermitian Fisher matrix") {
    MeasurementProtocol p;
    p.X = CMat::Ones(1, 1);
    p.t = Vec::Constant(1, 2.0);
    p.k = Eigen::VectorXi::Zero(1);
    CHECK(hermitian_fisher(p)(0, 0).real() == doctest::Approx(2.0));

    MeasurementProtocol ident;
    ident.X = CMat::Identity(2, 2);
    ident.t = Vec::Ones(2);
    ident.k = Eigen::VectorXi::Zero(2);
    CHECK((hermitian_fisher(ident) - CMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);

    const CMat I = hermitian_fisher(qubit_identity_dft_protocol());
    CHECK((I - 2.0 * CMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("empirical Fisher matrix") {
    MeasurementProtocol p;
    p.X = CMat::Ones(1, 1);
    p.t = Vec::Ones(1);
    p.k = Eigen::VectorXi::Constant(1, 100);
    Vec lam = Vec::Constant(1, 50.0);
    CHECK(empirical_fisher(p, lam)(0, 0).real() == doctest::Approx(2.0));

    // k = lambda * t exactly gives J = I
    MeasurementProtocol q = qubit_identity_dft_protocol();
    CVec c(2);
    c << Complex(6, 0), Complex(0, 8);
    const Vec lam_q = intensity(q, c);
    for (int nu = 0; nu < 4; ++nu) q.k(nu) = static_cast<int>(std::lround(lam_q(nu) * q.t(nu)));
    const CMat J = empirical_fisher(q, lam_q);
    const CMat I = hermitian_fisher(q);
    CHECK((J - I).cwiseAbs().maxCoeff() < 1e-12);

    // zero counts contribute nothing even at zero intensity
    MeasurementProtocol z;
    z.X = CMat::Ones(1, 1);
    z.t = Vec::Ones(1);
    z.k = Eigen::VectorXi::Zero(1);
    CHECK(empirical_fisher(z, Vec::Zero(1))(0, 0) == Complex(0, 0));

    z.k(0) = 3;
    CHECK_THROWS_AS(empirical_fisher(z, Vec::Zero(1)), SingularLikelihoodError);
}

TEST_CASE("symmetric Fisher matrix") {
    MeasurementProtocol p;
    p.X = CMat::Ones(1, 1);
    p.t = Vec::Ones(1);
    p.k = Eigen::VectorXi::Constant(1, 100);
    CVec m = CVec::Constant(1, Complex(10, 0));
    CHECK(symmetric_fisher(p, m)(0, 0).real() == doctest::Approx(1.0));

    // real X, real M: K is real symmetric
    MeasurementProtocol r;
    r.X = CMat::Random(3, 2).real().cast<Complex>();
    r.t = Vec::Ones(3);
    r.k = Eigen::VectorXi::Constant(3, 5);
    CVec mr = CVec::Constant(3, Complex(2, 0));
    const CMat kr = symmetric_fisher(r, mr);
    CHECK(kr.imag().cwiseAbs().maxCoeff() < 1e-14);
    CHECK((kr - kr.transpose()).cwiseAbs().maxCoeff() < 1e-14);

    // complex case: symmetric, generally non-hermitian
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    MeasurementProtocol cx;
    cx.X.resize(9, 3);
    for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 3; ++j) cx.X(i, j) = Complex(gauss(rng), gauss(rng));
    }
    cx.t = Vec::Ones(9);
    cx.k = Eigen::VectorXi::Constant(9, 7);
    CVec mc(9);
    for (int i = 0; i < 9; ++i) mc(i) = Complex(gauss(rng), gauss(rng));
    const CMat kc = symmetric_fisher(cx, mc);
    CHECK((kc - kc.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((kc - kc.adjoint()).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("complete information matrix") {
    // single process at the ML point: I = K = t
    const CMat i1 = CMat::Constant(1, 1, Complex(2.0, 0));
    const CMat k1 = CMat::Constant(1, 1, Complex(2.0, 0));
    const Mat h1 = complete_info(i1, k1);
    CHECK(h1(0, 0) == doctest::Approx(4.0));
    CHECK(std::abs(h1(0, 1)) < 1e-15);
    CHECK(std::abs(h1(1, 0)) < 1e-15);
    CHECK(std::abs(h1(1, 1)) < 1e-15);

    // K = 0, I = identity: H = identity
    const CMat i2 = CMat::Identity(3, 3);
    const CMat k2 = CMat::Zero(3, 3);
    CHECK((complete_info(i2, k2) - Mat::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("completeness verdicts") {
    // single-process closed form: complete, zero mode along doubled(i c)
    Mat h(2, 2);
    h << 4.0, 0.0, 0.0, 0.0;
    CVec c_real = CVec::Constant(1, Complex(10, 0));
    const CompletenessReport rep = completeness_check(h, StateVector(c_real, false));
    CHECK(rep.complete);
    CHECK(rep.maximum);
    CHECK(rep.near_zero_count == 1);
    CHECK(std::abs(rep.zero_mode(1)) == doctest::Approx(1.0));
    CHECK(rep.gauge_angle < 1e-6);

    // identity-rows-only protocol leaves phase directions unconstrained
    MeasurementProtocol ident;
    ident.X = CMat::Identity(2, 2);
    ident.t = Vec::Ones(2);
    ident.k = Eigen::VectorXi::Constant(2, 50);
    CVec c(2);
    c << Complex(std::sqrt(50.0), 0), Complex(std::sqrt(50.0), 0);
    const InfoMatrices mats = info_matrices(ident, c);
    const CompletenessReport rep2 = completeness_check(mats.H);
    CHECK_FALSE(rep2.complete);
    CHECK(rep2.near_zero_count >= 2);

    // H = identity: no zero mode, also incomplete
    const CompletenessReport rep3 = completeness_check(Mat::Identity(4, 4));
    CHECK_FALSE(rep3.complete);
    CHECK(rep3.near_zero_count == 0);
}

TEST_CASE("principal fluctuations") {
    Mat h(2, 2);
    h << 4.0, 0.0, 0.0, 0.0;  // 2t with t = 2
    const auto flucts = principal_fluctuations(h);
    REQUIRE(flucts.size() == 1);
    CHECK(flucts[0].variance == doctest::Approx(1.0 / 8.0));

    const auto doubled = principal_fluctuations(2.0 * h);
    CHECK(doubled[0].variance == doctest::Approx(flucts[0].variance / 2.0));

    CHECK_THROWS_AS(principal_fluctuations(Mat::Identity(4, 4)), IncompleteProtocolError);
}

TEST_CASE("principal fluctuations sorted by decreasing variance") {
    Mat h = Mat::Zero(4, 4);
    h(0, 0) = 8.0;
    h(1, 1) = 2.0;
    h(2, 2) = 4.0;
    const auto flucts = principal_fluctuations(h);
    REQUIRE(flucts.size() == 3);
    CHECK(flucts[0].variance == doctest::Approx(0.25));
    CHECK(flucts[1].variance == doctest::Approx(0.125));
    CHECK(flucts[2].variance == doctest::Approx(0.0625));
}
