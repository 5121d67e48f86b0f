#include <doctest.h>

#include <cmath>
#include <memory>
#include <numeric>
#include <random>

#include "rootstat/sampling.hpp"
#include "rootstat/stats.hpp"
#include "support.hpp"

using namespace rootstat;

namespace {

CVec cv(std::initializer_list<Complex> values) {
    CVec out(values.size());
    int i = 0;
    for (const Complex& v : values) out(i++) = v;
    return out;
}

/// CDF of the coordinate density by quadrature, tabulated then interpolated.
std::function<double(double)> density_cdf(const StateVector& state, const HermiteBasis& basis) {
    const int n = 4001;
    const double lim = 10.0 * basis.scale();
    auto xs = std::make_shared<std::vector<double>>(n);
    auto cdf = std::make_shared<std::vector<double>>(n);
    double acc = 0.0;
    const double h = 2.0 * lim / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double x = -lim + i * h;
        (*xs)[i] = x;
        const double d = density_at(state, basis, x);
        acc += (i == 0 ? 0.5 : 1.0) * d * h;
        (*cdf)[i] = acc;
    }
    const double total = cdf->back();
    return [xs, cdf, total](double x) {
        const auto& xv = *xs;
        if (x <= xv.front()) return 0.0;
        if (x >= xv.back()) return 1.0;
        const auto it = std::upper_bound(xv.begin(), xv.end(), x);
        const std::size_t hi = it - xv.begin();
        const double w = (x - xv[hi - 1]) / (xv[hi] - xv[hi - 1]);
        return ((1.0 - w) * (*cdf)[hi - 1] + w * (*cdf)[hi]) / total;
    };
}

} // namespace

TEST_CASE("ground-state coordinate moments") {
    const StateVector ground(cv({1, 0, 0}));
    HermiteBasis basis(3);
    const Vec xs = sample_coordinate(ground, basis, 100000, 71);
    const auto m = testsupport::moments(xs);
    CHECK(std::abs(m.mean) < 0.02);
    CHECK(std::abs(m.variance - 0.5) < 0.02);
}

TEST_CASE("empty draws") {
    const StateVector ground(cv({1, 0}));
    HermiteBasis basis(2);
    CHECK(sample_coordinate(ground, basis, 0, 1).size() == 0);
    CHECK(sample_momentum(ground, basis, 0, 1).size() == 0);
}

TEST_CASE("determinism per seed") {
    const StateVector state = StateVector::unit(cv({0.6, Complex(0.2, 0.5), -0.3}));
    HermiteBasis basis(3);
    const Vec a = sample_coordinate(state, basis, 500, 12345);
    const Vec b = sample_coordinate(state, basis, 500, 12345);
    CHECK((a - b).norm() == 0.0);
    const Vec c = sample_coordinate(state, basis, 500, 54321);
    CHECK((a - c).norm() > 0.0);
}

TEST_CASE("samples follow the quadrature CDF") {
    const StateVector state = StateVector::unit(cv({0.7, -0.4, Complex(0.2, 0.4)}));
    HermiteBasis basis(3);
    const Vec xs = sample_coordinate(state, basis, 10000, 99);
    std::vector<double> v(xs.data(), xs.data() + xs.size());
    const double d = testsupport::ks_distance(v, density_cdf(state, basis));
    CHECK(d < 0.02);
}

TEST_CASE("momentum samples follow the rotated-coefficient density") {
    const StateVector state = StateVector::unit(cv({0.7, Complex(0, 0.5), -0.3}));
    HermiteBasis basis(3, 1.6);
    const Vec ps = sample_momentum(state, basis, 10000, 17);
    std::vector<double> v(ps.data(), ps.data() + ps.size());
    // CDF oracle through the momentum density itself
    const int n = 4001;
    const double lim = 10.0 / basis.scale();
    std::vector<double> grid(n), cdf(n);
    double acc = 0.0;
    const double h = 2.0 * lim / (n - 1);
    for (int i = 0; i < n; ++i) {
        grid[i] = -lim + i * h;
        acc += momentum_density_at(state, basis, grid[i]) * h;
        cdf[i] = acc;
    }
    const double total = cdf.back();
    const double d = testsupport::ks_distance(v, [&](double p) {
        if (p <= grid.front()) return 0.0;
        if (p >= grid.back()) return 1.0;
        const auto it = std::upper_bound(grid.begin(), grid.end(), p);
        const std::size_t hi = it - grid.begin();
        const double w = (p - grid[hi - 1]) / (grid[hi] - grid[hi - 1]);
        return ((1.0 - w) * cdf[hi - 1] + w * cdf[hi]) / total;
    });
    CHECK(d < 0.02);
}

TEST_CASE("register counts") {
    const StateVector e0(cv({1, 0}));
    const CMat ident = CMat::Identity(2, 2);
    const RegisterCounts counts = sample_register(e0, ident, 250, 0, 5);
    CHECK(counts.n_counts(0) == 250);
    CHECK(counts.n_counts(1) == 0);

    // conjugate draws against DFT(2): binomial(m, 1/2)
    const RegisterCounts dft_counts = sample_register(e0, dft_unitary(2), 0, 10000, 6);
    CHECK(std::abs(dft_counts.m_counts(0) - 5000) < 250);

    // goodness of fit across seeds: p-values should not crowd small values
    const StateVector state = StateVector::unit(cv({0.8, Complex(0.36, 0.2), 0.4}));
    const CMat u = dft_unitary(3);
    Vec probs = state.coeffs().cwiseAbs2();
    int rejections = 0;
    for (Seed seed = 0; seed < 50; ++seed) {
        const RegisterCounts reg = sample_register(state, u, 600, 0, trial_seed(777, seed));
        Vec counts_d = reg.n_counts.cast<double>();
        const double stat = root_chi2(counts_d, probs);
        const double p_value = 1.0 - chi2_cdf(stat, 2);
        if (p_value < 0.01) ++rejections;
    }
    CHECK(rejections <= 2);
}

TEST_CASE("poisson process counts") {
    const CMat x = CMat::Identity(2, 2);
    CVec c(2);
    c << Complex(0, 0), Complex(10, 0);  // lambda = (0, 100)
    const Vec t = Vec::Ones(2);

    // zero intensity keeps k at zero
    for (Seed seed = 0; seed < 10; ++seed) {
        const MeasurementProtocol p = simulate_poisson(x, c, t, seed);
        CHECK(p.k(0) == 0);
    }

    // mean and variance of the k = 100 process over many seeds
    Vec draws(10000);
    for (int i = 0; i < draws.size(); ++i) {
        draws(i) = simulate_poisson(x, c, t, trial_seed(1234, i)).k(1);
    }
    const auto m = testsupport::moments(draws);
    CHECK(std::abs(m.mean - 100.0) < 2.0);
    CHECK(std::abs(m.variance - 100.0) < 10.0);
}

TEST_CASE("monte carlo harness") {
    const auto trial = [](Seed seed, TrialResult& row) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss;
        row.values["z"] = gauss(rng);
        if (row.index == 3) throw std::runtime_error("synthetic failure");
    };
    const auto rows = monte_carlo(8, 2024, trial, 4);
    CHECK(rows.size() == 8);
    CHECK_FALSE(rows[3].ok);
    CHECK(rows[3].error == "synthetic failure");

    // single-trial run reproduces the same row
    const auto single = monte_carlo(1, 2024, trial, 1);
    CHECK(single[0].values.at("z") == rows[0].values.at("z"));

    // threading does not change the result set
    const auto serial = monte_carlo(8, 2024, trial, 1);
    for (int i = 0; i < 8; ++i) {
        if (i == 3) continue;
        CHECK(serial[i].values.at("z") == rows[i].values.at("z"));
        CHECK(serial[i].seed == rows[i].seed);
    }
}
