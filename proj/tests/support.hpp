#pragma once

// Test-only oracles, independent of the library implementation paths they
// check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace testsupport {

using Complex = std::complex<double>;

/// Physicists' Hermite polynomial H_j by explicit coefficient recursion
/// (H_{n+1} = 2x H_n - 2n H_{n-1}); independent of the normalized-function
/// recurrence in the library.
inline double hermite_polynomial(int j, double x) {
    std::vector<double> hm;        // H_{deg-1} coefficients
    std::vector<double> h{1.0};    // H_deg coefficients, starting at deg 0
    for (int deg = 0; deg < j; ++deg) {
        std::vector<double> next(deg + 2, 0.0);
        for (std::size_t k = 0; k < h.size(); ++k) next[k + 1] += 2.0 * h[k];
        for (std::size_t k = 0; k < hm.size(); ++k) next[k] -= 2.0 * deg * hm[k];
        hm = std::move(h);
        h = std::move(next);
    }
    double acc = 0.0;
    for (int k = static_cast<int>(h.size()) - 1; k >= 0; --k) acc = acc * x + h[k];
    return acc;
}

/// Normalized Hermite function by the explicit polynomial and factorials;
/// usable up to j ~ 80 before the factorial overflows.
inline double hermite_function(int j, double x) {
    double log_norm = -0.5 * j * std::log(2.0);
    for (int k = 2; k <= j; ++k) log_norm -= 0.5 * std::log(double(k));
    log_norm -= 0.25 * std::log(std::numbers::pi);
    return hermite_polynomial(j, x) * std::exp(log_norm - 0.5 * x * x);
}

/// Composite Simpson rule on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
    if (intervals % 2 != 0) ++intervals;
    const double h = (b - a) / intervals;
    double acc = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

/// Numerical Fourier transform (1/sqrt(2pi)) int f(x) e^{-ipx} dx on a wide
/// trapezoid grid; the oracle for the conjugate-basis identity.
inline Complex fourier_transform(const std::function<double(double)>& f, double p,
                                 double lim = 15.0, int points = 6001) {
    const double h = 2.0 * lim / (points - 1);
    Complex acc(0, 0);
    for (int i = 0; i < points; ++i) {
        const double x = -lim + i * h;
        const double w = (i == 0 || i == points - 1) ? 0.5 : 1.0;
        acc += w * f(x) * Complex(std::cos(p * x), -std::sin(p * x));
    }
    return acc * h / std::sqrt(2.0 * std::numbers::pi);
}

/// Kolmogorov-Smirnov distance between samples and a reference CDF.
inline double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = double(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs((i + 1) / n - f));
        d = std::max(d, std::abs(f - i / n));
    }
    return d;
}

/// Mean and variance in one pass.
struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

inline Moments moments(const Eigen::VectorXd& values) {
    Moments m;
    m.mean = values.mean();
    m.variance = (values.array() - m.mean).square().sum() / (values.size() - 1);
    return m;
}

} // namespace testsupport
