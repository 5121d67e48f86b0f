#include "rootstat/sampling.hpp"

#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <thread>

#include "rootstat/errors.hpp"

namespace rootstat {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Rejection sampler in the dimensionless coordinate of a unit-scale basis.
Vec rejection_sample(const CVec& c, int n, std::mt19937_64& rng) {
    const int s = static_cast<int>(c.size());
    int jmax = 0;
    for (int j = 0; j < s; ++j) {
        if (std::abs(c(j)) > 0.0) jmax = j;
    }
    const double env_var = jmax + 1.5;
    const double env_sd = std::sqrt(env_var);
    const HermiteBasis basis(s);

    const auto dens = [&](double y) {
        const Vec phi = basis.eval_all(y);
        Complex amp(0, 0);
        for (int j = 0; j < s; ++j) amp += c(j) * phi(j);
        return std::norm(amp);
    };
    const auto envelope = [&](double y) {
        return std::exp(-0.5 * y * y / env_var) / (env_sd * std::sqrt(2.0 * std::numbers::pi));
    };

    // envelope constant by grid scan, 1.2 safety margin
    const double lim = std::sqrt(2.0 * jmax + 1.0) + 6.0;
    double ratio_max = 0.0;
    const int scan = 2001;
    for (int g = 0; g < scan; ++g) {
        const double y = -lim + 2.0 * lim * g / (scan - 1);
        ratio_max = std::max(ratio_max, dens(y) / envelope(y));
    }
    const double big_c = 1.2 * ratio_max;

    Vec out(n);
    std::normal_distribution<double> gauss(0.0, env_sd);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    long proposals = 0;
    int got = 0;
    while (got < n) {
        const double y = gauss(rng);
        const double u = unif(rng);
        ++proposals;
        if (u * big_c * envelope(y) <= dens(y)) {
            out(got++) = y;
        }
        if (proposals >= 1000 && double(got) / double(proposals) < 1e-3) {
            throw EnvelopeError("rejection sampling acceptance rate below 1e-3");
        }
    }
    return out;
}

} // namespace

Seed trial_seed(Seed base, std::size_t index) {
    return splitmix64(base ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

Vec sample_coordinate(const StateVector& state, const HermiteBasis& basis, int n, Seed seed) {
    if (!state.is_normalized()) throw std::domain_error("state must be normalized");
    if (n < 0) throw std::domain_error("sample count must be nonnegative");
    if (n == 0) return Vec(0);
    std::mt19937_64 rng(seed);
    Vec y = rejection_sample(state.coeffs(), n, rng);
    return y * basis.scale();
}

Vec sample_momentum(const StateVector& state, const HermiteBasis& basis, int m, Seed seed) {
    if (!state.is_normalized()) throw std::domain_error("state must be normalized");
    if (m < 0) throw std::domain_error("sample count must be nonnegative");
    if (m == 0) return Vec(0);
    // |psitilde|^2 at scale sigma is the unit-scale coordinate density of the
    // phase-rotated coefficients (-i)^j c_j, stretched by 1/sigma.
    CVec rotated = state.coeffs();
    for (int j = 0; j < rotated.size(); ++j) {
        switch (j & 3) {
            case 1: rotated(j) *= Complex(0, -1); break;
            case 2: rotated(j) *= -1.0; break;
            case 3: rotated(j) *= Complex(0, 1); break;
            default: break;
        }
    }
    std::mt19937_64 rng(seed);
    Vec y = rejection_sample(rotated, m, rng);
    return y / basis.scale();
}

RegisterCounts sample_register(const StateVector& state, const CMat& U, int n, int m, Seed seed) {
    if (!state.is_normalized()) throw std::domain_error("state must be normalized");
    if (U.rows() != state.size()) throw std::domain_error("transform does not match state");
    const int s = state.size();
    std::mt19937_64 rng(seed);

    const auto draw = [&](const Vec& probs, int count) {
        std::discrete_distribution<int> dist(probs.data(), probs.data() + probs.size());
        Eigen::VectorXi out = Eigen::VectorXi::Zero(s);
        for (int i = 0; i < count; ++i) ++out(dist(rng));
        return out;
    };
    RegisterCounts counts;
    counts.n_counts = draw(state.coeffs().cwiseAbs2(), n);
    counts.m_counts = draw((U * state.coeffs()).cwiseAbs2(), m);
    return counts;
}

MeasurementProtocol simulate_poisson(const CMat& X, const CVec& c_true, const Vec& t, Seed seed) {
    if (X.cols() != c_true.size() || X.rows() != t.size()) {
        throw std::domain_error("dimension mismatch in Poisson simulation");
    }
    MeasurementProtocol protocol;
    protocol.X = X;
    protocol.t = t;
    protocol.k.resize(X.rows());
    std::mt19937_64 rng(seed);
    const Vec lam = (X * c_true).cwiseAbs2();
    for (int nu = 0; nu < X.rows(); ++nu) {
        const double mean = lam(nu) * t(nu);
        if (!(t(nu) > 0.0)) throw std::domain_error("exposure times must be positive");
        if (mean == 0.0) {
            protocol.k(nu) = 0;
        } else {
            std::poisson_distribution<long> pois(mean);
            protocol.k(nu) = static_cast<int>(pois(rng));
        }
    }
    return protocol;
}

std::vector<TrialResult> monte_carlo(std::size_t n_trials, Seed base_seed,
                                     const std::function<void(Seed, TrialResult&)>& trial,
                                     int threads) {
    std::vector<TrialResult> results(n_trials);
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads < 1) threads = 1;
        threads = std::min(threads, 8);
    }
    const auto run_range = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < n_trials; i += stride) {
            TrialResult& row = results[i];
            row.index = i;
            row.seed = trial_seed(base_seed, i);
            try {
                trial(row.seed, row);
            } catch (const std::exception& e) {
                row.ok = false;
                row.error = e.what();
            }
        }
    };
    if (threads == 1 || n_trials < 2) {
        run_range(0, 1);
    } else {
        std::vector<std::future<void>> futures;
        futures.reserve(threads);
        for (int w = 0; w < threads; ++w) {
            futures.push_back(std::async(std::launch::async, run_range, std::size_t(w),
                                         std::size_t(threads)));
        }
        for (auto& f : futures) f.get();
    }
    return results;
}

} // namespace rootstat
