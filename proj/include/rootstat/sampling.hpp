#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rootstat/fisher.hpp"
#include "rootstat/solve.hpp"
#include "rootstat/state.hpp"

namespace rootstat {

using Seed = std::uint64_t;

/// Derives the seed of trial `index` from a base seed; streams are
/// independent and order-insensitive.
Seed trial_seed(Seed base, std::size_t index);

/// i.i.d. draws from |psi(x)|^2 by rejection sampling under a Gaussian
/// envelope of variance j_max + 3/2 (covers the classically allowed region of
/// the highest occupied mode); the envelope constant comes from a grid scan
/// with a 1.2 safety margin. Deterministic per seed.
Vec sample_coordinate(const StateVector& state, const HermiteBasis& basis, int n, Seed seed);

/// Same for the momentum density |psitilde(p)|^2.
Vec sample_momentum(const StateVector& state, const HermiteBasis& basis, int m, Seed seed);

/// n multinomial draws from |c_i|^2 and m from |(Uc)_j|^2.
RegisterCounts sample_register(const StateVector& state, const CMat& U, int n, int m, Seed seed);

/// k_nu ~ Poisson(lambda_nu t_nu) with lambda = |X c_true|^2.
MeasurementProtocol simulate_poisson(const CMat& X, const CVec& c_true, const Vec& t, Seed seed);

struct TrialResult {
    std::size_t index = 0;
    Seed seed = 0;
    bool ok = true;
    std::string error;
    std::map<std::string, double> values;
};

/// Runs n_trials independent seeded trials and collects one row each. Rows
/// are merged in index order regardless of scheduling; a throwing trial
/// becomes a failed row rather than aborting the run. threads = 0 picks the
/// hardware concurrency.
std::vector<TrialResult> monte_carlo(std::size_t n_trials, Seed base_seed,
                                     const std::function<void(Seed, TrialResult&)>& trial,
                                     int threads = 0);

} // namespace rootstat
