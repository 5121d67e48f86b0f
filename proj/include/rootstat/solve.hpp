#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rootstat/fisher.hpp"
#include "rootstat/state.hpp"

namespace rootstat {

/// Coordinate and momentum samples from mutually complementing experiments.
struct SampleSet {
    Vec xs;
    Vec ps;
    int n() const { return static_cast<int>(xs.size()); }
    int m() const { return static_cast<int>(ps.size()); }
};

/// Outcome counts of register measurements in the computational basis
/// (n_counts) and in the conjugate basis after the unitary (m_counts).
struct RegisterCounts {
    Eigen::VectorXi n_counts;
    Eigen::VectorXi m_counts;
    long n() const { return n_counts.sum(); }
    long m() const { return m_counts.sum(); }
};

struct SolverOptions {
    int max_iter = 2000;
    double tol = 1e-10;        ///< fixed-point residual, relative
    double mixing = 0.5;       ///< under-relaxation weight in (0,1]
    std::optional<CVec> init;  ///< supplied start; default is solver-specific
    bool real_chart = false;   ///< continuous solver: restrict coefficients to reals

    /// Register solver global search (phase retrieval has many basins):
    /// alternating-projection starts ranked by likelihood, best few polished.
    int search_starts = 64;
    int search_iters = 150;
    int polish_candidates = 8;
    std::uint64_t search_seed = 0x5eed5eedULL;

    bool compute_info = true;  ///< attach completeness spectrum to diagnostics
};

struct SolveDiagnostics {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    double log_likelihood = 0.0;
    double lambda = 0.0;              ///< c^dagger R c at the solution (continuous/register)
    double normalization_residual = 0.0;  ///< |sum k - sum lambda t| / sum k (Poisson)
    int floored_densities = 0;
    bool completeness_warning = false;
    Vec h_eigenvalues;                ///< spectrum of the effective H at the solution
    std::vector<double> loglik_trace; ///< one entry per accepted step
};

/// ln L = sum_k ln P(x_k) + sum_l ln Ptilde(p_l); densities floored at 1e-300.
double log_likelihood_continuous(const SampleSet& samples, const HermiteBasis& basis,
                                 const StateVector& state);

/// R_ij = sum_k phi_i(x_k) phi_j(x_k) / P(x_k)
///      + sum_l phitilde_i^*(p_l) phitilde_j(p_l) / Ptilde(p_l); hermitian.
CMat r_matrix(const SampleSet& samples, const HermiteBasis& basis, const StateVector& state);

struct ContinuousSolution {
    StateVector state;        ///< gauge-fixed, normalized
    SolveDiagnostics diag;
};

/// Solves R c = (n+m) c by damped fixed-point iteration. Non-convergence
/// returns the best iterate with diag.converged = false.
ContinuousSolution solve_continuous(const SampleSet& samples, const HermiteBasis& basis,
                                    int s, const SolverOptions& opts = {});

/// Register likelihood equation
///   c_i = [n_i/c_i^* + sum_j m_j U_ji^*/ctilde_j^*] / (n+m),   ctilde = U c,
/// with zero-count terms dropped. Default initialization runs a seeded
/// alternating-projection multistart over the measured moduli.
ContinuousSolution solve_register(const RegisterCounts& counts, const CMat& U,
                                  const SolverOptions& opts = {});

struct PoissonSolution {
    CVec state;               ///< gauge-fixed, non-normalized; norm carries intensity
    InfoMatrices info;        ///< evaluated at the solution
    SolveDiagnostics diag;
};

/// Poisson likelihood equation c = I^{-1} J(c) c. Singular I is a protocol
/// error. The normalization identity sum k = sum lambda t holds at any fixed
/// point and is reported as a residual.
PoissonSolution solve_poisson(const MeasurementProtocol& protocol, const SolverOptions& opts = {});

} // namespace rootstat
