#pragma once

#include <vector>

#include "rootstat/state.hpp"

namespace rootstat {

/// Poisson measurement protocol: process amplitudes M = X c, intensities
/// lambda_nu = |M_nu|^2, counts k_nu observed over exposure t_nu.
struct MeasurementProtocol {
    CMat X;               ///< processes x state components
    Vec t;                ///< exposure time per process, > 0
    Eigen::VectorXi k;    ///< observed coincidence counts, >= 0

    int processes() const { return static_cast<int>(X.rows()); }
    int dim() const { return static_cast<int>(X.cols()); }
    void validate() const;
};

/// Fisher matrix of the real chart (c_1..c_{s-1}; c_0 eliminated by
/// normalization): I_ij = 4n (delta_ij + c_i c_j / c_0^2). Basis-independent.
Mat fisher_analytic(const Vec& c, double n);

/// Same matrix by Gauss-Hermite quadrature of
/// 4n int (phi_i - (c_i/c_0) phi_0)(phi_j - (c_j/c_0) phi_0) dx.
/// Serves as the independent oracle for fisher_analytic.
Mat fisher_quadrature(const Vec& c, const HermiteBasis& basis, double n);

/// Full s x s covariance of the normalized-state estimator:
/// Sigma = (E - c c^T) / (4n). Eigenvalues {0 along c, 1/(4n) elsewhere}.
Mat covariance_full(const Vec& c, double n);

/// lambda_nu = |(X c)_nu|^2, in Hz.
Vec intensity(const MeasurementProtocol& protocol, const CVec& c);

/// I = X^dagger diag(t) X. Protocol-only; no data dependence.
CMat hermitian_fisher(const MeasurementProtocol& protocol);

/// J = X^dagger diag(k/lambda) X. Processes with k_nu = 0 contribute nothing
/// (the Poisson term k ln lambda vanishes at k = 0); k_nu > 0 with
/// lambda_nu = 0 is a singular likelihood.
CMat empirical_fisher(const MeasurementProtocol& protocol, const Vec& lambda);

/// K_sj = sum_nu (k_nu / M_nu^2) X_nus X_nuj with the complex square M_nu^2,
/// not |M_nu|^2. Complex symmetric, generally non-hermitian.
CMat symmetric_fisher(const MeasurementProtocol& protocol, const CVec& M);

/// H = [[Re(I+K), -Im(I+K)], [Im(I-K), Re(I-K)]]; real symmetric 2s x 2s.
/// Asserts symmetry numerically to 1e-10 relative.
Mat complete_info(const CMat& I, const CMat& K);

struct CompletenessReport {
    bool complete = false;        ///< exactly one zero eigenvalue, rest positive
    bool maximum = true;          ///< no eigenvalue negative beyond tolerance
    int near_zero_count = 0;
    Vec eigenvalues;              ///< ascending
    Vec zero_mode;                ///< eigenvector of the smallest-|h| eigenvalue
    double gauge_angle = -1.0;    ///< rad between zero mode and doubled(i c); <0 if no state given
};

/// A protocol is statistically complete iff H has exactly one zero eigenvalue
/// (the gauge mode) and all others strictly positive. Negative eigenvalues
/// beyond tolerance flag a non-maximum. Tolerance is relative to max |h|.
CompletenessReport completeness_check(const Mat& H, double tolerance = 1e-8);

/// Same, additionally measuring the angle between the zero mode and the gauge
/// direction doubled(i c) of the supplied state.
CompletenessReport completeness_check(const Mat& H, const StateVector& c, double tolerance = 1e-8);

struct PrincipalFluctuation {
    double variance;   ///< sigma_j^2 = 1/(2 h_j)
    Vec direction;
};

/// The 2s-1 principal fluctuation modes, gauge mode excluded, sorted by
/// decreasing variance. Throws IncompleteProtocolError if H fails the
/// completeness check.
std::vector<PrincipalFluctuation> principal_fluctuations(const Mat& H, double tolerance = 1e-8);

/// All information matrices of a protocol evaluated at a state.
struct InfoMatrices {
    CMat I;   ///< hermitian Fisher
    CMat J;   ///< empirical Fisher
    CMat K;   ///< symmetric Fisher
    Mat H;    ///< complete information matrix
};

InfoMatrices info_matrices(const MeasurementProtocol& protocol, const CVec& c);

} // namespace rootstat
