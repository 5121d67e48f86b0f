#pragma once

#include <array>
#include <vector>

#include "rootstat/state.hpp"

namespace rootstat {

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Chi-square CDF with dof degrees of freedom.
double chi2_cdf(double x, int dof);

/// Upper-tail quantile: returns x with P(chi2 > x) = alpha.
double chi2_quantile(double alpha, int dof);

/// Root form of the chi-square criterion:
/// 4 [ n - (sum_i sqrt(n_i p_i))^2 ]; chi-square with s-1 dof under the null.
double root_chi2(const Vec& counts, const Vec& probs);

/// 2 (sqrt(n1 p2) - sqrt(n2 p1)) ~ N(0,1) under the null (p2 = 1 - p1).
double root_normal_stat(double n1, double n2, double p1);

/// Moivre-Laplace statistic (n1 - n p1) / sqrt(n p1 p2).
double ml_stat(double n1, double n, double p1);

struct BinomialApproxReport {
    double mae_root = 0, mae_ml = 0, ratio = 0;
    // Alternate error metrics, reported for comparison: continuity-corrected
    // cell probabilities and CDF error.
    double cell_mae_root = 0, cell_mae_ml = 0, cell_ratio = 0;
    double cdf_mae_root = 0, cdf_mae_ml = 0, cdf_ratio = 0;
    // k, exact pmf, root approximation, normal (Moivre-Laplace) approximation
    std::vector<std::array<double, 4>> table;
};

/// Deterministic accuracy comparison of the two normal approximations of the
/// binomial pmf. Primary metric: standard-normal density at the statistic
/// times the Jacobian |d stat/dk|, averaged over k with exact pmf > 1e-12 and
/// finite Jacobian (interior k); ratio = mae_ml / mae_root.
BinomialApproxReport binomial_approx_report(int n, double p1);

struct ConfidenceCone {
    StateVector axis;
    double half_angle;   ///< rad
    double level;        ///< 1 - alpha
    bool capped;         ///< true when 4n < quantile forced half_angle = pi/2
};

/// sin^2 theta <= chi2_{s-1,alpha} / (4 n_total).
ConfidenceCone confidence_cone(const StateVector& estimate, double n_total, double alpha);

struct FidelityReport {
    double f_h;           ///< informational fidelity
    double loss;          ///< 1 - f_h
    double n_total;       ///< <xi|H|xi> / 2 (equals sum k at an ML point)
    int dof;              ///< 2s - 1
    double qform_state;   ///< <xi_hat|H|xi_hat>
    double qform_delta;   ///< <dxi|H|dxi> after gauge projection
};

/// F_H = 1 - <dxi|H|dxi> / <xi_hat|H|xi_hat>, dxi = xi_true - xi_hat with the
/// gauge component (H zero mode) projected out. Callers should phase-align
/// the two states first (align_phase); projection only removes the
/// first-order remainder.
FidelityReport informational_fidelity(const Mat& H, const Vec& xi_true, const Vec& xi_hat);

/// Mean relative information loss (2s - 1) / (4n).
double mean_information_loss(int s, double n);

} // namespace rootstat
