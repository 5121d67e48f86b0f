#include "rootstat/stats.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rootstat {

namespace {

constexpr int kItMax = 300;
const double kEps = std::numeric_limits<double>::epsilon();
const double kFpMin = std::numeric_limits<double>::min() / kEps;

/// Series representation of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < kItMax; ++i) {
        ++ap;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

/// Continued fraction for Q(a,x) = 1 - P(a,x), valid for x >= a+1; modified
/// Lentz iteration.
double gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kItMax; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double norm_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

} // namespace

double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::domain_error("gamma_p requires x >= 0, a > 0");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double chi2_cdf(double x, int dof) {
    if (dof < 1) throw std::domain_error("chi2 dof must be >= 1");
    if (x < 0.0) throw std::domain_error("chi2 statistic must be >= 0");
    return gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_quantile(double alpha, int dof) {
    if (dof < 1) throw std::domain_error("chi2 dof must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0,1)");
    const double target = 1.0 - alpha;
    double lo = 0.0;
    double hi = dof + 10.0;
    while (chi2_cdf(hi, dof) < target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e9) break;
    }
    // bisection to a tight bracket, then Newton with the density
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (chi2_cdf(mid, dof) < target) lo = mid;
        else hi = mid;
        if (hi - lo < 1e-12 * (1.0 + hi)) break;
    }
    double x = 0.5 * (lo + hi);
    const double half = 0.5 * dof;
    for (int i = 0; i < 8; ++i) {
        const double f = chi2_cdf(x, dof) - target;
        const double pdf = std::exp((half - 1.0) * std::log(0.5 * x) - 0.5 * x -
                                    std::lgamma(half)) * 0.5;
        if (pdf <= 0.0) break;
        const double step = f / pdf;
        double next = x - step;
        if (next <= lo || next >= hi) break;
        x = next;
        if (std::abs(step) < 1e-14 * (1.0 + x)) break;
    }
    return x;
}

double root_chi2(const Vec& counts, const Vec& probs) {
    if (counts.size() != probs.size() || counts.size() < 1) {
        throw std::domain_error("counts and probs must have equal positive length");
    }
    double n = 0.0;
    double psum = 0.0;
    for (int i = 0; i < counts.size(); ++i) {
        if (counts(i) < 0.0) throw std::domain_error("counts must be nonnegative");
        if (probs(i) < 0.0) throw std::domain_error("probabilities must be nonnegative");
        n += counts(i);
        psum += probs(i);
    }
    if (std::abs(psum - 1.0) > 1e-12) throw std::domain_error("probabilities must sum to 1");
    if (n < 1.0) throw std::domain_error("need at least one observation");
    double root_sum = 0.0;
    for (int i = 0; i < counts.size(); ++i) root_sum += std::sqrt(counts(i) * probs(i));
    return std::max(0.0, 4.0 * (n - root_sum * root_sum));
}

double root_normal_stat(double n1, double n2, double p1) {
    const double p2 = 1.0 - p1;
    return 2.0 * (std::sqrt(n1 * p2) - std::sqrt(n2 * p1));
}

double ml_stat(double n1, double n, double p1) {
    const double p2 = 1.0 - p1;
    return (n1 - n * p1) / std::sqrt(n * p1 * p2);
}

BinomialApproxReport binomial_approx_report(int n, double p1) {
    if (n < 1) throw std::domain_error("n must be >= 1");
    if (!(p1 > 0.0 && p1 < 1.0)) throw std::domain_error("p1 must lie in (0,1)");
    const double p2 = 1.0 - p1;
    const double lp1 = std::log(p1);
    const double lp2 = std::log(p2);

    const auto z_root = [&](double k) {
        return 2.0 * (std::sqrt(k * p2) - std::sqrt((n - k) * p1));
    };
    const auto z_ml = [&](double k) { return (k - n * p1) / std::sqrt(n * p1 * p2); };
    const double jac_ml = 1.0 / std::sqrt(n * p1 * p2);

    BinomialApproxReport rep;
    rep.table.reserve(n + 1);
    double sum_root = 0, sum_ml = 0, sum_cell_root = 0, sum_cell_ml = 0;
    double sum_cdf_root = 0, sum_cdf_ml = 0;
    int count = 0, cell_count = 0;
    double exact_cdf = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double exact = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                                      std::lgamma(n - k + 1.0) + k * lp1 + (n - k) * lp2);
        exact_cdf += exact;
        const bool in_support = exact > 1e-12;

        const double zm = z_ml(k);
        const double approx_ml = norm_pdf(zm) * jac_ml;
        double approx_root = std::numeric_limits<double>::quiet_NaN();
        if (k >= 1 && k <= n - 1) {
            const double jr = std::sqrt(p2 / k) + std::sqrt(p1 / (n - k));
            approx_root = norm_pdf(z_root(k)) * jr;
        }
        rep.table.push_back({double(k), exact, approx_root, approx_ml});

        // primary metric: same interior-k mask for both approximations
        if (in_support && k >= 1 && k <= n - 1) {
            sum_root += std::abs(approx_root - exact);
            sum_ml += std::abs(approx_ml - exact);
            ++count;
        }
        if (in_support) {
            const double lo = k - 0.5;
            const double hi = k + 0.5;
            const double cell_root =
                (k == n ? 1.0 : norm_cdf(z_root(std::min(double(n), hi)))) -
                (k == 0 ? 0.0 : norm_cdf(z_root(std::max(0.0, lo))));
            const double cell_ml = norm_cdf(z_ml(hi)) - norm_cdf(z_ml(lo));
            sum_cell_root += std::abs(cell_root - exact);
            sum_cell_ml += std::abs(cell_ml - exact);
            const double cdf_root = k == n ? 1.0 : norm_cdf(z_root(std::min(double(n), hi)));
            const double cdf_ml = norm_cdf(z_ml(hi));
            sum_cdf_root += std::abs(cdf_root - exact_cdf);
            sum_cdf_ml += std::abs(cdf_ml - exact_cdf);
            ++cell_count;
        }
    }
    if (count > 0) {
        rep.mae_root = sum_root / count;
        rep.mae_ml = sum_ml / count;
        rep.ratio = rep.mae_ml / rep.mae_root;
    }
    if (cell_count > 0) {
        rep.cell_mae_root = sum_cell_root / cell_count;
        rep.cell_mae_ml = sum_cell_ml / cell_count;
        rep.cell_ratio = rep.cell_mae_ml / rep.cell_mae_root;
        rep.cdf_mae_root = sum_cdf_root / cell_count;
        rep.cdf_mae_ml = sum_cdf_ml / cell_count;
        rep.cdf_ratio = rep.cdf_mae_ml / rep.cdf_mae_root;
    }
    return rep;
}

ConfidenceCone confidence_cone(const StateVector& estimate, double n_total, double alpha) {
    if (!estimate.is_normalized()) throw std::domain_error("cone axis must be normalized");
    if (!(n_total >= 1.0)) throw std::domain_error("need n_total >= 1");
    const int dof = estimate.size() - 1;
    if (dof < 1) throw std::domain_error("confidence cone needs s >= 2");
    const double q = chi2_quantile(alpha, dof);
    const double ratio = q / (4.0 * n_total);
    ConfidenceCone cone{estimate, 0.0, 1.0 - alpha, false};
    if (ratio >= 1.0) {
        cone.half_angle = std::numbers::pi / 2.0;
        cone.capped = true;
    } else {
        cone.half_angle = std::asin(std::sqrt(ratio));
    }
    return cone;
}

FidelityReport informational_fidelity(const Mat& H, const Vec& xi_true, const Vec& xi_hat) {
    if (H.rows() != H.cols() || H.rows() != xi_true.size() || H.rows() != xi_hat.size()) {
        throw std::domain_error("dimension mismatch in informational fidelity");
    }
    if (H.rows() % 2 != 0) throw std::domain_error("H must have even dimension 2s");
    const int s = static_cast<int>(H.rows()) / 2;

    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    int zero_index = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        if (std::abs(es.eigenvalues()(i)) < std::abs(es.eigenvalues()(zero_index))) zero_index = i;
    }
    const Vec gauge = es.eigenvectors().col(zero_index);

    Vec dxi = xi_true - xi_hat;
    dxi -= gauge * gauge.dot(dxi);

    const double qs = xi_hat.dot(H * xi_hat);
    if (!(qs > 0.0)) throw std::domain_error("degenerate <xi|H|xi>");
    const double qd = dxi.dot(H * dxi);

    FidelityReport rep;
    rep.qform_state = qs;
    rep.qform_delta = qd;
    rep.f_h = 1.0 - qd / qs;
    rep.loss = qd / qs;
    rep.n_total = 0.5 * qs;
    rep.dof = 2 * s - 1;
    return rep;
}

double mean_information_loss(int s, double n) {
    if (s < 1 || n < 1.0) throw std::domain_error("need s >= 1 and n >= 1");
    return (2.0 * s - 1.0) / (4.0 * n);
}

} // namespace rootstat
