#include "rootstat/fisher.hpp"

#include <cmath>
#include <stdexcept>

#include "rootstat/errors.hpp"

namespace rootstat {

void MeasurementProtocol::validate() const {
    if (X.cols() < 1) throw std::domain_error("protocol needs at least one state component");
    if (X.rows() != t.size() || X.rows() != k.size()) {
        throw std::domain_error("protocol rows of X, t, k must agree");
    }
    for (int i = 0; i < t.size(); ++i) {
        if (!(t(i) > 0.0)) throw std::domain_error("exposure times must be positive");
        if (k(i) < 0) throw std::domain_error("counts must be nonnegative");
    }
}

Mat fisher_analytic(const Vec& c, double n) {
    const int s = static_cast<int>(c.size());
    if (s < 2) throw std::domain_error("need s >= 2 for the reduced chart");
    if (std::abs(c.squaredNorm() - 1.0) > 1e-10) {
        throw std::domain_error("coefficients must be normalized");
    }
    const double c0 = c(0);
    if (!(c0 > 0.0)) {
        throw std::domain_error("degenerate parameterization: c_0 must be positive");
    }
    Mat out(s - 1, s - 1);
    for (int i = 1; i < s; ++i) {
        for (int j = 1; j < s; ++j) {
            out(i - 1, j - 1) = 4.0 * n * ((i == j ? 1.0 : 0.0) + c(i) * c(j) / (c0 * c0));
        }
    }
    return out;
}

Mat fisher_quadrature(const Vec& c, const HermiteBasis& basis, double n) {
    const int s = static_cast<int>(c.size());
    if (s < 2) throw std::domain_error("need s >= 2 for the reduced chart");
    if (s > basis.size()) throw std::domain_error("state larger than basis");
    const double c0 = c(0);
    if (!(c0 > 0.0)) {
        throw std::domain_error("degenerate parameterization: c_0 must be positive");
    }
    // d psi / d c_i = phi_i - (c_i/c_0) phi_0; the integrand is a polynomial of
    // degree <= 2(s-1) against e^{-y^2}, integrated exactly by the rule below.
    const GaussHermiteRule rule = gauss_hermite(std::max(2 * s, 8));
    const int q = static_cast<int>(rule.nodes.size());
    Mat dpsi(q, s - 1);
    for (int a = 0; a < q; ++a) {
        const double y = rule.nodes(a);
        const double h0 = basis.eval_poly(0, y);
        for (int i = 1; i < s; ++i) {
            dpsi(a, i - 1) = basis.eval_poly(i, y) - (c(i) / c0) * h0;
        }
    }
    Mat out(s - 1, s - 1);
    for (int i = 0; i < s - 1; ++i) {
        for (int j = 0; j < s - 1; ++j) {
            double acc = 0.0;
            for (int a = 0; a < q; ++a) acc += rule.weights(a) * dpsi(a, i) * dpsi(a, j);
            out(i, j) = 4.0 * n * acc;
        }
    }
    return out;
}

Mat covariance_full(const Vec& c, double n) {
    const int s = static_cast<int>(c.size());
    Mat out = Mat::Identity(s, s) - c * c.transpose();
    return out / (4.0 * n);
}

Vec intensity(const MeasurementProtocol& protocol, const CVec& c) {
    if (protocol.X.cols() != c.size()) throw std::domain_error("dimension mismatch in intensity");
    return (protocol.X * c).cwiseAbs2();
}

CMat hermitian_fisher(const MeasurementProtocol& protocol) {
    return protocol.X.adjoint() * protocol.t.asDiagonal() * protocol.X;
}

CMat empirical_fisher(const MeasurementProtocol& protocol, const Vec& lambda) {
    if (lambda.size() != protocol.X.rows()) {
        throw std::domain_error("one intensity per process required");
    }
    const int s = protocol.dim();
    CMat out = CMat::Zero(s, s);
    for (int nu = 0; nu < protocol.processes(); ++nu) {
        if (protocol.k(nu) == 0) continue;
        if (!(lambda(nu) > 0.0)) {
            throw SingularLikelihoodError("k > 0 with lambda = 0 in process " + std::to_string(nu));
        }
        const double w = protocol.k(nu) / lambda(nu);
        out.noalias() += w * protocol.X.row(nu).adjoint() * protocol.X.row(nu);
    }
    return out;
}

CMat symmetric_fisher(const MeasurementProtocol& protocol, const CVec& M) {
    if (M.size() != protocol.X.rows()) {
        throw std::domain_error("one amplitude per process required");
    }
    const int s = protocol.dim();
    CMat out = CMat::Zero(s, s);
    for (int nu = 0; nu < protocol.processes(); ++nu) {
        if (protocol.k(nu) == 0) continue;
        if (std::abs(M(nu)) == 0.0) {
            throw SingularLikelihoodError("k > 0 with M = 0 in process " + std::to_string(nu));
        }
        const Complex w = double(protocol.k(nu)) / (M(nu) * M(nu));
        out.noalias() += w * protocol.X.row(nu).transpose() * protocol.X.row(nu);
    }
    return out;
}

Mat complete_info(const CMat& I, const CMat& K) {
    if (I.rows() != K.rows() || I.cols() != K.cols() || I.rows() != I.cols()) {
        throw std::domain_error("I and K must be square of equal dimension");
    }
    const int s = static_cast<int>(I.rows());
    Mat H(2 * s, 2 * s);
    H.topLeftCorner(s, s) = (I + K).real();
    H.topRightCorner(s, s) = -(I + K).imag();
    H.bottomLeftCorner(s, s) = (I - K).imag();
    H.bottomRightCorner(s, s) = (I - K).real();
    const double scale = H.cwiseAbs().maxCoeff();
    const double asym = (H - H.transpose()).cwiseAbs().maxCoeff();
    if (scale > 0.0 && asym > 1e-10 * scale) {
        throw std::domain_error("complete information matrix is not symmetric; "
                                "I must be hermitian and K symmetric");
    }
    return 0.5 * (H + H.transpose());
}

namespace {

CompletenessReport check_impl(const Mat& H, const StateVector* c, double tolerance) {
    if (H.rows() != H.cols() || H.rows() < 2) throw std::domain_error("H must be square");
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    CompletenessReport report;
    report.eigenvalues = es.eigenvalues();
    const double hmax = report.eigenvalues.cwiseAbs().maxCoeff();
    const double floor = tolerance * (hmax > 0 ? hmax : 1.0);

    int zero_index = 0;
    for (int i = 0; i < report.eigenvalues.size(); ++i) {
        const double h = report.eigenvalues(i);
        if (std::abs(h) < floor) ++report.near_zero_count;
        if (h < -floor) report.maximum = false;
        if (std::abs(h) < std::abs(report.eigenvalues(zero_index))) zero_index = i;
    }
    report.zero_mode = es.eigenvectors().col(zero_index);
    report.complete = report.maximum && report.near_zero_count == 1;

    if (c != nullptr) {
        const CVec gauge_c = Complex(0, 1) * c->coeffs();
        Vec g(2 * c->size());
        g.head(c->size()) = gauge_c.real();
        g.tail(c->size()) = gauge_c.imag();
        const double gn = g.norm();
        if (gn > 0 && g.size() == report.zero_mode.size()) {
            double cosang = std::abs(report.zero_mode.dot(g)) / gn;
            cosang = std::min(1.0, cosang);
            report.gauge_angle = std::acos(cosang);
        }
    }
    return report;
}

} // namespace

CompletenessReport completeness_check(const Mat& H, double tolerance) {
    return check_impl(H, nullptr, tolerance);
}

CompletenessReport completeness_check(const Mat& H, const StateVector& c, double tolerance) {
    return check_impl(H, &c, tolerance);
}

std::vector<PrincipalFluctuation> principal_fluctuations(const Mat& H, double tolerance) {
    const CompletenessReport report = completeness_check(H, tolerance);
    if (!report.complete) {
        throw IncompleteProtocolError("principal fluctuations require a complete protocol");
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    const double hmax = es.eigenvalues().cwiseAbs().maxCoeff();
    const double floor = tolerance * (hmax > 0 ? hmax : 1.0);
    std::vector<PrincipalFluctuation> out;
    // ascending eigenvalues: skip the single zero mode, then variances
    // 1/(2h) come out in decreasing order
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double h = es.eigenvalues()(i);
        if (std::abs(h) < floor) continue;
        out.push_back({1.0 / (2.0 * h), es.eigenvectors().col(i)});
    }
    return out;
}

InfoMatrices info_matrices(const MeasurementProtocol& protocol, const CVec& c) {
    InfoMatrices out;
    out.I = hermitian_fisher(protocol);
    const CVec M = protocol.X * c;
    out.J = empirical_fisher(protocol, M.cwiseAbs2());
    out.K = symmetric_fisher(protocol, M);
    out.H = complete_info(out.I, out.K);
    return out;
}

} // namespace rootstat
