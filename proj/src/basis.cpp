#include "rootstat/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rootstat {

namespace {

constexpr double kPi = std::numbers::pi;
const double kQuarticRootPi = std::pow(kPi, -0.25);

void check_index(int j, int size) {
    if (j < 0 || j >= size) {
        throw std::domain_error("Hermite index out of range: j=" + std::to_string(j) +
                                ", size=" + std::to_string(size));
    }
}

} // namespace

HermiteBasis::HermiteBasis(int size, double scale) : size_(size), scale_(scale) {
    if (size < 1) throw std::domain_error("basis size must be positive");
    if (!(scale > 0.0)) throw std::domain_error("basis scale must be positive");
}

double HermiteBasis::eval_poly(int j, double y) const {
    check_index(j, size_);
    double hm = 0.0;
    double h = kQuarticRootPi;
    for (int i = 0; i < j; ++i) {
        double hn = y * std::sqrt(2.0 / (i + 1)) * h - std::sqrt(double(i) / (i + 1)) * hm;
        hm = h;
        h = hn;
    }
    return h;
}

double HermiteBasis::eval(int j, double x) const {
    if (!std::isfinite(x)) throw std::domain_error("coordinate must be finite");
    const double y = x / scale_;
    return eval_poly(j, y) * std::exp(-0.5 * y * y) / std::sqrt(scale_);
}

Complex HermiteBasis::eval_conjugate(int j, double p) const {
    if (!std::isfinite(p)) throw std::domain_error("momentum must be finite");
    const double y = p * scale_;
    const double value = eval_poly(j, y) * std::exp(-0.5 * y * y) * std::sqrt(scale_);
    // (-i)^j cycles through 1, -i, -1, i
    switch (j & 3) {
        case 0: return {value, 0.0};
        case 1: return {0.0, -value};
        case 2: return {-value, 0.0};
        default: return {0.0, value};
    }
}

Vec HermiteBasis::eval_all(double x) const {
    if (!std::isfinite(x)) throw std::domain_error("coordinate must be finite");
    const double y = x / scale_;
    const double gauss = std::exp(-0.5 * y * y) / std::sqrt(scale_);
    Vec out(size_);
    double hm = 0.0;
    double h = kQuarticRootPi;
    out(0) = h * gauss;
    for (int j = 1; j < size_; ++j) {
        double hn = y * std::sqrt(2.0 / j) * h - std::sqrt(double(j - 1) / j) * hm;
        hm = h;
        h = hn;
        out(j) = h * gauss;
    }
    return out;
}

CVec HermiteBasis::eval_conjugate_all(double p) const {
    if (!std::isfinite(p)) throw std::domain_error("momentum must be finite");
    const double y = p * scale_;
    const double gauss = std::exp(-0.5 * y * y) * std::sqrt(scale_);
    CVec out(size_);
    double hm = 0.0;
    double h = kQuarticRootPi;
    for (int j = 0; j < size_; ++j) {
        if (j > 0) {
            double hn = y * std::sqrt(2.0 / j) * h - std::sqrt(double(j - 1) / j) * hm;
            hm = h;
            h = hn;
        }
        const double value = h * gauss;
        switch (j & 3) {
            case 0: out(j) = Complex(value, 0.0); break;
            case 1: out(j) = Complex(0.0, -value); break;
            case 2: out(j) = Complex(-value, 0.0); break;
            default: out(j) = Complex(0.0, value); break;
        }
    }
    return out;
}

GaussHermiteRule gauss_hermite(int n) {
    if (n < 1) throw std::domain_error("quadrature order must be positive");
    Vec diag = Vec::Zero(n);
    Vec sub(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Mat> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    GaussHermiteRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights.resize(n);
    // Christoffel form w = 1/sum_k h_k(y)^2: relatively accurate even at the
    // extreme nodes, where eigenvector components sit at the roundoff floor.
    for (int i = 0; i < n; ++i) {
        const double y = rule.nodes(i);
        double hm = 0.0;
        double h = kQuarticRootPi;
        double sum = h * h;
        for (int k = 0; k + 1 < n; ++k) {
            const double hn = y * std::sqrt(2.0 / (k + 1)) * h -
                              std::sqrt(double(k) / (k + 1)) * hm;
            hm = h;
            h = hn;
            sum += h * h;
        }
        rule.weights(i) = 1.0 / sum;
    }
    return rule;
}

CMat dft_unitary(int dim) {
    if (dim < 1) throw std::domain_error("DFT dimension must be positive");
    CMat u(dim, dim);
    const double norm = 1.0 / std::sqrt(double(dim));
    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) {
            const double arg = 2.0 * kPi * double(j) * double(k) / dim;
            u(j, k) = norm * Complex(std::cos(arg), std::sin(arg));
        }
    }
    return u;
}

RegisterBasis::RegisterBasis(int dim) : u_(dft_unitary(dim)) {}

RegisterBasis::RegisterBasis(CMat conjugate_transform) : u_(std::move(conjugate_transform)) {
    if (u_.rows() != u_.cols() || u_.rows() < 1) {
        throw std::domain_error("conjugate transform must be square");
    }
    CMat gram = u_.adjoint() * u_;
    const int d = static_cast<int>(u_.rows());
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const Complex expect = i == j ? Complex(1, 0) : Complex(0, 0);
            if (std::abs(gram(i, j) - expect) > 1e-12) {
                throw std::domain_error("conjugate transform is not unitary");
            }
        }
    }
}

} // namespace rootstat
