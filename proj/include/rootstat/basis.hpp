#pragma once

#include <complex>

#include <Eigen/Dense>

namespace rootstat {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

/// Orthonormal Chebyshev-Hermite function family phi_0..phi_{s-1}.
///
/// phi_j(x) = h_j(x/scale) exp(-(x/scale)^2/2) / sqrt(scale), where h_j is the
/// normalized Hermite polynomial obeying
///   h_{j+1}(y) = y sqrt(2/(j+1)) h_j(y) - sqrt(j/(j+1)) h_{j-1}(y).
/// The recurrence keeps values finite far beyond the factorial-overflow point
/// of the textbook formula. Samples are rescaled x -> x/scale before
/// expansion; scale defaults to 1.
class HermiteBasis {
public:
    explicit HermiteBasis(int size, double scale = 1.0);

    int size() const { return size_; }
    double scale() const { return scale_; }

    /// phi_j(x) in physical units.
    double eval(int j, double x) const;

    /// Fourier conjugate: phitilde_j(p) = (-i)^j phi_j(p*scale) * sqrt(scale).
    /// Hermite functions are eigenfunctions of the Fourier transform with
    /// eigenvalue (-i)^j; the scale factors come from the x -> x/scale
    /// substitution in the transform integral.
    Complex eval_conjugate(int j, double p) const;

    /// Polynomial part h_j at a dimensionless coordinate. phi_j = h_j e^{-y^2/2}
    /// up to the scale factor; quadrature code integrates h_i h_j against the
    /// Gauss-Hermite weight e^{-y^2} without ever forming e^{+y^2}.
    double eval_poly(int j, double y) const;

    /// phi_0(x)..phi_{s-1}(x) in one recurrence sweep.
    Vec eval_all(double x) const;

    /// phitilde_0(p)..phitilde_{s-1}(p).
    CVec eval_conjugate_all(double p) const;

private:
    int size_;
    double scale_;
};

/// Gauss-Hermite rule: integrates f(y) e^{-y^2} exactly for polynomial f of
/// degree <= 2n-1. Nodes/weights from the Golub-Welsch tridiagonal.
struct GaussHermiteRule {
    Vec nodes;
    Vec weights;
};

GaussHermiteRule gauss_hermite(int n);

/// U_jk = exp(2 pi i j k / dim) / sqrt(dim).
CMat dft_unitary(int dim);

/// Computational basis of a quantum register together with the unitary that
/// maps amplitudes into the conjugate (complementary) measurement basis.
class RegisterBasis {
public:
    /// Conjugate transform defaults to the DFT of matching dimension.
    explicit RegisterBasis(int dim);

    /// Any unitary is accepted; unitarity is validated to 1e-12 elementwise.
    explicit RegisterBasis(CMat conjugate_transform);

    int dim() const { return static_cast<int>(u_.rows()); }
    const CMat& conjugate_transform() const { return u_; }

private:
    CMat u_;
};

} // namespace rootstat
