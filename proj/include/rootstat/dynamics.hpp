#pragma once

#include <functional>

#include "rootstat/basis.hpp"

namespace rootstat {

/// One-dimensional potential with optional analytic derivative; when du is
/// absent the derivative is taken by central differences at the grid spacing.
struct Potential1D {
    std::function<double(double)> u;
    std::function<double(double)> du;
    double mass = 1.0;
    double hbar = 1.0;

    static Potential1D harmonic(double omega = 1.0, double mass = 1.0, double hbar = 1.0);
    static Potential1D quartic(double mass = 1.0, double hbar = 1.0);
};

struct Grid1D {
    double xmin;
    double xmax;
    int points;

    double spacing() const { return (xmax - xmin) / (points - 1); }
    double node(int i) const { return xmin + i * spacing(); }
};

/// Lowest eigenpairs of H = -(hbar^2/2m) d^2/dx^2 + U(x) on a uniform grid
/// with Dirichlet boundaries. frequencies omega_j = E_j / hbar ascending;
/// functions column j holds the j-th eigenfunction, trapezoid-orthonormal.
struct EigenSystem {
    Vec frequencies;
    Mat functions;          ///< points x s
    Grid1D grid;
    double mass = 1.0;
    double hbar = 1.0;
    double boundary_amplitude = 0.0;  ///< max edge amplitude relative to peak

    bool boundary_leak(double tol = 1e-8) const { return boundary_amplitude > tol; }
};

/// Kinetic term discretized with the 7-point (order-6) central stencil.
/// s-th eigenfunction must decay at the boundary; check boundary_leak().
EigenSystem solve_eigensystem(const Potential1D& potential, const Grid1D& grid, int s);

/// Eigensystem-shaped object built from Hermite functions of the given scale
/// with harmonic frequencies; a deliberately mismatched basis for negative
/// controls under non-harmonic potentials.
EigenSystem hermite_eigensystem(const Grid1D& grid, int s, double scale,
                                double mass = 1.0, double hbar = 1.0);

/// <k| f |j> by trapezoid quadrature; hermitian for real f.
CMat matrix_elements(const EigenSystem& eig, const std::function<double(double)>& f);

/// Max over j,k of |m (w_j - w_k)^2 <k|x|j> - <k|dU/dx|j>| / (|<k|dU/dx|j>| + eps),
/// eps = max |<k|dU/dx|j>|. Small residual certifies the basis/frequency
/// family as the Hamiltonian eigensystem.
double heisenberg_residual(const EigenSystem& eig, const Potential1D& potential);

/// Root expansion of a density: P = sum_l |psi^(l)|^2 with component vectors
/// evolving as c_j^(l)(t) = c_j^(l)(0) exp(-i w_j t).
struct MixedRootDensity {
    CMat components;   ///< s x L, one column per component vector
    Vec frequencies;   ///< shared, length s
    double hbar = 1.0;

    int dim() const { return static_cast<int>(components.rows()); }
};

MixedRootDensity evolve_mixed(const MixedRootDensity& density, double t);

/// rho_jk(t) = sum_l c_j^(l)(t) c_k^(l)*(t); hermitian, trace-constant.
CMat density_matrix_t(const MixedRootDensity& density, double t);

/// Max over the interior of t_grid of
/// |d^2<x>/dt^2 + <dU/dx>/m| with the second derivative by central
/// differences; expectations from rho(t) and matrix elements in `eig`.
double ehrenfest_check(const MixedRootDensity& density, const EigenSystem& eig,
                       const Potential1D& potential, const Vec& t_grid);

} // namespace rootstat
