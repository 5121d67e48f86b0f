#include "rootstat/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "rootstat/errors.hpp"

namespace rootstat {

Potential1D Potential1D::harmonic(double omega, double mass, double hbar) {
    Potential1D p;
    p.u = [mass, omega](double x) { return 0.5 * mass * omega * omega * x * x; };
    p.du = [mass, omega](double x) { return mass * omega * omega * x; };
    p.mass = mass;
    p.hbar = hbar;
    return p;
}

Potential1D Potential1D::quartic(double mass, double hbar) {
    Potential1D p;
    p.u = [](double x) { return x * x * x * x; };
    p.du = [](double x) { return 4.0 * x * x * x; };
    p.mass = mass;
    p.hbar = hbar;
    return p;
}

EigenSystem solve_eigensystem(const Potential1D& potential, const Grid1D& grid, int s) {
    if (grid.points < 16) throw std::domain_error("grid too coarse");
    if (s < 1 || s > grid.points / 2) throw std::domain_error("invalid eigenpair count");
    if (!(potential.mass > 0.0) || !(potential.hbar > 0.0)) {
        throw std::domain_error("mass and hbar must be positive");
    }
    const int n = grid.points;
    const double h = grid.spacing();
    const double kin = potential.hbar * potential.hbar / (2.0 * potential.mass * h * h);

    // order-6 central stencil for -d^2/dx^2 with Dirichlet truncation
    const double c0 = 49.0 / 18.0, c1 = -3.0 / 2.0, c2 = 3.0 / 20.0, c3 = -1.0 / 90.0;
    Mat ham = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        ham(i, i) = kin * c0 + potential.u(grid.node(i));
        if (i + 1 < n) ham(i, i + 1) = ham(i + 1, i) = kin * c1;
        if (i + 2 < n) ham(i, i + 2) = ham(i + 2, i) = kin * c2;
        if (i + 3 < n) ham(i, i + 3) = ham(i + 3, i) = kin * c3;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(ham);

    EigenSystem out;
    out.grid = grid;
    out.mass = potential.mass;
    out.hbar = potential.hbar;
    out.frequencies = es.eigenvalues().head(s) / potential.hbar;
    out.functions = es.eigenvectors().leftCols(s) / std::sqrt(h);

    double leak = 0.0;
    for (int j = 0; j < s; ++j) {
        const double peak = out.functions.col(j).cwiseAbs().maxCoeff();
        const double edge = std::max(std::abs(out.functions(0, j)),
                                     std::abs(out.functions(n - 1, j)));
        if (peak > 0) leak = std::max(leak, edge / peak);
    }
    out.boundary_amplitude = leak;
    return out;
}

EigenSystem hermite_eigensystem(const Grid1D& grid, int s, double scale, double mass,
                                double hbar) {
    const HermiteBasis basis(s, scale);
    EigenSystem out;
    out.grid = grid;
    out.mass = mass;
    out.hbar = hbar;
    out.frequencies.resize(s);
    out.functions.resize(grid.points, s);
    const double omega = hbar / (mass * scale * scale);
    for (int j = 0; j < s; ++j) out.frequencies(j) = omega * (j + 0.5);
    for (int i = 0; i < grid.points; ++i) {
        const Vec phi = basis.eval_all(grid.node(i));
        out.functions.row(i) = phi.transpose();
    }
    double leak = 0.0;
    for (int j = 0; j < s; ++j) {
        const double peak = out.functions.col(j).cwiseAbs().maxCoeff();
        const double edge = std::max(std::abs(out.functions(0, j)),
                                     std::abs(out.functions(grid.points - 1, j)));
        if (peak > 0) leak = std::max(leak, edge / peak);
    }
    out.boundary_amplitude = leak;
    return out;
}

CMat matrix_elements(const EigenSystem& eig, const std::function<double(double)>& f) {
    const int n = eig.grid.points;
    const double h = eig.grid.spacing();
    Vec weights = Vec::Constant(n, h);
    weights(0) = weights(n - 1) = 0.5 * h;  // trapezoid
    Vec fw(n);
    for (int i = 0; i < n; ++i) fw(i) = f(eig.grid.node(i)) * weights(i);
    const Mat m = eig.functions.transpose() * fw.asDiagonal() * eig.functions;
    return m.cast<Complex>();
}

double heisenberg_residual(const EigenSystem& eig, const Potential1D& potential) {
    const int s = static_cast<int>(eig.functions.cols());
    const auto du = potential.du
                        ? potential.du
                        : std::function<double(double)>([&](double x) {
                              const double h = eig.grid.spacing();
                              return (potential.u(x + h) - potential.u(x - h)) / (2.0 * h);
                          });
    const CMat xm = matrix_elements(eig, [](double x) { return x; });
    const CMat fm = matrix_elements(eig, du);
    const double eps = fm.cwiseAbs().maxCoeff();
    double res = 0.0;
    for (int j = 0; j < s; ++j) {
        for (int k = 0; k < s; ++k) {
            const double dw = eig.frequencies(j) - eig.frequencies(k);
            const Complex lhs = potential.mass * dw * dw * xm(k, j);
            const Complex rhs = fm(k, j);
            res = std::max(res, std::abs(lhs - rhs) / (std::abs(rhs) + eps));
        }
    }
    return res;
}

MixedRootDensity evolve_mixed(const MixedRootDensity& density, double t) {
    MixedRootDensity out = density;
    for (int j = 0; j < out.dim(); ++j) {
        const double arg = -density.frequencies(j) * t;
        out.components.row(j) *= Complex(std::cos(arg), std::sin(arg));
    }
    return out;
}

CMat density_matrix_t(const MixedRootDensity& density, double t) {
    const MixedRootDensity at_t = evolve_mixed(density, t);
    return at_t.components * at_t.components.adjoint();
}

double ehrenfest_check(const MixedRootDensity& density, const EigenSystem& eig,
                       const Potential1D& potential, const Vec& t_grid) {
    if (t_grid.size() < 3) throw std::domain_error("need at least three time points");
    if (density.dim() != eig.functions.cols()) {
        throw std::domain_error("density components must match the eigensystem");
    }
    const auto du = potential.du
                        ? potential.du
                        : std::function<double(double)>([&](double x) {
                              const double h = eig.grid.spacing();
                              return (potential.u(x + h) - potential.u(x - h)) / (2.0 * h);
                          });
    const CMat xm = matrix_elements(eig, [](double x) { return x; });
    const CMat fm = matrix_elements(eig, du);

    const int nt = static_cast<int>(t_grid.size());
    Vec mean_x(nt), mean_f(nt);
    for (int i = 0; i < nt; ++i) {
        const CMat rho = density_matrix_t(density, t_grid(i));
        mean_x(i) = std::real((rho * xm).trace());
        mean_f(i) = std::real((rho * fm).trace());
    }
    double res = 0.0;
    for (int i = 1; i + 1 < nt; ++i) {
        const double dt_lo = t_grid(i) - t_grid(i - 1);
        const double dt_hi = t_grid(i + 1) - t_grid(i);
        if (std::abs(dt_lo - dt_hi) > 1e-12 * std::abs(dt_hi)) {
            throw std::domain_error("time grid must be uniform");
        }
        const double acc = (mean_x(i + 1) - 2.0 * mean_x(i) + mean_x(i - 1)) / (dt_hi * dt_hi);
        res = std::max(res, std::abs(acc + mean_f(i) / potential.mass));
    }
    return res;
}

} // namespace rootstat
