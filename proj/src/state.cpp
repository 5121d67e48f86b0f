#include "rootstat/state.hpp"

#include <cmath>
#include <stdexcept>

namespace rootstat {

StateVector::StateVector(CVec coeffs, bool normalized)
    : c_(std::move(coeffs)), normalized_(normalized) {
    if (c_.size() < 1) throw std::domain_error("state vector must have s >= 1");
    if (normalized_ && std::abs(c_.squaredNorm() - 1.0) > 1e-12) {
        throw std::domain_error("state vector marked normalized but |c|^2 != 1");
    }
}

StateVector StateVector::unit(CVec coeffs) {
    const double n = coeffs.norm();
    if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
    return StateVector(coeffs / n, true);
}

double density_at(const StateVector& state, const HermiteBasis& basis, double x) {
    if (state.size() > basis.size()) throw std::domain_error("state larger than basis");
    const Vec phi = basis.eval_all(x);
    Complex amp(0, 0);
    for (int j = 0; j < state.size(); ++j) amp += state[j] * phi(j);
    return std::norm(amp);
}

double momentum_density_at(const StateVector& state, const HermiteBasis& basis, double p) {
    if (state.size() > basis.size()) throw std::domain_error("state larger than basis");
    const CVec phit = basis.eval_conjugate_all(p);
    Complex amp(0, 0);
    for (int j = 0; j < state.size(); ++j) amp += state[j] * phit(j);
    return std::norm(amp);
}

StateVector gauge_fix(const StateVector& state) {
    const CVec& c = state.coeffs();
    int pivot = -1;
    double best = 0.0;
    for (int j = 0; j < c.size(); ++j) {
        const double mag = std::abs(c(j));
        if (mag > best) {  // strict: lowest index wins ties
            best = mag;
            pivot = j;
        }
    }
    if (pivot < 0 || best == 0.0) throw std::domain_error("cannot gauge-fix the zero vector");
    const Complex phase = std::conj(c(pivot)) / best;
    return StateVector(c * phase, state.is_normalized());
}

StateVector align_phase(const StateVector& reference, const StateVector& state) {
    const Complex ip = state.coeffs().dot(reference.coeffs());  // <state, reference>
    const double mag = std::abs(ip);
    if (mag == 0.0) return state;
    return StateVector(state.coeffs() * (ip / mag), state.is_normalized());
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (a.size() != b.size()) throw std::domain_error("dimension mismatch in fidelity");
    const Complex ip = a.coeffs().dot(b.coeffs());  // sum a_j^* b_j
    return std::norm(ip);
}

Vec to_real_doubled(const StateVector& state) {
    const int s = state.size();
    Vec xi(2 * s);
    xi.head(s) = state.coeffs().real();
    xi.tail(s) = state.coeffs().imag();
    return xi;
}

StateVector from_real_doubled(const Vec& xi, bool normalized) {
    if (xi.size() % 2 != 0 || xi.size() == 0) {
        throw std::domain_error("real-doubled vector must have even positive length");
    }
    const int s = static_cast<int>(xi.size()) / 2;
    CVec c(s);
    for (int j = 0; j < s; ++j) c(j) = Complex(xi(j), xi(s + j));
    return StateVector(std::move(c), normalized);
}

CMat density_matrix(const StateVector& state) {
    return state.coeffs() * state.coeffs().adjoint();
}

} // namespace rootstat
