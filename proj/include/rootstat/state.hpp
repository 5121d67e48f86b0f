#pragma once

#include "rootstat/basis.hpp"

namespace rootstat {

/// Complex coefficient vector of a psi-function expansion. Normalized by
/// default; the Poisson estimation setting works with non-normalized vectors
/// whose norm carries the total process intensity.
class StateVector {
public:
    explicit StateVector(CVec coeffs, bool normalized = true);

    /// Normalizes the supplied coefficients.
    static StateVector unit(CVec coeffs);

    int size() const { return static_cast<int>(c_.size()); }
    const CVec& coeffs() const { return c_; }
    Complex operator[](int j) const { return c_(j); }
    bool is_normalized() const { return normalized_; }
    double norm() const { return c_.norm(); }

private:
    CVec c_;
    bool normalized_;
};

/// p(x) = |sum_j c_j phi_j(x)|^2.
double density_at(const StateVector& state, const HermiteBasis& basis, double x);

/// ptilde(p) = |sum_j c_j phitilde_j(p)|^2.
double momentum_density_at(const StateVector& state, const HermiteBasis& basis, double p);

/// Rotates by a global phase so the largest-magnitude coefficient (lowest
/// index on ties) is real and positive. Phases are not observable; this picks
/// the canonical representative for comparisons.
StateVector gauge_fix(const StateVector& state);

/// Rotates `state` by the global phase that maximizes Re<reference, state>.
/// Used before forming deviation vectors between an estimate and a truth.
StateVector align_phase(const StateVector& reference, const StateVector& state);

/// |<a, b>|^2.
double fidelity(const StateVector& a, const StateVector& b);

/// xi = (Re c_0..Re c_{s-1}, Im c_0..Im c_{s-1}); an isometry.
Vec to_real_doubled(const StateVector& state);
StateVector from_real_doubled(const Vec& xi, bool normalized = true);

/// rho_ij = c_i c_j^*; rank one, trace one for normalized states.
CMat density_matrix(const StateVector& state);

} // namespace rootstat
