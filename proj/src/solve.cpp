#include "rootstat/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "rootstat/errors.hpp"

namespace rootstat {

namespace {

constexpr double kDensityFloor = 1e-300;
constexpr double kMixFloor = 1e-9;

double log_sum_floored(const Vec& densities, int* floored) {
    double out = 0.0;
    for (int i = 0; i < densities.size(); ++i) {
        double d = densities(i);
        if (d < kDensityFloor) {
            d = kDensityFloor;
            if (floored) ++*floored;
        }
        out += std::log(d);
    }
    return out;
}

/// phi matrix: row per sample, column per basis function.
Mat sample_matrix(const Vec& xs, const HermiteBasis& basis, int s) {
    Mat out(xs.size(), s);
    for (int k = 0; k < xs.size(); ++k) {
        out.row(k) = basis.eval_all(xs(k)).head(s).transpose();
    }
    return out;
}

CMat sample_matrix_conjugate(const Vec& ps, const HermiteBasis& basis, int s) {
    CMat out(ps.size(), s);
    for (int l = 0; l < ps.size(); ++l) {
        out.row(l) = basis.eval_conjugate_all(ps(l)).head(s).transpose();
    }
    return out;
}

/// Estimates the density inside the truncated span from the sample moment
/// matrix B_ij = mean phi_i(x_k) phi_j(x_k), takes the pointwise square root
/// and projects back onto the basis. Lands in the correct likelihood basin
/// for node-free states where a uniform start often does not.
Vec sqrt_density_start(const Mat& phi, int s) {
    const int n = static_cast<int>(phi.rows());
    const Mat b = phi.transpose() * phi / double(n);
    const double lim = std::sqrt(2.0 * s + 1.0) + 4.0;
    const int grid = 1201;
    const HermiteBasis unit(s);
    Vec c = Vec::Zero(s);
    const double dy = 2.0 * lim / (grid - 1);
    for (int g = 0; g < grid; ++g) {
        const double y = -lim + g * dy;
        const Vec f = unit.eval_all(y);
        const double d = std::max(0.0, double(f.transpose() * b * f));
        c += f * std::sqrt(d) * dy;
    }
    const double norm = c.norm();
    if (norm > 0) c /= norm;
    else c = Vec::Constant(s, 1.0 / std::sqrt(double(s)));
    return c;
}

struct ContinuousModel {
    CMat phi;   // n x s, real-valued entries
    CMat phit;  // m x s
    int s;
    bool real_chart;

    int n() const { return static_cast<int>(phi.rows()); }
    int m() const { return static_cast<int>(phit.rows()); }
    int total() const { return n() + m(); }

    double loglik(const CVec& c, int* floored = nullptr) const {
        double out = 0.0;
        if (n() > 0) out += log_sum_floored((phi * c).cwiseAbs2(), floored);
        if (m() > 0) out += log_sum_floored((phit * c).cwiseAbs2(), floored);
        return out;
    }

    /// R c without forming R.
    CVec apply_r(const CVec& c) const {
        CVec out = CVec::Zero(s);
        if (n() > 0) {
            const CVec ax = phi * c;
            CVec w(ax.size());
            for (int k = 0; k < ax.size(); ++k) {
                w(k) = ax(k) / std::max(std::norm(ax(k)), kDensityFloor);
            }
            out.noalias() += phi.transpose() * w;  // phi entries are real
        }
        if (m() > 0) {
            const CVec ap = phit * c;
            CVec w(ap.size());
            for (int l = 0; l < ap.size(); ++l) {
                w(l) = ap(l) / std::max(std::norm(ap(l)), kDensityFloor);
            }
            out.noalias() += phit.adjoint() * w;
        }
        return out;
    }

    CVec step(const CVec& c) const {
        CVec f = apply_r(c) / double(total());
        if (real_chart) f = f.real().cast<Complex>();
        return f;
    }

    /// Effective complete-information matrix at a solution: the normalization
    /// multiplier contributes (n+m) E, each sample a symmetric 1/amplitude^2
    /// term.
    Mat effective_h(const CVec& c) const {
        CMat k_eff = CMat::Zero(s, s);
        if (n() > 0) {
            const CVec ax = phi * c;
            CVec w(ax.size());
            for (int k = 0; k < ax.size(); ++k) {
                const Complex a2 = ax(k) * ax(k);
                w(k) = std::abs(a2) < kDensityFloor ? Complex(0, 0) : 1.0 / a2;
            }
            k_eff.noalias() += phi.transpose() * w.asDiagonal() * phi;
        }
        if (m() > 0) {
            const CVec ap = phit * c;
            CVec w(ap.size());
            for (int l = 0; l < ap.size(); ++l) {
                const Complex a2 = ap(l) * ap(l);
                w(l) = std::abs(a2) < kDensityFloor ? Complex(0, 0) : 1.0 / a2;
            }
            k_eff.noalias() += phit.transpose() * w.asDiagonal() * phit;
        }
        const CMat i_eff = CMat::Identity(s, s) * double(total());
        return complete_info(i_eff, k_eff);
    }
};

struct RegisterModel {
    Vec nc;
    Vec mc;
    CMat u;
    int s;

    int total() const { return static_cast<int>(std::lround(nc.sum() + mc.sum())); }

    double loglik(const CVec& c) const {
        double out = 0.0;
        const CVec ct = u * c;
        for (int i = 0; i < s; ++i) {
            if (nc(i) > 0) out += nc(i) * std::log(std::max(std::norm(c(i)), kDensityFloor));
        }
        for (int j = 0; j < s; ++j) {
            if (mc(j) > 0) out += mc(j) * std::log(std::max(std::norm(ct(j)), kDensityFloor));
        }
        return out;
    }

    CVec step(const CVec& c) const {
        const CVec ct = u * c;
        CVec bracket = CVec::Zero(s);
        for (int i = 0; i < s; ++i) {
            if (nc(i) == 0) continue;
            const Complex ci = std::conj(c(i));
            if (std::abs(ci) == 0.0) {
                throw SingularLikelihoodError(
                    "register amplitude vanished with nonzero counts; "
                    "retry with a perturbed initialization");
            }
            bracket(i) += nc(i) / ci;
        }
        CVec w = CVec::Zero(s);
        for (int j = 0; j < s; ++j) {
            if (mc(j) == 0) continue;
            const Complex cj = std::conj(ct(j));
            if (std::abs(cj) == 0.0) {
                throw SingularLikelihoodError(
                    "conjugate amplitude vanished with nonzero counts; "
                    "retry with a perturbed initialization");
            }
            w(j) = mc(j) / cj;
        }
        bracket.noalias() += u.adjoint() * w;
        return bracket / double(total());
    }

    Mat effective_h(const CVec& c) const {
        CMat k_eff = CMat::Zero(s, s);
        const CVec ct = u * c;
        for (int i = 0; i < s; ++i) {
            if (nc(i) == 0) continue;
            const Complex a2 = c(i) * c(i);
            if (std::abs(a2) < kDensityFloor) continue;
            k_eff(i, i) += nc(i) / a2;
        }
        for (int j = 0; j < s; ++j) {
            if (mc(j) == 0) continue;
            const Complex a2 = ct(j) * ct(j);
            if (std::abs(a2) < kDensityFloor) continue;
            k_eff.noalias() += (mc(j) / a2) * u.row(j).transpose() * u.row(j);
        }
        const CMat i_eff = CMat::Identity(s, s) * double(total());
        return complete_info(i_eff, k_eff);
    }
};

/// Damped fixed-point iteration on the unit sphere with a monotone likelihood
/// guard: a rejected step halves the mixing weight, an accepted one relaxes
/// it back toward the configured value.
template <typename Model>
void damped_unit_iteration(const Model& model, CVec& c, const SolverOptions& opts,
                           SolveDiagnostics& diag) {
    double a = opts.mixing;
    double ll = model.loglik(c);
    diag.loglik_trace.push_back(ll);
    for (diag.iterations = 0; diag.iterations < opts.max_iter; ++diag.iterations) {
        const CVec f = model.step(c);
        diag.residual = (f - c).norm() / c.norm();
        if (diag.residual < opts.tol) {
            diag.converged = true;
            break;
        }
        CVec cand = (1.0 - a) * c + a * f;
        const double norm = cand.norm();
        if (norm == 0.0) break;
        cand /= norm;
        const double cand_ll = model.loglik(cand);
        if (cand_ll < ll - 1e-12 * std::abs(ll)) {
            a *= 0.5;
            if (a < kMixFloor) break;
            continue;
        }
        c = cand;
        ll = cand_ll;
        diag.loglik_trace.push_back(ll);
        a = std::min(opts.mixing, a * 1.5);
    }
    diag.log_likelihood = ll;
}

/// Alternating projections between the measured moduli in the two bases; the
/// standard phase-retrieval workhorse, used only to seed the ML iteration
/// with candidates in distinct basins.
CMat alternating_projection_starts(const RegisterModel& model, const SolverOptions& opts) {
    const int s = model.s;
    const double n = model.nc.sum();
    const double m = model.mc.sum();
    Vec rx(s), rp(s);
    for (int i = 0; i < s; ++i) {
        rx(i) = std::sqrt((model.nc(i) + 0.5) / (n + 0.5 * s));
        rp(i) = std::sqrt((model.mc(i) + 0.5) / (m + 0.5 * s));
    }
    std::mt19937_64 rng(opts.search_seed);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * std::numbers::pi);
    CMat starts(s, opts.search_starts);
    for (int col = 0; col < opts.search_starts; ++col) {
        for (int i = 0; i < s; ++i) {
            const double th = unif(rng);
            starts(i, col) = rx(i) * Complex(std::cos(th), std::sin(th));
        }
    }
    const auto project = [](CVec v, const Vec& r) {
        for (int i = 0; i < v.size(); ++i) {
            const double mag = std::abs(v(i));
            v(i) = mag > 0 ? Complex(v(i) * (r(i) / mag)) : Complex(r(i), 0);
        }
        return v;
    };
    for (int it = 0; it < opts.search_iters; ++it) {
        for (int col = 0; col < opts.search_starts; ++col) {
            const CVec ct = project(model.u * starts.col(col), rp);
            starts.col(col) = project(model.u.adjoint() * ct, rx);
        }
    }
    for (int col = 0; col < opts.search_starts; ++col) starts.col(col).normalize();
    return starts;
}

Complex i_power(int j) {
    switch (j & 3) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

} // namespace

double log_likelihood_continuous(const SampleSet& samples, const HermiteBasis& basis,
                                 const StateVector& state) {
    if (!state.is_normalized()) throw std::domain_error("state must be normalized");
    const int s = state.size();
    const ContinuousModel model{sample_matrix(samples.xs, basis, s).cast<Complex>(),
                                sample_matrix_conjugate(samples.ps, basis, s), s, false};
    return model.loglik(state.coeffs());
}

CMat r_matrix(const SampleSet& samples, const HermiteBasis& basis, const StateVector& state) {
    const int s = state.size();
    CMat r = CMat::Zero(s, s);
    if (samples.n() > 0) {
        const Mat phi = sample_matrix(samples.xs, basis, s);
        const CVec ax = phi.cast<Complex>() * state.coeffs();
        Vec w(ax.size());
        for (int k = 0; k < ax.size(); ++k) {
            w(k) = 1.0 / std::max(std::norm(ax(k)), kDensityFloor);
        }
        r += (phi.transpose() * w.asDiagonal() * phi).cast<Complex>();
    }
    if (samples.m() > 0) {
        const CMat phit = sample_matrix_conjugate(samples.ps, basis, s);
        const CVec ap = phit * state.coeffs();
        Vec w(ap.size());
        for (int l = 0; l < ap.size(); ++l) {
            w(l) = 1.0 / std::max(std::norm(ap(l)), kDensityFloor);
        }
        r += phit.adjoint() * w.asDiagonal() * phit;
    }
    return r;
}

ContinuousSolution solve_continuous(const SampleSet& samples, const HermiteBasis& basis,
                                    int s, const SolverOptions& opts) {
    if (s < 1) throw std::domain_error("need s >= 1");
    if (s > basis.size()) throw std::domain_error("state larger than basis");
    if (samples.n() + samples.m() < 1) throw std::domain_error("need at least one sample");

    const Mat phi_real = sample_matrix(samples.xs, basis, s);
    const ContinuousModel model{phi_real.cast<Complex>(),
                                sample_matrix_conjugate(samples.ps, basis, s), s,
                                opts.real_chart};

    CVec c;
    if (opts.init) {
        c = *opts.init;
        if (c.size() != s) throw std::domain_error("init vector has wrong dimension");
        if (opts.real_chart) c = c.real().cast<Complex>();
        c.normalize();
    } else if (model.n() > 0) {
        c = sqrt_density_start(phi_real, s).cast<Complex>();
        if (!opts.real_chart) {
            // small phase ramp keeps the complex chart off the real slice
            for (int j = 0; j < s; ++j) c(j) *= Complex(1.0, 0.01 * (j + 1) / double(s));
        }
        c.normalize();
    } else {
        // momentum-only data: seed from the conjugate density, then undo the
        // (-i)^j phases
        Mat phi_m(model.m(), s);
        for (int l = 0; l < model.m(); ++l) {
            for (int j = 0; j < s; ++j) {
                phi_m(l, j) = std::real(model.phit(l, j) * i_power(j));
            }
        }
        const Vec start = sqrt_density_start(phi_m, s);
        c = CVec(s);
        for (int j = 0; j < s; ++j) c(j) = i_power(j) * start(j);
        if (opts.real_chart) c = c.real().cast<Complex>();
        if (c.norm() == 0.0) c = CVec::Constant(s, Complex(1.0 / std::sqrt(double(s)), 0));
        c.normalize();
    }

    ContinuousSolution out{StateVector(CVec::Unit(s, 0)), {}};
    damped_unit_iteration(model, c, opts, out.diag);

    int floored = 0;
    model.loglik(c, &floored);
    out.diag.floored_densities = floored;
    out.diag.lambda = std::real(c.dot(model.apply_r(c)));
    out.diag.completeness_warning = model.total() < s;

    if (opts.compute_info) {
        const CompletenessReport rep =
            completeness_check(model.effective_h(c), StateVector(c, false));
        out.diag.h_eigenvalues = rep.eigenvalues;
        if (!rep.complete) out.diag.completeness_warning = true;
    }
    out.state = gauge_fix(StateVector::unit(c));
    return out;
}

ContinuousSolution solve_register(const RegisterCounts& counts, const CMat& U,
                                  const SolverOptions& opts) {
    const int s = static_cast<int>(U.rows());
    if (U.rows() != U.cols()) throw std::domain_error("conjugate transform must be square");
    if (counts.n_counts.size() != s || counts.m_counts.size() != s) {
        throw std::domain_error("counts length must match the transform dimension");
    }
    if (counts.n() + counts.m() < 1) throw std::domain_error("need at least one measurement");
    if (counts.n_counts.minCoeff() < 0 || counts.m_counts.minCoeff() < 0) {
        throw std::domain_error("counts must be nonnegative");
    }

    const RegisterModel model{counts.n_counts.cast<double>(), counts.m_counts.cast<double>(),
                              U, s};

    CVec best;
    SolveDiagnostics best_diag;
    if (opts.init) {
        best = *opts.init;
        if (best.size() != s) throw std::domain_error("init vector has wrong dimension");
        best.normalize();
        damped_unit_iteration(model, best, opts, best_diag);
    } else {
        // Phase retrieval has many basins separated by tiny likelihood gaps:
        // seed widely, shortlist after a cheap undamped pass, polish the best.
        CMat starts = alternating_projection_starts(model, opts);
        const int n_short = std::min(300, opts.max_iter);
        Vec scores(starts.cols());
        for (int col = 0; col < starts.cols(); ++col) {
            CVec c = starts.col(col);
            bool dead = false;
            for (int it = 0; it < n_short && !dead; ++it) {
                try {
                    c = 0.5 * c + 0.5 * model.step(c);
                    c.normalize();
                } catch (const SingularLikelihoodError&) {
                    dead = true;
                }
            }
            starts.col(col) = c;
            scores(col) = dead ? -std::numeric_limits<double>::infinity() : model.loglik(c);
        }
        std::vector<int> order(starts.cols());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return scores(a) > scores(b); });
        const int n_polish = std::min<int>(opts.polish_candidates, static_cast<int>(order.size()));
        for (int rank = 0; rank < n_polish; ++rank) {
            if (!std::isfinite(scores(order[rank]))) continue;
            CVec c = starts.col(order[rank]);
            SolveDiagnostics diag;
            damped_unit_iteration(model, c, opts, diag);
            if (best.size() == 0 || diag.log_likelihood > best_diag.log_likelihood) {
                best = c;
                best_diag = diag;
            }
        }
        if (best.size() == 0) {
            throw SingularLikelihoodError("all register starts hit vanishing amplitudes");
        }
    }

    ContinuousSolution out{StateVector(CVec::Unit(s, 0)), {}};
    out.diag = best_diag;
    out.diag.completeness_warning |= model.total() < s;
    out.diag.lambda = std::real(best.dot(model.step(best))) * model.total();

    if (opts.compute_info) {
        const CompletenessReport rep =
            completeness_check(model.effective_h(best), StateVector(best, false));
        out.diag.h_eigenvalues = rep.eigenvalues;
        if (!rep.complete) out.diag.completeness_warning = true;
    }
    out.state = gauge_fix(StateVector::unit(best));
    return out;
}

PoissonSolution solve_poisson(const MeasurementProtocol& protocol, const SolverOptions& opts) {
    protocol.validate();
    const int s = protocol.dim();
    const CMat I = hermitian_fisher(protocol);
    Eigen::FullPivLU<CMat> lu(I);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) {
        throw IncompleteProtocolError("hermitian Fisher matrix is singular: "
                                      "the protocol cannot determine the state");
    }
    const double total_counts = protocol.k.cast<double>().sum();

    PoissonSolution out;
    if (total_counts == 0.0) {
        out.state = CVec::Zero(s);
        out.diag.converged = true;
        out.info.I = I;
        out.info.J = CMat::Zero(s, s);
        out.info.K = CMat::Zero(s, s);
        out.info.H = complete_info(out.info.I, out.info.K);
        return out;
    }

    const auto loglik = [&](const CVec& c) {
        const Vec lam = (protocol.X * c).cwiseAbs2();
        double ll = 0.0;
        for (int nu = 0; nu < protocol.processes(); ++nu) {
            const double lt = lam(nu) * protocol.t(nu);
            if (protocol.k(nu) > 0) {
                if (lt <= 0.0) return -std::numeric_limits<double>::infinity();
                ll += protocol.k(nu) * std::log(lt);
            }
            ll -= lt;
        }
        return ll;
    };
    const auto step = [&](const CVec& c) -> CVec {
        const CVec jc = empirical_fisher(protocol, (protocol.X * c).cwiseAbs2()) * c;
        return lu.solve(jc);
    };

    CVec c;
    if (opts.init) {
        c = *opts.init;
        if (c.size() != s) throw std::domain_error("init vector has wrong dimension");
    } else {
        // ramp in modulus and phase: breaks protocol symmetries that would
        // zero a process amplitude at the start
        c = CVec(s);
        for (int j = 0; j < s; ++j) {
            const double arg = 0.3 * j / std::max(1, s - 1);
            c(j) = (1.0 + 0.05 * j) * Complex(std::cos(arg), std::sin(arg));
        }
        c.normalize();
        const double scale = (protocol.X * c).cwiseAbs2().dot(protocol.t);
        if (scale > 0) c *= std::sqrt(total_counts / scale);
    }

    double a = opts.mixing;
    double ll = loglik(c);
    out.diag.loglik_trace.push_back(ll);
    for (out.diag.iterations = 0; out.diag.iterations < opts.max_iter; ++out.diag.iterations) {
        CVec f;
        try {
            f = step(c);
        } catch (const SingularLikelihoodError&) {
            break;
        }
        out.diag.residual = (f - c).norm() / c.norm();
        if (out.diag.residual < opts.tol) {
            out.diag.converged = true;
            break;
        }
        const CVec cand = (1.0 - a) * c + a * f;
        const double cand_ll = loglik(cand);
        if (cand_ll < ll - 1e-12 * std::abs(ll)) {
            a *= 0.5;
            if (a < kMixFloor) break;
            continue;
        }
        c = cand;
        ll = cand_ll;
        out.diag.loglik_trace.push_back(ll);
        a = std::min(opts.mixing, a * 1.5);
    }
    out.diag.log_likelihood = ll;

    const Vec lam = (protocol.X * c).cwiseAbs2();
    const double intensity_sum = lam.dot(protocol.t);
    out.diag.normalization_residual = std::abs(total_counts - intensity_sum) / total_counts;
    out.diag.lambda = intensity_sum;

    out.info = info_matrices(protocol, c);
    if (opts.compute_info) {
        const CompletenessReport rep = completeness_check(out.info.H, StateVector(c, false));
        out.diag.h_eigenvalues = rep.eigenvalues;
        if (!rep.complete) out.diag.completeness_warning = true;
    }
    out.state = gauge_fix(StateVector(c, false)).coeffs();
    return out;
}

} // namespace rootstat
