#include "rootstat/cli_app.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rootstat/dynamics.hpp"
#include "rootstat/errors.hpp"
#include "rootstat/sampling.hpp"
#include "rootstat/solve.hpp"
#include "rootstat/stats.hpp"

namespace rootstat {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNonConvergence = 2;
constexpr int kExitIncomplete = 3;
constexpr int kExitIo = 4;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json load_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("cannot parse " + path.string() + ": " + e.what());
    }
    return j;
}

void save_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

Vec load_samples_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "value") {
        throw IoError(path.string() + ": expected header 'value'");
    }
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            values.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw IoError(path.string() + ": bad row '" + line + "'");
        }
    }
    Vec out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out(i) = values[i];
    return out;
}

void save_samples_csv(const fs::path& path, const Vec& values) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "value\n" << std::setprecision(17);
    for (int i = 0; i < values.size(); ++i) out << values(i) << "\n";
}

CVec state_from_json(const json& j) {
    if (!j.contains("c_re") || !j.contains("c_im")) {
        throw IoError("state JSON needs 'c_re' and 'c_im' arrays");
    }
    const auto re = j.at("c_re").get<std::vector<double>>();
    const auto im = j.at("c_im").get<std::vector<double>>();
    if (re.size() != im.size() || re.empty()) {
        throw IoError("state arrays must be nonempty and equal length");
    }
    CVec c(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) c(i) = Complex(re[i], im[i]);
    return c;
}

json state_to_json(const CVec& c) {
    std::vector<double> re(c.size()), im(c.size());
    for (int i = 0; i < c.size(); ++i) {
        re[i] = c(i).real();
        im[i] = c(i).imag();
    }
    return json{{"c_re", re}, {"c_im", im}};
}

MeasurementProtocol protocol_from_json(const json& j, bool require_counts) {
    if (!j.contains("s") || !j.contains("processes")) {
        throw IoError("protocol JSON needs 's' and 'processes'");
    }
    const int s = j.at("s").get<int>();
    const auto& procs = j.at("processes");
    MeasurementProtocol p;
    p.X.resize(procs.size(), s);
    p.t.resize(procs.size());
    p.k = Eigen::VectorXi::Zero(procs.size());
    int row = 0;
    for (const auto& proc : procs) {
        const auto re = proc.at("x_re").get<std::vector<double>>();
        const auto im = proc.at("x_im").get<std::vector<double>>();
        if (static_cast<int>(re.size()) != s || static_cast<int>(im.size()) != s) {
            throw IoError("process row length must equal s");
        }
        for (int col = 0; col < s; ++col) p.X(row, col) = Complex(re[col], im[col]);
        p.t(row) = proc.at("t").get<double>();
        if (proc.contains("k") && !proc.at("k").is_null()) {
            p.k(row) = proc.at("k").get<int>();
        } else if (require_counts) {
            throw IoError("protocol is missing counts 'k'; simulate first");
        }
        ++row;
    }
    return p;
}

json protocol_to_json(const MeasurementProtocol& p, bool with_counts) {
    json procs = json::array();
    for (int row = 0; row < p.processes(); ++row) {
        std::vector<double> re(p.dim()), im(p.dim());
        for (int col = 0; col < p.dim(); ++col) {
            re[col] = p.X(row, col).real();
            im[col] = p.X(row, col).imag();
        }
        json proc{{"x_re", re}, {"x_im", im}, {"t", p.t(row)}};
        proc["k"] = with_counts ? json(p.k(row)) : json(nullptr);
        procs.push_back(proc);
    }
    return json{{"s", p.dim()}, {"processes", procs}};
}

struct RegisterFile {
    RegisterCounts counts;
    CMat u;
};

RegisterFile register_from_json(const json& j) {
    if (!j.contains("s") || !j.contains("n_counts") || !j.contains("m_counts")) {
        throw IoError("counts JSON needs 's', 'n_counts', 'm_counts'");
    }
    const int s = j.at("s").get<int>();
    const auto nc = j.at("n_counts").get<std::vector<int>>();
    const auto mc = j.at("m_counts").get<std::vector<int>>();
    if (static_cast<int>(nc.size()) != s || static_cast<int>(mc.size()) != s) {
        throw IoError("count arrays must have length s");
    }
    RegisterFile file;
    file.counts.n_counts.resize(s);
    file.counts.m_counts.resize(s);
    for (int i = 0; i < s; ++i) {
        file.counts.n_counts(i) = nc[i];
        file.counts.m_counts(i) = mc[i];
    }
    if (j.contains("u_re") && j.contains("u_im")) {
        const auto ure = j.at("u_re").get<std::vector<std::vector<double>>>();
        const auto uim = j.at("u_im").get<std::vector<std::vector<double>>>();
        file.u.resize(s, s);
        for (int r = 0; r < s; ++r) {
            for (int col = 0; col < s; ++col) file.u(r, col) = Complex(ure[r][col], uim[r][col]);
        }
    } else {
        file.u = dft_unitary(s);
    }
    return file;
}

json register_to_json(const RegisterCounts& counts) {
    const int s = static_cast<int>(counts.n_counts.size());
    std::vector<int> nc(s), mc(s);
    for (int i = 0; i < s; ++i) {
        nc[i] = counts.n_counts(i);
        mc[i] = counts.m_counts(i);
    }
    return json{{"s", s}, {"n_counts", nc}, {"m_counts", mc}, {"u", "dft"}};
}

struct CommonEstimateFlags {
    std::string mode;
    std::string samples_x, samples_p, protocol_path, counts_path, truth_path;
    std::string out_path = "report.json";
    int basis_size = 0;
    double scale = 1.0;
    double alpha = 0.05;
    bool real_chart = false;
    SolverOptions opts;
};

Seed seed_or_env(std::optional<Seed> flag_seed) {
    if (flag_seed) return *flag_seed;
    if (const char* env = std::getenv("ROOTSTAT_SEED")) {
        return static_cast<Seed>(std::stoull(env));
    }
    return 0;
}

json diagnostics_to_json(const SolveDiagnostics& diag) {
    json j{{"converged", diag.converged},
           {"iterations", diag.iterations},
           {"residual", diag.residual},
           {"loglik", diag.log_likelihood},
           {"floored_densities", diag.floored_densities},
           {"completeness_warning", diag.completeness_warning}};
    if (diag.h_eigenvalues.size() > 0) {
        std::vector<double> ev(diag.h_eigenvalues.data(),
                               diag.h_eigenvalues.data() + diag.h_eigenvalues.size());
        j["H_eigenvalues"] = ev;
    }
    return j;
}

void attach_completeness(json& report, const Vec& h_eigenvalues) {
    if (h_eigenvalues.size() == 0) return;
    const double hmax = h_eigenvalues.cwiseAbs().maxCoeff();
    const double floor = 1e-8 * (hmax > 0 ? hmax : 1.0);
    int zeros = 0;
    bool negative = false;
    for (int i = 0; i < h_eigenvalues.size(); ++i) {
        if (std::abs(h_eigenvalues(i)) < floor) ++zeros;
        if (h_eigenvalues(i) < -floor) negative = true;
    }
    report["completeness"] = (zeros == 1 && !negative) ? "complete" : "incomplete";
    if (zeros == 1 && !negative) {
        std::vector<double> vars;
        for (int i = 0; i < h_eigenvalues.size(); ++i) {
            if (std::abs(h_eigenvalues(i)) >= floor) vars.push_back(1.0 / (2.0 * h_eigenvalues(i)));
        }
        std::sort(vars.begin(), vars.end(), std::greater<>());
        report["principal_variances"] = vars;
    }
}

void attach_fidelity(json& report, const Mat& h, const CVec& truth, const CVec& estimate,
                     double n_total, int s) {
    const StateVector t_state(truth, false);
    const StateVector e_state(estimate, false);
    const StateVector aligned = align_phase(t_state, e_state);
    const CVec tn = truth / truth.norm();
    const CVec en = aligned.coeffs() / aligned.coeffs().norm();
    const double fid = std::norm(tn.dot(en));

    json f{{"fidelity", fid}, {"dof", 2 * s - 1},
           {"expected_mean_loss", mean_information_loss(s, n_total)}};
    if (h.size() > 0) {
        const Vec xi_true = to_real_doubled(StateVector(truth, false));
        const Vec xi_hat = to_real_doubled(StateVector(aligned.coeffs(), false));
        try {
            const FidelityReport rep = informational_fidelity(h, xi_true, xi_hat);
            f["informational_fidelity"] = rep.f_h;
            f["informational_loss"] = rep.loss;
            f["qform_state"] = rep.qform_state;
        } catch (const std::exception& e) {
            f["informational_fidelity_error"] = e.what();
        }
    }
    report["fidelity"] = f;
}

int cmd_simulate(const std::string& mode, const std::string& truth_path,
                 const std::string& protocol_path, int n, int m, double scale,
                 Seed seed, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    json manifest{{"command", "simulate"}, {"mode", mode}, {"seed", seed}};

    const json truth_json = load_json(truth_path);
    const CVec truth = state_from_json(truth_json);
    manifest["truth"] = truth_path;

    if (mode == "continuous") {
        const StateVector state = StateVector::unit(truth);
        const HermiteBasis basis(state.size(), scale);
        const Vec xs = sample_coordinate(state, basis, n, trial_seed(seed, 0));
        const Vec ps = sample_momentum(state, basis, m, trial_seed(seed, 1));
        save_samples_csv(dir / "xs.csv", xs);
        save_samples_csv(dir / "ps.csv", ps);
        manifest["samples_x"] = n;
        manifest["samples_p"] = m;
        manifest["scale"] = scale;
        manifest["outputs"] = {"xs.csv", "ps.csv"};
    } else if (mode == "register") {
        const StateVector state = StateVector::unit(truth);
        const CMat u = dft_unitary(state.size());
        const RegisterCounts counts = sample_register(state, u, n, m, seed);
        save_json(dir / "counts.json", register_to_json(counts));
        manifest["samples_x"] = n;
        manifest["samples_p"] = m;
        manifest["outputs"] = {"counts.json"};
    } else if (mode == "poisson") {
        MeasurementProtocol p = protocol_from_json(load_json(protocol_path), false);
        if (p.dim() != truth.size()) throw IoError("truth dimension does not match protocol");
        p = simulate_poisson(p.X, truth, p.t, seed);
        save_json(dir / "protocol.json", protocol_to_json(p, true));
        manifest["protocol"] = protocol_path;
        manifest["outputs"] = {"protocol.json"};
    } else {
        std::cerr << "unknown simulate mode: " << mode << "\n";
        return kExitUsage;
    }
    save_json(dir / "manifest.json", manifest);
    return kExitOk;
}

int cmd_estimate(const CommonEstimateFlags& flags) {
    json report{{"mode", flags.mode}, {"alpha", flags.alpha}};
    std::optional<CVec> truth;
    if (!flags.truth_path.empty()) truth = state_from_json(load_json(flags.truth_path));

    int exit_code = kExitOk;
    if (flags.mode == "continuous") {
        SampleSet samples;
        samples.xs = flags.samples_x.empty() ? Vec(0) : load_samples_csv(flags.samples_x);
        samples.ps = flags.samples_p.empty() ? Vec(0) : load_samples_csv(flags.samples_p);
        const int s = flags.basis_size;
        if (s < 1) {
            std::cerr << "--basis-size is required for continuous estimation\n";
            return kExitUsage;
        }
        const HermiteBasis basis(s, flags.scale);
        SolverOptions opts = flags.opts;
        opts.real_chart = flags.real_chart;
        const ContinuousSolution sol = solve_continuous(samples, basis, s, opts);
        const double total = samples.n() + samples.m();
        report.update(diagnostics_to_json(sol.diag));
        report.update(state_to_json(sol.state.coeffs()));
        report["normalized"] = true;
        report["lambda"] = sol.diag.lambda;
        report["lambda_check"] = std::abs(sol.diag.lambda / total - 1.0);
        attach_completeness(report, sol.diag.h_eigenvalues);
        const ConfidenceCone cone = confidence_cone(sol.state, total, flags.alpha);
        report["cone_half_angle_rad"] = cone.half_angle;
        if (truth) {
            Mat h;  // effective spectrum is in the diagnostics; fidelity uses the plain overlap
            attach_fidelity(report, h, *truth, sol.state.coeffs(), total, s);
        }
        if (!sol.diag.converged) exit_code = kExitNonConvergence;
    } else if (flags.mode == "register") {
        const RegisterFile file = register_from_json(load_json(flags.counts_path));
        const ContinuousSolution sol = solve_register(file.counts, file.u, flags.opts);
        const double total = double(file.counts.n() + file.counts.m());
        report.update(diagnostics_to_json(sol.diag));
        report.update(state_to_json(sol.state.coeffs()));
        report["normalized"] = true;
        report["lambda"] = sol.diag.lambda;
        report["lambda_check"] = std::abs(sol.diag.lambda / total - 1.0);
        attach_completeness(report, sol.diag.h_eigenvalues);
        const ConfidenceCone cone = confidence_cone(sol.state, total, flags.alpha);
        report["cone_half_angle_rad"] = cone.half_angle;
        if (truth) {
            Mat h;
            attach_fidelity(report, h, *truth, sol.state.coeffs(), total,
                            static_cast<int>(file.counts.n_counts.size()));
        }
        if (!sol.diag.converged) exit_code = kExitNonConvergence;
    } else if (flags.mode == "poisson") {
        const MeasurementProtocol protocol =
            protocol_from_json(load_json(flags.protocol_path), true);
        const PoissonSolution sol = solve_poisson(protocol, flags.opts);
        const double total = protocol.k.cast<double>().sum();
        report.update(diagnostics_to_json(sol.diag));
        report.update(state_to_json(sol.state));
        report["normalized"] = false;
        report["lambda"] = sol.diag.lambda;
        report["lambda_check"] = sol.diag.normalization_residual;
        attach_completeness(report, sol.diag.h_eigenvalues);
        if (sol.state.norm() > 0) {
            const ConfidenceCone cone =
                confidence_cone(StateVector::unit(sol.state), total, flags.alpha);
            report["cone_half_angle_rad"] = cone.half_angle;
        }
        if (truth) {
            attach_fidelity(report, sol.info.H, *truth, sol.state, total, protocol.dim());
        }
        if (!sol.diag.converged) exit_code = kExitNonConvergence;
    } else {
        std::cerr << "unknown estimate mode: " << flags.mode << "\n";
        return kExitUsage;
    }
    save_json(flags.out_path, report);
    if (exit_code == kExitNonConvergence) {
        std::cerr << "solver did not converge; diagnostics written to " << flags.out_path << "\n";
    }
    return exit_code;
}

int cmd_fig1(int n, double p1) {
    const BinomialApproxReport rep = binomial_approx_report(n, p1);
    std::cout << std::setprecision(12);
    std::cout << "k,exact,root_approx,normal_approx\n";
    for (const auto& row : rep.table) {
        std::cout << int(row[0]) << "," << row[1] << "," << row[2] << "," << row[3] << "\n";
    }
    std::cout << "mae_root " << rep.mae_root << "\n";
    std::cout << "mae_normal " << rep.mae_ml << "\n";
    std::cout << "ratio " << rep.ratio << "\n";
    std::cout << "cell_ratio " << rep.cell_ratio << "\n";
    std::cout << "cdf_ratio " << rep.cdf_ratio << "\n";
    return kExitOk;
}

std::function<double(double)> table_potential(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "x,u") {
        throw IoError(path.string() + ": expected header 'x,u'");
    }
    auto xs = std::make_shared<std::vector<double>>();
    auto us = std::make_shared<std::vector<double>>();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw IoError(path.string() + ": bad row");
        xs->push_back(std::stod(line.substr(0, comma)));
        us->push_back(std::stod(line.substr(comma + 1)));
    }
    if (xs->size() < 2) throw IoError(path.string() + ": need at least two rows");
    return [xs, us](double x) {
        const auto& xv = *xs;
        const auto& uv = *us;
        if (x <= xv.front()) return uv.front();
        if (x >= xv.back()) return uv.back();
        const auto it = std::upper_bound(xv.begin(), xv.end(), x);
        const std::size_t hi = it - xv.begin();
        const double w = (x - xv[hi - 1]) / (xv[hi] - xv[hi - 1]);
        return (1.0 - w) * uv[hi - 1] + w * uv[hi];
    };
}

int cmd_dynamics(const std::string& potential_name, double mass, double hbar, double omega,
                 double grid_min, double grid_max, int grid_points, int levels, double dt,
                 const std::string& basis_kind, double basis_scale, double heisenberg_tol,
                 double ehrenfest_tol, bool strict) {
    Potential1D potential;
    if (potential_name == "harmonic") {
        potential = Potential1D::harmonic(omega, mass, hbar);
    } else if (potential_name == "quartic") {
        potential = Potential1D::quartic(mass, hbar);
    } else if (potential_name.rfind("table:", 0) == 0) {
        potential.u = table_potential(potential_name.substr(6));
        potential.mass = mass;
        potential.hbar = hbar;
    } else {
        std::cerr << "unknown potential: " << potential_name << "\n";
        return kExitUsage;
    }
    const Grid1D grid{grid_min, grid_max, grid_points};

    EigenSystem eig;
    if (basis_kind == "eigen") {
        eig = solve_eigensystem(potential, grid, levels);
    } else if (basis_kind == "hermite") {
        eig = hermite_eigensystem(grid, levels, basis_scale, mass, hbar);
    } else {
        std::cerr << "unknown basis kind: " << basis_kind << "\n";
        return kExitUsage;
    }

    if (eig.boundary_leak()) {
        std::cerr << "warning: eigenfunctions do not decay at the grid boundary "
                  << "(relative edge amplitude " << eig.boundary_amplitude << ")\n";
        if (strict) return kExitUsage;
    }

    const double heis = heisenberg_residual(eig, potential);

    // probe state: truncated coherent-like superposition over the levels
    MixedRootDensity density;
    density.frequencies = eig.frequencies;
    density.hbar = hbar;
    CVec c(levels);
    double fact = 1.0;
    for (int j = 0; j < levels; ++j) {
        if (j > 0) fact *= j;
        c(j) = Complex(1.0 / std::sqrt(fact), 0.0);
    }
    c.normalize();
    density.components = c;
    const int nt = 201;
    Vec t_grid(nt);
    for (int i = 0; i < nt; ++i) t_grid(i) = i * dt;
    const double ehren = ehrenfest_check(density, eig, potential, t_grid);

    std::cout << std::setprecision(12);
    std::cout << "heisenberg_residual " << heis << "\n";
    std::cout << "ehrenfest_residual " << ehren << "\n";
    std::cout << "frequencies";
    for (int j = 0; j < eig.frequencies.size(); ++j) std::cout << " " << eig.frequencies(j);
    std::cout << "\n";
    const bool ok = heis <= heisenberg_tol && ehren <= ehrenfest_tol;
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kExitOk : kExitNonConvergence;
}

} // namespace

int run_app(int argc, const char* const* argv) {
    CLI::App app{"root-approach statistical inverse problems: simulate, estimate, analyze"};
    app.set_config("--config");
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "generate synthetic measurement data");
    std::string sim_mode, sim_truth, sim_protocol, sim_out = ".";
    int sim_n = 1000, sim_m = 1000;
    double sim_scale = 1.0;
    std::optional<Seed> sim_seed;
    sim->add_option("--mode", sim_mode, "continuous|register|poisson")->required();
    sim->add_option("--truth", sim_truth, "state JSON file")->required();
    sim->add_option("--protocol", sim_protocol, "protocol JSON (poisson mode)");
    sim->add_option("--samples-x", sim_n, "coordinate/computational sample count");
    sim->add_option("--samples-p", sim_m, "momentum/conjugate sample count");
    sim->add_option("--scale", sim_scale, "basis length scale");
    sim->add_option("--seed", sim_seed, "RNG seed (or ROOTSTAT_SEED)");
    sim->add_option("--out", sim_out, "output directory");

    // estimate
    auto* est = app.add_subcommand("estimate", "maximum-likelihood state reconstruction");
    CommonEstimateFlags flags;
    std::optional<Seed> est_seed;  // accepted for config symmetry; estimation is deterministic
    est->add_option("--mode", flags.mode, "continuous|register|poisson")->required();
    est->add_option("--samples-x", flags.samples_x, "coordinate samples CSV");
    est->add_option("--samples-p", flags.samples_p, "momentum samples CSV");
    est->add_option("--counts", flags.counts_path, "register counts JSON");
    est->add_option("--protocol", flags.protocol_path, "protocol JSON with counts");
    est->add_option("--truth", flags.truth_path, "truth state JSON for fidelity");
    est->add_option("--basis-size", flags.basis_size, "number of basis functions");
    est->add_option("--scale", flags.scale, "basis length scale");
    est->add_option("--alpha", flags.alpha, "confidence cone significance");
    est->add_flag("--real-chart", flags.real_chart, "restrict to real coefficients");
    est->add_option("--tol", flags.opts.tol, "fixed-point residual tolerance");
    est->add_option("--max-iter", flags.opts.max_iter, "iteration cap");
    est->add_option("--mixing", flags.opts.mixing, "under-relaxation weight");
    est->add_option("--seed", est_seed, "search seed for multistart solvers");
    est->add_option("--out", flags.out_path, "report JSON path");

    // fig1
    auto* fig = app.add_subcommand("fig1", "binomial approximation accuracy table");
    int fig_n = 100;
    double fig_p1 = 0.2;
    fig->add_option("--n", fig_n, "sample size");
    fig->add_option("--p1", fig_p1, "success probability");

    // dynamics
    auto* dyn = app.add_subcommand("dynamics", "verify the root-quantization condition");
    std::string dyn_potential = "harmonic", dyn_basis = "eigen";
    double dyn_mass = 1.0, dyn_hbar = 1.0, dyn_omega = 1.0;
    double dyn_min = -12.0, dyn_max = 12.0, dyn_dt = 1e-3, dyn_scale = 1.0;
    double dyn_heis_tol = 1e-4, dyn_ehren_tol = 1e-3;
    int dyn_points = 2048, dyn_levels = 20;
    bool dyn_strict = false;
    dyn->add_option("--potential", dyn_potential, "harmonic|quartic|table:<csv>");
    dyn->add_option("--mass", dyn_mass, "particle mass");
    dyn->add_option("--hbar", dyn_hbar, "reduced Planck constant");
    dyn->add_option("--omega", dyn_omega, "harmonic frequency");
    dyn->add_option("--grid-min", dyn_min, "grid lower edge");
    dyn->add_option("--grid-max", dyn_max, "grid upper edge");
    dyn->add_option("--grid-points", dyn_points, "grid size");
    dyn->add_option("--levels", dyn_levels, "number of eigenlevels");
    dyn->add_option("--dt", dyn_dt, "time step for the averaged-dynamics check");
    dyn->add_option("--basis", dyn_basis, "eigen|hermite (hermite = mismatch control)");
    dyn->add_option("--basis-scale", dyn_scale, "hermite basis scale");
    dyn->add_option("--heisenberg-tol", dyn_heis_tol, "pass threshold");
    dyn->add_option("--ehrenfest-tol", dyn_ehren_tol, "pass threshold");
    dyn->add_flag("--strict", dyn_strict, "boundary-leak warnings become errors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sim->parsed()) {
            return cmd_simulate(sim_mode, sim_truth, sim_protocol, sim_n, sim_m, sim_scale,
                                seed_or_env(sim_seed), sim_out);
        }
        if (est->parsed()) {
            if (est_seed) flags.opts.search_seed = *est_seed;
            return cmd_estimate(flags);
        }
        if (fig->parsed()) return cmd_fig1(fig_n, fig_p1);
        if (dyn->parsed()) {
            return cmd_dynamics(dyn_potential, dyn_mass, dyn_hbar, dyn_omega, dyn_min, dyn_max,
                                dyn_points, dyn_levels, dyn_dt, dyn_basis, dyn_scale,
                                dyn_heis_tol, dyn_ehren_tol, dyn_strict);
        }
    } catch (const IncompleteProtocolError& e) {
        std::cerr << "protocol incomplete: " << e.what() << "\n";
        return kExitIncomplete;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace rootstat
