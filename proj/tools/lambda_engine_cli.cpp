// Command-line front end for the lambda-engine simulator: one-point reports,
// config-driven parameter sweeps, figure presets, thermodynamic fluxes, and
// cross-solver oracle checks.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lambda_engine/dynamics.hpp"
#include "lambda_engine/errors.hpp"
#include "lambda_engine/floquet.hpp"
#include "lambda_engine/sweep.hpp"
#include "lambda_engine/thermo.hpp"

using namespace lambda_engine;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitOracle = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'", 0, 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

SweepSpec spec_from_config_flag(const std::string& config_path) {
    if (config_path.empty()) return parse_sweep_config("");
    return parse_sweep_config(read_file(config_path));
}

std::string join_out(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

void apply_solver_flag(SweepSpec& spec, const std::string& solver) {
    if (solver.empty()) return;
    if (solver == "closed") spec.solver = SolverKind::closed_form;
    else if (solver == "hb") spec.solver = SolverKind::harmonic_balance;
    else if (solver == "ode") spec.solver = SolverKind::ode;
    else throw ConfigError("--solver must be closed|hb|ode", 0, 0);
    if (spec.quantity == SweepQuantity::thermo && spec.solver == SolverKind::closed_form)
        throw ConfigError("thermo output needs --solver hb or ode", 0, 0);
}

void apply_branch_flag(SweepSpec& spec, const std::string& branch) {
    if (branch.empty()) return;
    if (branch == "plus") spec.branch = BranchSel::plus;
    else if (branch == "minus") spec.branch = BranchSel::minus;
    else if (branch == "both") spec.branch = BranchSel::both;
    else throw ConfigError("--branch must be plus|minus|both", 0, 0);
}

void run_and_write(const SweepSpec& spec, int workers, const std::string& out_dir,
                   const std::string& stem) {
    const std::vector<RunRecord> records = run_sweep(spec, workers);

    int failures = 0;
    double wall = 0.0;
    for (const RunRecord& r : records) {
        if (!r.ok) ++failures;
        wall += r.wall_ms;
    }

    const std::string csv_name = spec.csv_path.empty() ? stem + ".csv" : spec.csv_path;
    const std::string svg_name = spec.svg_path.empty() ? stem + ".svg" : spec.svg_path;
    std::ostringstream csv, svg;
    emit_csv(records, spec, csv);
    emit_svg(records, spec, svg);
    write_file(join_out(out_dir, csv_name), csv.str());
    write_file(join_out(out_dir, svg_name), svg.str());

    std::fprintf(stderr, "%s: %zu points, %d failed, %.0f ms solver time -> %s, %s\n",
                 stem.c_str(), records.size(), failures, wall,
                 join_out(out_dir, csv_name).c_str(), join_out(out_dir, svg_name).c_str());
    if (failures == static_cast<int>(records.size()))
        throw ConvergenceError("every grid point failed", 0.0);
}

void print_params(const EngineParams& p) {
    std::printf("parameters (rates in MHz = rad/us):\n");
    std::printf("  gamma_eg = %g, gamma_egp = %g, omega_rabi = %g, omega_m = %g\n",
                p.gamma_eg, p.gamma_egp, p.omega_rabi, p.omega_m);
    std::printf("  eta = %g, kappa = %g, g_pr = %g, n_h = %g, n_c = %g\n", p.eta,
                p.kappa, p.g_pr, p.n_h, p.n_c);
    std::printf("  probe amplitude = %g%+gi, modulation = %s\n",
                p.probe_amplitude.real(), p.probe_amplitude.imag(),
                p.modulation == ModulationModel::linear_in_eta ? "linear" : "exact");
    for (const std::string& w : p.warnings())
        std::printf("  warning: %s\n", w.c_str());
}

int cmd_steady(const std::string& config_path, const std::string& solver, int l_max,
               double tol, const std::string& branch,
               const std::string& trajectory_path) {
    SweepSpec spec = spec_from_config_flag(config_path);
    apply_branch_flag(spec, branch);
    const EngineParams p = spec.base;
    p.validate();
    print_params(p);

    const bool all = solver.empty() || solver == "all";
    const Branch shown = spec.branch == BranchSel::minus ? Branch::minus : Branch::plus;

    if (all || solver == "closed") {
        const PopulationTriple pops = populations_closed_form(p);
        const GainResult g = gain(p);
        const GainResult g_alt = gain(p, NumeratorReading::grouped_alternative);
        const Complex coh = coherence_closed_form(p, pops, shown);
        std::printf("\nclosed form:\n");
        std::printf("  X = %.12g MHz\n", x_factor(p));
        std::printf("  populations: gg = %.12g, g'g' = %.12g, ee = %.12g\n", pops.gg,
                    pops.gpgp, pops.ee);
        std::printf("  coherence (%s branch) = %.12g%+.12gi\n",
                    shown == Branch::plus ? "+" : "-", coh.real(), coh.imag());
        std::printf("  gain+ = %.12g%+.12gi MHz\n", g.plus.real(), g.plus.imag());
        std::printf("  gain- = %.12g%+.12gi MHz\n", g.minus.real(), g.minus.imag());
        std::printf("  gain+ (grouped numerator reading) = %.12g%+.12gi MHz\n",
                    g_alt.plus.real(), g_alt.plus.imag());
    }

    if (all || solver == "hb") {
        const FloquetComponents fc = harmonic_balance_solve(p, l_max);
        const GainResult g = gain_from_components(fc, p);
        std::printf("\nharmonic balance (l_max = %d):\n", l_max);
        std::printf("  gain = %.12g%+.12gi MHz\n", g.plus.real(), g.plus.imag());
        for (int l = 0; l <= l_max; ++l)
            std::printf("  |harmonic %d| = %.3e\n", l, fc.harmonic_magnitude(l));
        std::printf("  solve residual = %.3e, truncation estimate = %.3e\n",
                    fc.solve_residual, fc.truncation_estimate);
    }

    if (all || solver == "ode" || !trajectory_path.empty()) {
        SteadyStateOptions opts;
        opts.tol = tol;
        const Trajectory orbit = stroboscopic_steady_state(p, opts);
        if (!trajectory_path.empty()) {
            std::ofstream out(trajectory_path, std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot write '" + trajectory_path + "'");
            write_trajectory_csv(orbit, out);
            std::fprintf(stderr, "steady-state orbit written to %s\n",
                         trajectory_path.c_str());
        }
        const int lm = orbit.period > 0.0 ? l_max : 0;
        const GainResult g = gain_from_components(extract_harmonics(orbit, lm), p);
        const ThermoFluxes f = period_averaged_fluxes(orbit, p);
        std::printf("\ntime-domain steady state (tol = %g):\n", tol);
        std::printf("  converged after %d periods, stroboscopic delta = %.3e\n",
                    orbit.periods_elapsed, orbit.strobe_delta);
        std::printf("  gain = %.12g%+.12gi MHz\n", g.plus.real(), g.plus.imag());
        std::printf("  P_c = %.6e, Qdot_c = %.6e, Qdot_out = %.6e, Qdot_h = %.6e\n",
                    f.p_c, f.qdot_c, f.qdot_out, f.qdot_h);
        const double scale = std::max(std::abs(f.p_c), std::abs(f.qdot_h));
        std::printf("  identities: |Qout-Qh| = %.2e rel, |Pc-Qc| = %.2e rel, "
                    "|Edot| = %.2e rel\n",
                    f.out_vs_hot_residual, f.pc_vs_cold_residual,
                    scale > 0 ? std::abs(f.edot_residual) / scale : 0.0);
        std::printf("  efficiency = %.6e\n", f.efficiency);
        std::printf("  (SI scale: 1 internal power unit = %.6e W)\n",
                    to_si_watts_factor());
    }
    return kExitOk;
}

int cmd_thermo(const std::string& config_path, const std::string& csv_path, double tol) {
    SweepSpec spec = spec_from_config_flag(config_path);
    const EngineParams p = spec.base;
    SteadyStateOptions opts;
    opts.tol = tol;
    const Trajectory orbit = stroboscopic_steady_state(p, opts);
    const ThermoFluxes f = period_averaged_fluxes(orbit, p);

    std::ostringstream os;
    write_thermo_csv_header(os);
    write_thermo_csv_row(f, p, os);
    if (csv_path.empty())
        std::fputs(os.str().c_str(), stdout);
    else
        write_file(csv_path, os.str());
    std::fprintf(stderr,
                 "identities: |Qout-Qh| = %.2e rel, |Pc-Qc| = %.2e rel, "
                 "efficiency = %.6e\n",
                 f.out_vs_hot_residual, f.pc_vs_cold_residual, f.efficiency);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lambda-engine: three-level quantum heat engine with a vibrating "
                 "nanomirror"};
    app.require_subcommand(1);

    std::string config_path, out_dir, solver, branch, preset, csv_path;
    int workers = default_worker_count();
    int l_max = 3;
    double tol = 1e-10;
    int points = 0;
    double from = 0.0, to = 0.0;
    bool have_from = false, have_to = false;
    bool quick = false;

    auto* steady = app.add_subcommand("steady", "one-point report for all solvers");
    steady->add_option("--config", config_path, "config file ([engine] section)");
    steady->add_option("--solver", solver, "closed|hb|ode|all (default all)");
    steady->add_option("--lmax", l_max, "harmonic truncation order");
    steady->add_option("--tol", tol, "integrator tolerance");
    steady->add_option("--branch", branch, "plus|minus|both");
    std::string trajectory_path;
    steady->add_option("--trajectory", trajectory_path,
                       "write the converged one-period orbit as CSV");

    auto* sweep = app.add_subcommand("sweep", "config-driven parameter sweep");
    sweep->add_option("--config", config_path, "sweep config file")->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--workers", workers, "worker threads");
    sweep->add_option("--branch", branch, "plus|minus|both");

    auto* figure = app.add_subcommand("figure", "run a named figure preset");
    figure->add_option("preset", preset, "figure2a|figure2b|figure3a|figure3b|figure4")
        ->required();
    figure->add_option("--out", out_dir, "output directory");
    figure->add_option("--workers", workers, "worker threads");
    figure->add_option("--solver", solver, "override the preset solver");
    figure->add_option("--lmax", l_max, "harmonic truncation order");
    figure->add_option("--tol", tol, "integrator tolerance");
    figure->add_option("--branch", branch, "plus|minus|both");
    auto* opt_points = figure->add_option("--points", points, "grid point count");
    auto* opt_from = figure->add_option("--from", from, "grid start");
    auto* opt_to = figure->add_option("--to", to, "grid end");

    auto* oracle = app.add_subcommand("oracle-check", "cross-solver validation report");
    oracle->add_option("--workers", workers, "worker threads");
    oracle->add_flag("--quick", quick, "thin the comparison grids");

    auto* thermo = app.add_subcommand("thermo", "thermodynamic fluxes at one point");
    thermo->add_option("--config", config_path, "config file ([engine] section)");
    thermo->add_option("--csv", csv_path, "write the CSV row here instead of stdout");
    thermo->add_option("--tol", tol, "integrator tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (steady->parsed())
            return cmd_steady(config_path, solver, l_max, tol, branch, trajectory_path);

        if (sweep->parsed()) {
            SweepSpec spec = spec_from_config_flag(config_path);
            apply_branch_flag(spec, branch);
            run_and_write(spec, workers, out_dir, "sweep");
            return kExitOk;
        }

        if (figure->parsed()) {
            SweepSpec spec = figure_preset(preset);
            apply_solver_flag(spec, solver);
            apply_branch_flag(spec, branch);
            if (figure->count("--lmax")) spec.l_max = l_max;
            if (figure->count("--tol")) spec.tol = tol;
            have_from = opt_from->count() > 0;
            have_to = opt_to->count() > 0;
            if (have_from || have_to || opt_points->count()) {
                const double lo = have_from ? from : spec.grid.front();
                const double hi = have_to ? to : spec.grid.back();
                const int n =
                    opt_points->count() ? points : static_cast<int>(spec.grid.size());
                if (n < 1 || !(hi != lo) || !std::isfinite(lo) || !std::isfinite(hi))
                    throw ConfigError("invalid grid override", 0, 0);
                spec.grid.clear();
                for (int k = 0; k < n; ++k)
                    spec.grid.push_back(n == 1 ? lo : lo + (hi - lo) * k / (n - 1));
            }
            run_and_write(spec, workers, out_dir, preset);
            return kExitOk;
        }

        if (oracle->parsed()) {
            OracleCheckOptions opts;
            opts.quick = quick;
            opts.workers = workers;
            const OracleCheckReport rep = oracle_check(opts);
            std::fputs(rep.text().c_str(), stdout);
            return rep.pass ? kExitOk : kExitOracle;
        }

        if (thermo->parsed()) return cmd_thermo(config_path, csv_path, tol);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const InvalidParameterError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    }
    return kExitOk;
}
