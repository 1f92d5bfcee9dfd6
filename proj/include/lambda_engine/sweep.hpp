#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lambda_engine/config.hpp"
#include "lambda_engine/floquet.hpp"
#include "lambda_engine/params.hpp"
#include "lambda_engine/thermo.hpp"

namespace lambda_engine {

enum class SolverKind { closed_form, harmonic_balance, ode };
enum class BranchSel { plus, minus, both };
enum class SweepQuantity { gain, thermo };

const char* solver_name(SolverKind s);

// Numeric EngineParams fields addressable by name from configs and sweeps.
std::vector<std::string> sweepable_parameter_names();
bool set_engine_param(EngineParams& p, const std::string& name, double value);
std::optional<double> get_engine_param(const EngineParams& p, const std::string& name);

// One plotted curve: named parameter overrides applied on top of the base
// before the sweep runs. Families of curves come from family_parameter or,
// for paired presets, from explicit override lists.
struct CurveSpec {
    std::string label;
    std::vector<std::pair<std::string, double>> overrides;
    bool operator==(const CurveSpec&) const = default;
};

struct SweepSpec {
    EngineParams base;
    std::string parameter;      // swept field name
    std::vector<double> grid;   // non-empty, strictly monotone
    SolverKind solver = SolverKind::closed_form;
    BranchSel branch = BranchSel::both;
    SweepQuantity quantity = SweepQuantity::gain;
    int l_max = 3;
    double tol = 1e-10;
    std::string family_parameter;       // optional curve family
    std::vector<double> family_values;
    std::vector<CurveSpec> curves;      // expanded curve list (>= 1 when run)
    std::string csv_path;
    std::string svg_path;
    std::string title;
    std::string xlabel;
    std::string ylabel;

    bool operator==(const SweepSpec&) const = default;
};

// Validated spec from a config document; defaults follow the engine model.
SweepSpec parse_sweep_config(const std::string& text);
// Textual form that parse_sweep_config maps back to an equal spec.
std::string emit_sweep_config(const SweepSpec& spec);

struct RunRecord {
    EngineParams params;  // full echo: base with family/grid values applied
    std::string curve_label;
    double swept_value = 0.0;
    std::string solver_id;
    SweepQuantity quantity = SweepQuantity::gain;
    bool ok = true;
    std::string error;
    GainResult gain;
    ThermoFluxes fluxes;
    // Convergence diagnostics (ode solver) and wall time; diagnostics only,
    // never serialized, so identical sweeps produce identical files.
    double strobe_delta = 0.0;
    int periods = 0;
    double wall_ms = 0.0;
};

// Evaluates every (family value, grid value) pair; per-point failures are
// recorded in the row. Output order is the grid order for any worker count.
std::vector<RunRecord> run_sweep(const SweepSpec& spec, int workers = 1);

void emit_csv(const std::vector<RunRecord>& records, const SweepSpec& spec,
              std::ostream& os);
void emit_svg(const std::vector<RunRecord>& records, const SweepSpec& spec,
              std::ostream& os);

// Figure presets named after the parameter-sweep plots: figure2a, figure2b,
// figure3a, figure3b, figure4. Throws InvalidParameterError for other names.
SweepSpec figure_preset(const std::string& name);
std::vector<std::string> figure_preset_names();

struct OracleCheckOptions {
    double component_tol = 1e-6;   // harmonic balance vs time domain
    double population_tol = 0.05;  // closed-form populations vs static ODE
    double identity_tol = 1e-8;    // first-law identities
    bool quick = false;            // thin the grids
    int workers = 1;
};

struct OracleCheckRow {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;  // 0: informational row
    bool pass = true;
    std::string note;
};

struct OracleCheckReport {
    std::vector<OracleCheckRow> rows;
    bool pass = true;
    std::string text() const;
};

// Cross-validation harness: harmonic balance vs the time-domain oracle,
// closed-form populations vs the static steady state, first-law identities
// over the efficiency-figure grid, and closed-vs-exact gain notes.
OracleCheckReport oracle_check(const OracleCheckOptions& opts = {});

int default_worker_count();  // LAMBDA_ENGINE_WORKERS or 1

}  // namespace lambda_engine
