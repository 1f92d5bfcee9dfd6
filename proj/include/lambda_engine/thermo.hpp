#pragma once

#include <ostream>

#include "lambda_engine/density_state.hpp"
#include "lambda_engine/dynamics.hpp"
#include "lambda_engine/params.hpp"

namespace lambda_engine {

// Energy fluxes in hbar = 1 units (rad/us)^2; multiply by to_si_watts_factor()
// for SI watts. Sign convention: P_c > 0 absorbs from the control field,
// Qdot_h > 0 flows from the hot bath into the atom, Qdot_c > 0 flows from the
// atom into the cold bath, Qdot_out > 0 is emitted into the probe. The energy
// balance then reads Edot = (P_c - Qdot_out) + Qdot_h - Qdot_c.
struct ThermoFluxes {
    double p_c = 0.0;
    double qdot_c = 0.0;
    double qdot_out = 0.0;
    double qdot_h = 0.0;
    double edot_residual = 0.0;  // Tr(rho_dot H0); 0 at a (stroboscopic) steady state
    double efficiency = 0.0;

    // Steady-state identity residuals, relative to max(|P_c|, |Qdot_h|).
    double out_vs_hot_residual = 0.0;
    double pc_vs_cold_residual = 0.0;
};

// Instantaneous fluxes; t fixes the control-field modulation phase.
double control_power(const DensityState& s, const EngineParams& p, double t = 0.0);
double cold_flux(const DensityState& s, const EngineParams& p);
double output_power(const DensityState& s, const EngineParams& p);
double hot_flux(const DensityState& s, const EngineParams& p);

// Tr(rho_dot H0) from the equations of motion. check_consistency() also
// returns the flux-combination value; the two agree identically.
double first_law_residual(const DensityState& s, const EngineParams& p, double t = 0.0,
                          ProbeMode mode = ProbeMode::fixed_probe);

struct FirstLawCheck {
    double edot_direct = 0.0;       // Tr(rho_dot H0)
    double edot_from_fluxes = 0.0;  // (P_c - Qdot_out) + Qdot_h - Qdot_c
};
FirstLawCheck first_law_check(const DensityState& s, const EngineParams& p,
                              double t = 0.0, ProbeMode mode = ProbeMode::fixed_probe);

// e = Qdot_out / (Qdot_h + P_c). Throws on a vanishing denominator.
double efficiency(const ThermoFluxes& f);

// One-mirror-period averages over a converged orbit from
// stroboscopic_steady_state (single-sample orbits are evaluated pointwise).
ThermoFluxes period_averaged_fluxes(const Trajectory& orbit, const EngineParams& p);

// (rad/us)^2 -> watts.
double to_si_watts_factor();

void write_thermo_csv_header(std::ostream& os);
void write_thermo_csv_row(const ThermoFluxes& f, const EngineParams& p, std::ostream& os);

}  // namespace lambda_engine
