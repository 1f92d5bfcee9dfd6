#pragma once

#include <complex>
#include <string>
#include <vector>

namespace lambda_engine {

using Complex = std::complex<double>;

// Unit convention: every rate-like quantity (Gamma, Omega, kappa, omega_m,
// dephasings, gain) is an angular rate in rad/us, written "MHz" throughout;
// time is in us. The optical transition frequencies omega_eg/omega_egp use
// the same unit and enter only as prefactors of the energy fluxes.
// SI units appear only in ReservoirSpec (kelvin, rad/s).

enum class ModulationModel {
    linear_in_eta,      // Omega_c (1 + i eta cos(omega_m t))
    exact_exponential,  // Omega_c exp(i eta cos(omega_m t)), for convergence studies
};

struct EngineParams {
    double gamma_eg = 5.7;    // spontaneous decay e->g (hot transition)
    double gamma_egp = 5.7;   // spontaneous decay e->g' (cold transition)
    double omega_rabi = 10.0; // control Rabi frequency, real non-negative
    double omega_m = 2.0;     // nanomirror vibration frequency
    double eta = 0.1;         // mirror coupling strength k_c z0, dimensionless
    double kappa = 0.0;       // probe leakage rate
    double g_pr = 0.1;        // probe vacuum Rabi frequency
    double n_h = 0.05;        // hot reservoir occupation
    double n_c = 0.05;        // cold reservoir occupation

    // Rb D1 line; ground hyperfine splitting separates g and g'.
    double omega_eg = 2.0 * 3.14159265358979323846 * 377.107e6;
    double omega_egp = 2.0 * 3.14159265358979323846 * (377.107e6 - 6.835e3);

    Complex probe_amplitude{1.0, 0.0};  // semiclassical value of the probe mode
    ModulationModel modulation = ModulationModel::linear_in_eta;

    bool operator==(const EngineParams&) const = default;

    // Throws InvalidParameterError on a hard violation.
    void validate() const;

    // Soft diagnostics, e.g. eta > 1 leaves the regime the first-order
    // modulation model was derived for.
    std::vector<std::string> warnings() const;
};

struct ReservoirSpec {
    double temperature = 0.0;           // kelvin
    double transition_frequency = 0.0;  // rad/s
};

struct DephasingRates {
    double eg = 0.0;   // coherence g-e
    double egp = 0.0;  // coherence g'-e
    double ggp = 0.0;  // coherence g-g' (Raman)
};

// Planck occupation of a thermal reservoir at the transition frequency.
// Returns 0 in the T -> 0 limit; throws on T < 0 or omega <= 0.
double bose_occupation(const ReservoirSpec& r);

// Inverse of bose_occupation in T at fixed omega; throws on n <= 0.
double occupation_to_temperature(double n, double omega);

DephasingRates dephasing_rates(const EngineParams& p);

// Control-field Rabi frequency seen by the atoms after reflection off the
// vibrating mirror, z_m(t) = z0 cos(omega_m t).
Complex rabi_at(double t, const EngineParams& p);

}  // namespace lambda_engine
