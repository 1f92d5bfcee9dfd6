#pragma once

#include "lambda_engine/floquet_components.hpp"
#include "lambda_engine/params.hpp"

namespace lambda_engine {

enum class Branch { plus, minus };

// The closed-form coherence and gain carry an undetermined sign pair; both
// branches are always computed. The + branch is the plotting default.
struct GainResult {
    Complex plus{0.0, 0.0};
    Complex minus{0.0, 0.0};

    Complex value(Branch b) const { return b == Branch::plus ? plus : minus; }
    double rate(Branch b = Branch::plus) const { return value(b).real(); }
    double frequency_pull(Branch b = Branch::plus) const { return value(b).imag(); }
};

struct PopulationTriple {
    double gg = 0.0;
    double gpgp = 0.0;
    double ee = 0.0;
    double sum() const { return gg + gpgp + ee; }
};

// The closed coherence's numerator factor is typographically ambiguous;
// both groupings are available and compared against the oracle.
enum class NumeratorReading {
    as_printed,           // 1 + (eta/2) (rho_ee - rho_g'g')
    grouped_alternative,  // (1 + eta/2) (rho_ee - rho_g'g')
};

// Effective repumping rate out of |g'> combining the cold bath with the
// mirror-dressed control drive.
double x_factor(const EngineParams& p);

// Steady populations of the drive/bath rate balance; sums to 1 identically.
PopulationTriple populations_closed_form(const EngineParams& p);

// Steady probe-transition coherence (the amplitude-equation drive term),
// linear in g_pr * probe_amplitude.
Complex coherence_closed_form(const EngineParams& p, const PopulationTriple& pops,
                              Branch branch,
                              NumeratorReading reading = NumeratorReading::as_printed);

// Closed-form complex gain of d a/dt = G a, both sign branches.
GainResult gain(const EngineParams& p,
                NumeratorReading reading = NumeratorReading::as_printed);

struct HarmonicBalanceOptions {
    // Guard harmonics kept internally beyond l_max. -1 = adaptive: extend
    // until the returned components converge; 0 = literal truncation (all
    // couplings to |l| > l_max dropped), for truncation studies.
    int guard = -1;
    double residual_target = 1e-10;
    int max_internal_l = 96;
};

// Fourier-domain steady state of the mirror-modulated dynamics: couples
// harmonics l and l+-1 through the cos(omega_m t) sideband of the control
// field, replaces the redundant l = 0 population row with the trace
// constraint, and solves the block-tridiagonal complex system directly.
FloquetComponents harmonic_balance_solve(const EngineParams& p, int l_max,
                                         const HarmonicBalanceOptions& opts = {});

// Gain evaluated from any set of steady harmonics (harmonic balance or
// time-domain extraction): the secular growth rate of the probe amplitude.
GainResult gain_from_components(const FloquetComponents& fc, const EngineParams& p);

}  // namespace lambda_engine
