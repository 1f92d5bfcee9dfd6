#pragma once

#include <cstdint>
#include <vector>

#include "lambda_engine/density_state.hpp"
#include "lambda_engine/floquet_components.hpp"
#include "lambda_engine/params.hpp"

namespace lambda_engine {

enum class ProbeMode {
    fixed_probe,    // probe amplitude held constant in the state
    coupled_probe,  // d a/dt = -kappa/2 a + i g_pr rho_ge integrated alongside
};

struct IntegratorStats {
    std::uint64_t steps_accepted = 0;
    std::uint64_t steps_rejected = 0;
    std::uint64_t rhs_evaluations = 0;
    double max_error_estimate = 0.0;  // largest accepted scaled local error
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityState> states;
    IntegratorStats stats;

    // Set by stroboscopic_steady_state: mirror period spanned by the samples
    // (0 for the omega_m = 0 fallback), last stroboscopic delta, and how many
    // periods/chunks were integrated before convergence.
    double period = 0.0;
    double strobe_delta = 0.0;
    int periods_elapsed = 0;

    const DensityState& front() const { return states.front(); }
    const DensityState& back() const { return states.back(); }
};

// Time derivative of the state under the mirror-modulated Bloch equations.
// Population derivatives close under the trace: d(ee) = -(d(gg) + d(gpgp)).
DensityState bloch_rhs(const DensityState& s, double t, const EngineParams& p,
                       ProbeMode mode = ProbeMode::fixed_probe);

// Adaptive Dormand-Prince integration over [t0, t1] with n_samples+1 stored
// sample points (endpoints included). tol must lie in [1e-13, 1e-6].
Trajectory evolve(const DensityState& s0, double t0, double t1,
                  const EngineParams& p, double tol = 1e-10,
                  ProbeMode mode = ProbeMode::fixed_probe, int n_samples = 200);

struct SteadyStateOptions {
    double tol = 1e-10;          // integrator tolerance
    double strobe_tol = 1e-11;   // max-norm period-map contraction threshold
    double t_max = 0.0;          // 0: 200 / min nonzero relaxation rate
    int samples_per_period = 256;
    ProbeMode mode = ProbeMode::fixed_probe;
    DensityState const* initial = nullptr;  // default: maximally mixed
};

// Integrates until the state sampled at successive mirror periods stops
// moving, then returns the converged period densely sampled (endpoint
// duplicated at t0 + T). For omega_m = 0 the same contraction test runs on
// fixed-length chunks and a single-sample trajectory is returned.
Trajectory stroboscopic_steady_state(const EngineParams& p,
                                     const SteadyStateOptions& opts = {});

// Fourier amplitudes rho_{jk,l} = (1/T) integral rho_jk(t) e^{+i l w t} dt of
// a one-period orbit, via the periodic rectangle rule on the uniform samples.
// Requires at least 64 samples spanning exactly one period.
FloquetComponents extract_harmonics(const Trajectory& orbit, int l_max);

// Slowest nonzero relaxation rate of the parameter set (used for default
// steady-state horizons); throws DegenerateParameterError if all are zero.
double min_relaxation_rate(const EngineParams& p);

// Trajectory CSV: t, the nine components (Re/Im), Re/Im probe.
void write_trajectory_csv(const Trajectory& tr, std::ostream& os);

}  // namespace lambda_engine
