#include "lambda_engine/thermo.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "lambda_engine/errors.hpp"

namespace lambda_engine {

double control_power(const DensityState& s, const EngineParams& p, double t) {
    const Complex omega = rabi_at(t, p);
    // i w_eg' (Omega rho_eg' - Omega* rho_g'e); the bracket is exactly
    // imaginary for a Hermitian state, so the power is real by construction.
    return 2.0 * p.omega_egp * std::imag(std::conj(omega) * s.gpe);
}

double cold_flux(const DensityState& s, const EngineParams& p) {
    return p.omega_egp * p.gamma_egp * ((p.n_c + 1.0) * s.ee - p.n_c * s.gpgp);
}

double output_power(const DensityState& s, const EngineParams& p) {
    // i w_eg g (rho_ge a* - rho_eg a) = -2 w_eg g Im(a* rho_ge)
    return -2.0 * p.omega_eg * p.g_pr * std::imag(std::conj(s.probe) * s.ge);
}

double hot_flux(const DensityState& s, const EngineParams& p) {
    return p.omega_eg * p.gamma_eg * (p.n_h * s.gg - (p.n_h + 1.0) * s.ee);
}

FirstLawCheck first_law_check(const DensityState& s, const EngineParams& p, double t,
                              ProbeMode mode) {
    const DensityState d = bloch_rhs(s, t, p, mode);
    // H0 gauge: E_g = 0, E_e = w_eg, E_g' = w_eg - w_eg'.
    FirstLawCheck c;
    c.edot_direct = p.omega_eg * d.ee + (p.omega_eg - p.omega_egp) * d.gpgp;
    c.edot_from_fluxes = (control_power(s, p, t) - output_power(s, p)) +
                         hot_flux(s, p) - cold_flux(s, p);
    return c;
}

double first_law_residual(const DensityState& s, const EngineParams& p, double t,
                          ProbeMode mode) {
    return first_law_check(s, p, t, mode).edot_direct;
}

double efficiency(const ThermoFluxes& f) {
    const double den = f.qdot_h + f.p_c;
    if (den == 0.0)
        throw SingularParameterError("efficiency undefined: Qdot_h + P_c = 0");
    return f.qdot_out / den;
}

ThermoFluxes period_averaged_fluxes(const Trajectory& orbit, const EngineParams& p) {
    if (orbit.states.empty()) throw InvalidParameterError("empty orbit");
    // Uniform samples over one period with the endpoint duplicated: the
    // periodic rectangle rule over the first n samples is spectrally exact.
    const size_t n = orbit.states.size() > 1 ? orbit.states.size() - 1 : 1;

    ThermoFluxes f;
    double edot = 0.0;
    for (size_t k = 0; k < n; ++k) {
        const DensityState& s = orbit.states[k];
        const double t = orbit.times[k];
        f.p_c += control_power(s, p, t);
        f.qdot_c += cold_flux(s, p);
        f.qdot_out += output_power(s, p);
        f.qdot_h += hot_flux(s, p);
        edot += first_law_check(s, p, t).edot_direct;
    }
    const double inv = 1.0 / static_cast<double>(n);
    f.p_c *= inv;
    f.qdot_c *= inv;
    f.qdot_out *= inv;
    f.qdot_h *= inv;
    f.edot_residual = edot * inv;

    const double scale = std::max(std::abs(f.p_c), std::abs(f.qdot_h));
    if (scale > 0.0) {
        f.out_vs_hot_residual = std::abs(f.qdot_out - f.qdot_h) / scale;
        f.pc_vs_cold_residual = std::abs(f.p_c - f.qdot_c) / scale;
    }
    f.efficiency = (f.qdot_h + f.p_c == 0.0) ? std::numeric_limits<double>::quiet_NaN()
                                             : efficiency(f);
    return f;
}

double to_si_watts_factor() {
    // hbar * (1e6)^2: internal powers are (rad/us)^2 with hbar = 1.
    return 1.054571817e-34 * 1e12;
}

void write_thermo_csv_header(std::ostream& os) {
    os << "n_h,n_c,eta,omega_rabi,omega_m,kappa,P_c,Qdot_c,Qdot_out,Qdot_h,"
          "residual,efficiency\n";
}

void write_thermo_csv_row(const ThermoFluxes& f, const EngineParams& p,
                          std::ostream& os) {
    char buf[400];
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%.17g\n",
                  p.n_h, p.n_c, p.eta, p.omega_rabi, p.omega_m, p.kappa, f.p_c,
                  f.qdot_c, f.qdot_out, f.qdot_h, f.edot_residual, f.efficiency);
    os << buf;
}

}  // namespace lambda_engine
