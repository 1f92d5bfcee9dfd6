#include "lambda_engine/params.hpp"

#include <cmath>

#include "lambda_engine/errors.hpp"

namespace lambda_engine {

namespace {
// CODATA 2018.
constexpr double kHbar = 1.054571817e-34;  // J s
constexpr double kBoltzmann = 1.380649e-23;  // J/K
}  // namespace

void EngineParams::validate() const {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw InvalidParameterError(msg);
    };
    require(gamma_eg >= 0.0, "gamma_eg must be >= 0");
    require(gamma_egp >= 0.0, "gamma_egp must be >= 0");
    require(omega_rabi >= 0.0, "omega_rabi must be >= 0");
    require(omega_m >= 0.0, "omega_m must be >= 0");
    require(eta >= 0.0, "eta must be >= 0");
    require(kappa >= 0.0, "kappa must be >= 0");
    require(g_pr >= 0.0, "g_pr must be >= 0");
    require(n_h >= 0.0, "n_h must be >= 0");
    require(n_c >= 0.0, "n_c must be >= 0");
    require(omega_egp > 0.0, "omega_egp must be > 0");
    require(omega_eg > omega_egp, "level ordering requires omega_eg > omega_egp");
    require(std::isfinite(probe_amplitude.real()) && std::isfinite(probe_amplitude.imag()),
            "probe_amplitude must be finite");
}

std::vector<std::string> EngineParams::warnings() const {
    std::vector<std::string> w;
    if (eta > 1.0)
        w.push_back("eta > 1: first-order mirror modulation assumes k_c z_m small");
    return w;
}

double bose_occupation(const ReservoirSpec& r) {
    if (r.temperature < 0.0)
        throw InvalidParameterError("reservoir temperature must be >= 0");
    if (!(r.transition_frequency > 0.0))
        throw InvalidParameterError("transition frequency must be > 0");
    if (r.temperature == 0.0) return 0.0;
    const double x = kHbar * r.transition_frequency / (kBoltzmann * r.temperature);
    // expm1 keeps precision for x << 1 (n >> 1).
    return 1.0 / std::expm1(x);
}

double occupation_to_temperature(double n, double omega) {
    if (!(n > 0.0)) throw InvalidParameterError("occupation must be > 0");
    if (!(omega > 0.0)) throw InvalidParameterError("transition frequency must be > 0");
    return kHbar * omega / (kBoltzmann * std::log1p(1.0 / n));
}

DephasingRates dephasing_rates(const EngineParams& p) {
    DephasingRates d;
    d.eg = (p.gamma_eg * (p.n_h + 1.0) + p.gamma_eg * p.n_h + p.gamma_egp * (p.n_c + 1.0)) / 2.0;
    d.egp = (p.gamma_egp * (p.n_c + 1.0) + p.gamma_egp * p.n_c + p.gamma_eg * (p.n_h + 1.0)) / 2.0;
    d.ggp = (p.gamma_eg * p.n_h + p.gamma_egp * p.n_c) / 2.0;
    return d;
}

Complex rabi_at(double t, const EngineParams& p) {
    const double phase = p.eta * std::cos(p.omega_m * t);
    if (p.modulation == ModulationModel::exact_exponential)
        return p.omega_rabi * std::exp(Complex(0.0, phase));
    return p.omega_rabi * Complex(1.0, phase);
}

}  // namespace lambda_engine
