#include "lambda_engine/floquet.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "lambda_engine/errors.hpp"

namespace lambda_engine {

namespace {

using Mat9 = Eigen::Matrix<Complex, 9, 9>;

// Generator of the nine-component linear dynamics for a fixed control value.
// omega_c and omega_c_conj are passed separately so the sideband matrices can
// be formed from the harmonic parts of Omega(t) and conj(Omega(t)).
Mat9 generator(const EngineParams& p, Complex omega_c, Complex omega_c_conj) {
    const DephasingRates d = dephasing_rates(p);
    const double rate_up_h = p.gamma_eg * p.n_h;
    const double rate_down_h = p.gamma_eg * (p.n_h + 1.0);
    const double rate_up_c = p.gamma_egp * p.n_c;
    const double rate_down_c = p.gamma_egp * (p.n_c + 1.0);
    const Complex i(0.0, 1.0);
    const Complex ga = p.g_pr * p.probe_amplitude;
    const Complex gac = p.g_pr * std::conj(p.probe_amplitude);

    Mat9 A = Mat9::Zero();
    A(kGg, kGg) = -rate_up_h;
    A(kGg, kEe) = rate_down_h;
    A(kGg, kGe) += i * gac;
    A(kGg, kEg) += -i * ga;

    A(kGpgp, kGpgp) = -rate_up_c;
    A(kGpgp, kEe) = rate_down_c;
    A(kGpgp, kEgp) += -i * omega_c;
    A(kGpgp, kGpe) += i * omega_c_conj;

    A(kEe, kGg) = rate_up_h;
    A(kEe, kGpgp) = rate_up_c;
    A(kEe, kEe) = -(rate_down_h + rate_down_c);
    A(kEe, kEgp) += i * omega_c;
    A(kEe, kGpe) += -i * omega_c_conj;
    A(kEe, kGe) += -i * gac;
    A(kEe, kEg) += i * ga;

    A(kGgp, kGgp) = -d.ggp;
    A(kGgp, kGe) += i * omega_c_conj;
    A(kGgp, kEgp) += -i * ga;

    A(kGpg, kGpg) = -d.ggp;
    A(kGpg, kEg) += -i * omega_c;
    A(kGpg, kGpe) += i * gac;

    A(kGe, kGe) = -d.eg;
    A(kGe, kGgp) += i * omega_c;
    A(kGe, kEe) += -i * ga;
    A(kGe, kGg) += i * ga;

    A(kEg, kEg) = -d.eg;
    A(kEg, kGpg) += -i * omega_c_conj;
    A(kEg, kEe) += i * gac;
    A(kEg, kGg) += -i * gac;

    A(kGpe, kGpe) = -d.egp;
    A(kGpe, kEe) += -i * omega_c;
    A(kGpe, kGpgp) += i * omega_c;
    A(kGpe, kGpg) += i * ga;

    A(kEgp, kEgp) = -d.egp;
    A(kEgp, kEe) += i * omega_c_conj;
    A(kEgp, kGpgp) += -i * omega_c_conj;
    A(kEgp, kGgp) += -i * gac;
    return A;
}

struct HbSolution {
    Eigen::VectorXcd x;  // stacked l = -L..L
    int L = 0;
    double residual = 0.0;
};

HbSolution solve_block_system(const EngineParams& p, const Mat9& A0, const Mat9& A1,
                              int L) {
    const int nblk = 2 * L + 1;
    const int dim = 9 * nblk;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(dim);
    const Complex i(0.0, 1.0);

    for (int li = 0; li < nblk; ++li) {
        const int l = li - L;
        M.block<9, 9>(9 * li, 9 * li) = A0 + i * (l * p.omega_m) * Mat9::Identity();
        if (li > 0) M.block<9, 9>(9 * li, 9 * (li - 1)) = A1;
        if (li + 1 < nblk) M.block<9, 9>(9 * li, 9 * (li + 1)) = A1;
    }

    // Trace normalization replaces the redundant l = 0 excited-population row.
    const int row = 9 * L + kEe;
    M.row(row).setZero();
    M(row, 9 * L + kGg) = 1.0;
    M(row, 9 * L + kGpgp) = 1.0;
    M(row, 9 * L + kEe) = 1.0;
    b(row) = 1.0;

    HbSolution sol;
    sol.L = L;
    sol.x = Eigen::PartialPivLU<Eigen::MatrixXcd>(M).solve(b);
    sol.residual = (M * sol.x - b).cwiseAbs().maxCoeff();
    if (!sol.x.allFinite() || sol.residual > 1e-8)
        throw DegenerateParameterError(
            "harmonic balance: singular Fourier-domain system (residual " +
            std::to_string(sol.residual) + ")");
    return sol;
}

FloquetComponents take(const HbSolution& sol, const EngineParams& p, int l_max) {
    FloquetComponents fc(l_max, p.omega_m);
    for (int l = -l_max; l <= l_max; ++l)
        for (int c = 0; c < 9; ++c)
            fc.at(c, l) = sol.x(9 * (l + sol.L) + c);
    fc.solve_residual = sol.residual;
    return fc;
}

}  // namespace

double x_factor(const EngineParams& p) {
    p.validate();
    const DephasingRates d = dephasing_rates(p);
    const double rate_c = p.gamma_egp * p.n_c;
    const double den = d.egp * d.egp + 4.0 * p.omega_m * p.omega_m;
    if (den == 0.0) {
        if (p.omega_rabi == 0.0) return rate_c;
        throw SingularParameterError("x_factor: gamma_eg' and omega_m both zero");
    }
    return rate_c + d.egp * (1.0 + p.eta / 2.0) * p.omega_rabi * p.omega_rabi / den;
}

PopulationTriple populations_closed_form(const EngineParams& p) {
    const double X = x_factor(p);
    const double rate_h = p.gamma_eg * p.n_h;
    const double den = 3.0 * X * rate_h + X * p.gamma_eg + rate_h * p.gamma_egp;
    if (!(den > 0.0))
        throw DegenerateParameterError(
            "closed-form populations: all pumping channels off");
    PopulationTriple out;
    out.gg = X * (p.gamma_eg + rate_h) / den;
    out.ee = rate_h * X / den;
    out.gpgp = (X * rate_h + rate_h * p.gamma_egp) / den;
    return out;
}

namespace {

struct ClosedFormParts {
    Complex gg2;   // gamma_gg'/2 +- i omega_m
    Complex egp2;  // gamma_eg' +- 2 i omega_m
    Complex den;
    double fac;    // numerator population factor under the chosen reading
    double geg;
};

ClosedFormParts closed_form_parts(const EngineParams& p, const PopulationTriple& pops,
                                  Branch branch, NumeratorReading reading) {
    const DephasingRates d = dephasing_rates(p);
    const double s = branch == Branch::plus ? 1.0 : -1.0;
    ClosedFormParts parts;
    parts.gg2 = Complex(d.ggp / 2.0, s * p.omega_m);
    parts.egp2 = Complex(d.egp, s * 2.0 * p.omega_m);
    parts.geg = d.eg;
    parts.fac = reading == NumeratorReading::as_printed
                    ? 1.0 + (p.eta / 2.0) * (pops.ee - pops.gpgp)
                    : (1.0 + p.eta / 2.0) * (pops.ee - pops.gpgp);
    parts.den = -(d.eg / 2.0) * parts.gg2 -
                0.25 * (1.0 + p.eta / 2.0) * p.omega_rabi * p.omega_rabi;
    if (std::abs(parts.egp2) == 0.0 || std::abs(parts.den) == 0.0)
        throw SingularParameterError(
            "closed form: vanishing denominator at omega_rabi = " +
            std::to_string(p.omega_rabi) + ", omega_m = " + std::to_string(p.omega_m) +
            ", gamma_eg = " + std::to_string(p.gamma_eg) +
            ", gamma_eg' = " + std::to_string(p.gamma_egp));
    return parts;
}

}  // namespace

Complex coherence_closed_form(const EngineParams& p, const PopulationTriple& pops,
                              Branch branch, NumeratorReading reading) {
    p.validate();
    const ClosedFormParts f = closed_form_parts(p, pops, branch, reading);
    const Complex i(0.0, 1.0);
    const Complex ga = p.g_pr * p.probe_amplitude;
    const double om2 = p.omega_rabi * p.omega_rabi;
    const Complex num = -0.5 * i * (pops.ee - pops.gg) * f.gg2 * ga +
                        i * f.fac * ga * om2 / (4.0 * f.egp2);
    return -num / f.den;
}

GainResult gain(const EngineParams& p, NumeratorReading reading) {
    p.validate();
    const PopulationTriple pops = populations_closed_form(p);
    const double g2 = p.g_pr * p.g_pr;
    const double om2 = p.omega_rabi * p.omega_rabi;
    GainResult out;
    for (Branch b : {Branch::plus, Branch::minus}) {
        const ClosedFormParts f = closed_form_parts(p, pops, b, reading);
        const Complex num = 0.5 * (pops.ee - pops.gg) * f.gg2 * g2 -
                            f.fac * g2 * om2 / (4.0 * f.egp2);
        const Complex g_val = -p.kappa / 2.0 - num / f.den;
        (b == Branch::plus ? out.plus : out.minus) = g_val;
    }
    return out;
}

FloquetComponents harmonic_balance_solve(const EngineParams& p, int l_max,
                                         const HarmonicBalanceOptions& opts) {
    p.validate();
    if (l_max < 1) throw InvalidParameterError("harmonic balance requires l_max >= 1");
    if (!(p.omega_m > 0.0))
        throw InvalidParameterError("harmonic balance requires omega_m > 0");
    if (p.modulation != ModulationModel::linear_in_eta)
        throw InvalidParameterError(
            "harmonic balance covers the first-order modulation model only");

    const Mat9 A0 = generator(p, p.omega_rabi, p.omega_rabi);
    const Complex side(0.0, p.eta * p.omega_rabi / 2.0);
    const Mat9 A1 = generator(p, side, -side) - generator(p, Complex(0), Complex(0));
    const double a1_norm = A1.cwiseAbs().rowwise().sum().maxCoeff();

    if (opts.guard >= 0) {
        const HbSolution sol = solve_block_system(p, A0, A1, l_max + opts.guard);
        FloquetComponents fc = take(sol, p, l_max);
        // Scale of the couplings dropped at the internal truncation edge.
        double edge = 0.0;
        for (int c = 0; c < 9; ++c)
            edge = std::max(edge, std::abs(sol.x(c)));  // block l = -L
        for (int c = 0; c < 9; ++c)
            edge = std::max(edge, std::abs(sol.x(9 * 2 * sol.L + c)));
        fc.truncation_estimate = a1_norm * edge;
        return fc;
    }

    // Adaptive internal truncation: extend guard harmonics until the
    // returned components stop moving.
    FloquetComponents prev;
    bool have_prev = false;
    for (int guard = 4; l_max + guard <= opts.max_internal_l; guard *= 2) {
        const HbSolution sol = solve_block_system(p, A0, A1, l_max + guard);
        FloquetComponents fc = take(sol, p, l_max);
        if (have_prev) {
            const double delta = fc.max_delta(prev);
            if (delta <= 0.1 * opts.residual_target) {
                fc.truncation_estimate = delta;
                if (fc.solve_residual > opts.residual_target)
                    throw ConvergenceError("harmonic balance: linear residual above target",
                                           fc.solve_residual);
                return fc;
            }
        }
        prev = fc;
        have_prev = true;
    }
    throw ConvergenceError(
        "harmonic balance: internal truncation did not converge by l = " +
            std::to_string(opts.max_internal_l),
        prev.truncation_estimate);
}

GainResult gain_from_components(const FloquetComponents& fc, const EngineParams& p) {
    GainResult out;
    Complex g_val(-p.kappa / 2.0, 0.0);
    if (p.g_pr != 0.0 && std::abs(p.probe_amplitude) != 0.0)
        g_val += Complex(0.0, 1.0) * p.g_pr * fc.at(kGe, 0) / p.probe_amplitude;
    out.plus = out.minus = g_val;
    return out;
}

}  // namespace lambda_engine
