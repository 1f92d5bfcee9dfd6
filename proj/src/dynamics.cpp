#include "lambda_engine/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "lambda_engine/errors.hpp"

namespace lambda_engine {

namespace {

// Integrator state: populations, coherences (Re/Im), probe (Re/Im).
using Y = std::array<double, 11>;

Y pack(const DensityState& s) {
    return {s.gg,          s.gpgp,        s.ee,
            s.ggp.real(),  s.ggp.imag(),  s.ge.real(), s.ge.imag(),
            s.gpe.real(),  s.gpe.imag(),  s.probe.real(), s.probe.imag()};
}

DensityState unpack(const Y& y) {
    DensityState s;
    s.gg = y[0];
    s.gpgp = y[1];
    s.ee = y[2];
    s.ggp = {y[3], y[4]};
    s.ge = {y[5], y[6]};
    s.gpe = {y[7], y[8]};
    s.probe = {y[9], y[10]};
    return s;
}

struct RhsContext {
    const EngineParams& p;
    DephasingRates deph;
    double rate_up_h, rate_down_h;  // Gamma_eg n_h, Gamma_eg (n_h+1)
    double rate_up_c, rate_down_c;
    ProbeMode mode;

    RhsContext(const EngineParams& p, ProbeMode mode)
        : p(p), deph(dephasing_rates(p)),
          rate_up_h(p.gamma_eg * p.n_h), rate_down_h(p.gamma_eg * (p.n_h + 1.0)),
          rate_up_c(p.gamma_egp * p.n_c), rate_down_c(p.gamma_egp * (p.n_c + 1.0)),
          mode(mode) {}

    void eval(double t, const Y& y, Y& dy) const {
        const Complex omega = rabi_at(t, p);
        const Complex ggp{y[3], y[4]};
        const Complex ge{y[5], y[6]};
        const Complex gpe{y[7], y[8]};
        const Complex a{y[9], y[10]};
        const double g = p.g_pr;

        // i g (a* ge - a conj(ge)) = -2 g Im(a* ge), exactly real.
        const double probe_pump = -2.0 * g * std::imag(std::conj(a) * ge);
        // -i W egp + i W* gpe with egp = conj(gpe) equals 2 Im(W conj(gpe)).
        const double control_pump = 2.0 * std::imag(omega * std::conj(gpe));

        const double d_gg = -rate_up_h * y[0] + rate_down_h * y[2] + probe_pump;
        const double d_gpgp = -rate_up_c * y[1] + rate_down_c * y[2] + control_pump;

        const Complex d_ggp = -deph.ggp * ggp + Complex(0, 1) * std::conj(omega) * ge -
                              Complex(0, 1) * g * a * std::conj(gpe);
        const Complex d_ge = -deph.eg * ge + Complex(0, 1) * omega * ggp -
                             Complex(0, 1) * g * a * (y[2] - y[0]);
        const Complex d_gpe = -deph.egp * gpe - Complex(0, 1) * omega * (y[2] - y[1]) +
                              Complex(0, 1) * g * a * std::conj(ggp);

        dy[0] = d_gg;
        dy[1] = d_gpgp;
        dy[2] = -(d_gg + d_gpgp);
        dy[3] = d_ggp.real();
        dy[4] = d_ggp.imag();
        dy[5] = d_ge.real();
        dy[6] = d_ge.imag();
        if (mode == ProbeMode::coupled_probe) {
            const Complex d_a = -0.5 * p.kappa * a + Complex(0, 1) * g * ge;
            dy[9] = d_a.real();
            dy[10] = d_a.imag();
        } else {
            dy[9] = 0.0;
            dy[10] = 0.0;
        }
        dy[7] = d_gpe.real();
        dy[8] = d_gpe.imag();
    }
};

// Dormand-Prince 5(4) with FSAL and standard step control.
class Dopri5 {
public:
    // The absolute floor sits three decades under the relative tolerance so
    // near-zero components stay quiet enough for the stroboscopic threshold.
    Dopri5(const RhsContext& ctx, double tol) : ctx_(ctx), atol_(1e-3 * tol), rtol_(tol) {}

    IntegratorStats stats;

    // Advances y from t to t_end, which is hit exactly.
    void integrate_to(double& t, double t_end, Y& y) {
        if (t_end == t) return;
        if (!have_k1_) {
            ctx_.eval(t, y, k1_);
            ++stats.rhs_evaluations;
            have_k1_ = true;
        }
        if (h_ <= 0.0) h_ = initial_step(t, y);
        while (t < t_end) {
            double h = std::min(h_, t_end - t);
            bool clipped = (h < h_);
            if (t + h == t) {
                throw StiffnessError("step size underflow at t = " + std::to_string(t) +
                                     " (h = " + std::to_string(h) + ")");
            }
            if (!try_step(t, h, y, clipped)) {
                if (++consecutive_rejects_ > 200)
                    throw StiffnessError("integrator stalled near t = " + std::to_string(t));
            } else {
                consecutive_rejects_ = 0;
            }
            if (stats.steps_accepted + stats.steps_rejected > 500'000'000ull)
                throw StiffnessError("step budget exhausted");
        }
    }

private:
    const RhsContext& ctx_;
    double atol_, rtol_;
    double h_ = 0.0;
    Y k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{};
    bool have_k1_ = false;
    int consecutive_rejects_ = 0;

    double initial_step(double t, const Y& y) const {
        double ny = 0, nf = 0;
        for (int i = 0; i < 11; ++i) {
            ny = std::max(ny, std::abs(y[i]));
            nf = std::max(nf, std::abs(k1_[i]));
        }
        double h = (nf > 1e-12) ? 0.01 * std::max(ny, 1.0) / nf : 1e-3;
        (void)t;
        return std::clamp(h, 1e-9, 0.5);
    }

    bool try_step(double& t, double h, Y& y, bool h_was_clipped) {
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                                a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                                a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

        Y yt, ynew;
        for (int i = 0; i < 11; ++i) yt[i] = y[i] + h * a21 * k1_[i];
        ctx_.eval(t + c2 * h, yt, k2_);
        for (int i = 0; i < 11; ++i) yt[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        ctx_.eval(t + c3 * h, yt, k3_);
        for (int i = 0; i < 11; ++i)
            yt[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        ctx_.eval(t + c4 * h, yt, k4_);
        for (int i = 0; i < 11; ++i)
            yt[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        ctx_.eval(t + c5 * h, yt, k5_);
        for (int i = 0; i < 11; ++i)
            yt[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] +
                                a64 * k4_[i] + a65 * k5_[i]);
        ctx_.eval(t + h, yt, k6_);
        for (int i = 0; i < 11; ++i)
            ynew[i] = y[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] +
                                  b5 * k5_[i] + b6 * k6_[i]);
        ctx_.eval(t + h, ynew, k7_);
        stats.rhs_evaluations += 6;

        double err = 0.0;
        for (int i = 0; i < 11; ++i) {
            const double ei = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] +
                                   e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
            const double sk = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double q = ei / sk;
            err += q * q;
        }
        err = std::sqrt(err / 11.0);

        const double safety = 0.9;
        double scale = (err > 0.0) ? safety * std::pow(err, -0.2) : 5.0;
        scale = std::clamp(scale, 0.2, 5.0);

        if (err <= 1.0) {
            t += h;
            y = ynew;
            k1_ = k7_;  // FSAL
            ++stats.steps_accepted;
            stats.max_error_estimate = std::max(stats.max_error_estimate, err);
            if (!h_was_clipped || h * scale > h_) h_ = h * scale;
            return true;
        }
        ++stats.steps_rejected;
        h_ = h * std::min(scale, 1.0);
        return false;
    }
};

void check_tol(double tol) {
    if (!(tol >= 1e-13 && tol <= 1e-6))
        throw InvalidParameterError("integrator tolerance must lie in [1e-13, 1e-6]");
}

}  // namespace

DensityState bloch_rhs(const DensityState& s, double t, const EngineParams& p,
                       ProbeMode mode) {
    RhsContext ctx(p, mode);
    Y y = pack(s), dy{};
    ctx.eval(t, y, dy);
    return unpack(dy);
}

Trajectory evolve(const DensityState& s0, double t0, double t1,
                  const EngineParams& p, double tol, ProbeMode mode, int n_samples) {
    check_tol(tol);
    p.validate();
    if (!(t1 >= t0)) throw InvalidParameterError("time span must be forward");
    if (n_samples < 1) n_samples = 1;

    RhsContext ctx(p, mode);
    Dopri5 stepper(ctx, tol);

    Trajectory tr;
    tr.times.reserve(n_samples + 1);
    tr.states.reserve(n_samples + 1);

    Y y = pack(s0);
    double t = t0;
    tr.times.push_back(t);
    tr.states.push_back(unpack(y));
    for (int k = 1; k <= n_samples; ++k) {
        const double target = t0 + (t1 - t0) * k / n_samples;
        stepper.integrate_to(t, target, y);
        t = target;
        tr.times.push_back(t);
        tr.states.push_back(unpack(y));
    }
    tr.stats = stepper.stats;
    return tr;
}

double min_relaxation_rate(const EngineParams& p) {
    const DephasingRates d = dephasing_rates(p);
    double r = std::numeric_limits<double>::infinity();
    for (double v : {p.gamma_eg, p.gamma_egp, p.gamma_eg * p.n_h, p.gamma_egp * p.n_c,
                     d.ggp}) {
        if (v > 0.0) r = std::min(r, v);
    }
    if (!std::isfinite(r))
        throw DegenerateParameterError("no relaxation: all decay channels are zero");
    return r;
}

Trajectory stroboscopic_steady_state(const EngineParams& p,
                                     const SteadyStateOptions& opts) {
    check_tol(opts.tol);
    p.validate();

    const bool periodic = p.omega_m > 0.0;
    const double chunk = periodic ? 2.0 * M_PI / p.omega_m : 5.0;
    const double t_max = opts.t_max > 0.0 ? opts.t_max : 200.0 / min_relaxation_rate(p);

    RhsContext ctx(p, opts.mode);
    Dopri5 stepper(ctx, opts.tol);

    DensityState init = opts.initial ? *opts.initial
                                     : DensityState::maximally_mixed(p.probe_amplitude);
    Y y = pack(init);
    double t = 0.0;
    int chunks = 0;
    double delta = std::numeric_limits<double>::infinity();
    Y prev = y;
    while (true) {
        ++chunks;
        stepper.integrate_to(t, chunks * chunk, y);
        t = chunks * chunk;
        delta = 0.0;
        for (int i = 0; i < 11; ++i) delta = std::max(delta, std::abs(y[i] - prev[i]));
        prev = y;
        if (delta < opts.strobe_tol) break;
        if (t >= t_max) {
            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "no periodic steady state within t_max = %.6g "
                          "(last stroboscopic delta %.3e)",
                          t_max, delta);
            throw ConvergenceError(msg, delta);
        }
    }

    Trajectory tr;
    tr.strobe_delta = delta;
    tr.periods_elapsed = chunks;
    if (!periodic) {
        tr.period = 0.0;
        tr.times.push_back(t);
        tr.states.push_back(unpack(y));
        tr.stats = stepper.stats;
        return tr;
    }

    // One more period, densely and uniformly sampled; the drive phase is
    // anchored at t = 0, and t0 is an exact period multiple by construction.
    const int n = std::max(64, opts.samples_per_period);
    tr.period = chunk;
    tr.times.reserve(n + 1);
    tr.states.reserve(n + 1);
    const double t0 = t;
    tr.times.push_back(t0);
    tr.states.push_back(unpack(y));
    for (int k = 1; k <= n; ++k) {
        const double target = t0 + chunk * k / n;
        stepper.integrate_to(t, target, y);
        t = target;
        tr.times.push_back(t);
        tr.states.push_back(unpack(y));
    }
    tr.stats = stepper.stats;
    return tr;
}

FloquetComponents extract_harmonics(const Trajectory& orbit, int l_max) {
    if (l_max < 0) throw InvalidParameterError("l_max must be >= 0");
    if (orbit.period <= 0.0) {
        if (orbit.states.empty())
            throw InvalidParameterError("empty trajectory");
        if (l_max > 0)
            throw InvalidParameterError(
                "constant (omega_m = 0) orbit carries no harmonics; use l_max = 0");
        FloquetComponents fc(0, 0.0);
        const Vec9 v = to_vec9(orbit.states.back());
        for (int c = 0; c < 9; ++c) fc.at(c, 0) = v[c];
        return fc;
    }

    const int n = static_cast<int>(orbit.states.size()) - 1;  // endpoint duplicated
    if (n < 64)
        throw InvalidParameterError("harmonic extraction needs >= 64 samples per period");
    if (2 * l_max >= n)
        throw InvalidParameterError("harmonic extraction: l_max too large for sample count");

    const double omega = 2.0 * M_PI / orbit.period;
    FloquetComponents fc(l_max, omega);

    std::vector<Vec9> vals(n);
    for (int k = 0; k < n; ++k) vals[k] = to_vec9(orbit.states[k]);

    // tau = k T / n relative to the period start; the absolute start is an
    // exact period multiple, so phases coincide with the t = 0 drive anchor.
    for (int l = -l_max; l <= l_max; ++l) {
        std::vector<Complex> ph(n);
        for (int k = 0; k < n; ++k)
            ph[k] = std::polar(1.0, l * 2.0 * M_PI * k / n);
        for (int c = 0; c < 9; ++c) {
            Complex acc(0, 0);
            for (int k = 0; k < n; ++k) acc += vals[k][c] * ph[k];
            fc.at(c, l) = acc / static_cast<double>(n);
        }
    }

    double recon = 0.0;
    for (int k = 0; k < n; ++k) {
        const double tau = orbit.period * k / n;
        Vec9 r{};
        for (int l = -l_max; l <= l_max; ++l) {
            const Complex e = std::polar(1.0, -l * omega * tau);
            for (int c = 0; c < 9; ++c) r[c] += fc.at(c, l) * e;
        }
        for (int c = 0; c < 9; ++c) recon = std::max(recon, std::abs(r[c] - vals[k][c]));
    }
    fc.reconstruction_error = recon;
    return fc;
}

void write_trajectory_csv(const Trajectory& tr, std::ostream& os) {
    os << "t";
    for (const char* name : kCompNames) os << ",re_" << name << ",im_" << name;
    os << ",re_probe,im_probe\n";
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << ',' << buf;
    };
    for (size_t i = 0; i < tr.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", tr.times[i]);
        os << buf;
        const Vec9 v = to_vec9(tr.states[i]);
        for (int c = 0; c < 9; ++c) {
            put(v[c].real());
            put(v[c].imag());
        }
        put(tr.states[i].probe.real());
        put(tr.states[i].probe.imag());
        os << '\n';
    }
}

}  // namespace lambda_engine
