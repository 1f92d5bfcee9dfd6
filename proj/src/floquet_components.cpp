#include "lambda_engine/floquet_components.hpp"

#include <algorithm>
#include <cmath>

namespace lambda_engine {

double DensityState::distance(const DensityState& o) const {
    double d = std::abs(gg - o.gg);
    d = std::max(d, std::abs(gpgp - o.gpgp));
    d = std::max(d, std::abs(ee - o.ee));
    d = std::max(d, std::abs(ggp - o.ggp));
    d = std::max(d, std::abs(ge - o.ge));
    d = std::max(d, std::abs(gpe - o.gpe));
    d = std::max(d, std::abs(probe - o.probe));
    return d;
}

Vec9 to_vec9(const DensityState& s) {
    Vec9 v;
    v[kGg] = s.gg;
    v[kGpgp] = s.gpgp;
    v[kEe] = s.ee;
    v[kGgp] = s.ggp;
    v[kGpg] = std::conj(s.ggp);
    v[kGe] = s.ge;
    v[kEg] = std::conj(s.ge);
    v[kGpe] = s.gpe;
    v[kEgp] = std::conj(s.gpe);
    return v;
}

DensityState from_vec9(const Vec9& v, Complex probe) {
    DensityState s;
    s.gg = v[kGg].real();
    s.gpgp = v[kGpgp].real();
    s.ee = v[kEe].real();
    s.ggp = v[kGgp];
    s.ge = v[kGe];
    s.gpe = v[kGpe];
    s.probe = probe;
    return s;
}

namespace {
constexpr int kConjPartner[9] = {kGg, kGpgp, kEe, kGpg, kGgp, kEg, kGe, kEgp, kGpe};
}

double FloquetComponents::conjugate_symmetry_error() const {
    double worst = 0.0;
    for (int l = -l_max; l <= l_max; ++l)
        for (int c = 0; c < 9; ++c)
            worst = std::max(worst,
                             std::abs(at(c, l) - std::conj(at(kConjPartner[c], -l))));
    return worst;
}

double FloquetComponents::trace_error() const {
    return std::abs(at(kGg, 0) + at(kGpgp, 0) + at(kEe, 0) - 1.0);
}

double FloquetComponents::harmonic_magnitude(int l) const {
    double m = 0.0;
    for (int c = 0; c < 9; ++c) {
        m = std::max(m, std::abs(at(c, l)));
        if (l != 0) m = std::max(m, std::abs(at(c, -l)));
    }
    return m;
}

DensityState FloquetComponents::state_at(double t, Complex probe) const {
    Vec9 v{};
    for (int l = -l_max; l <= l_max; ++l) {
        const Complex ph = std::exp(Complex(0.0, -l * omega_m * t));
        for (int c = 0; c < 9; ++c) v[c] += at(c, l) * ph;
    }
    return from_vec9(v, probe);
}

double FloquetComponents::max_delta(const FloquetComponents& o) const {
    const int lm = std::min(l_max, o.l_max);
    double worst = 0.0;
    for (int l = -lm; l <= lm; ++l)
        for (int c = 0; c < 9; ++c)
            worst = std::max(worst, std::abs(at(c, l) - o.at(c, l)));
    return worst;
}

}  // namespace lambda_engine
