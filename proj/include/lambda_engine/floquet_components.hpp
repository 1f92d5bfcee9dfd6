#pragma once

#include <array>
#include <vector>

#include "lambda_engine/density_state.hpp"

namespace lambda_engine {

// Slot order for the nine density-matrix components, used both by the
// harmonic-balance generator and by Fourier extraction. Off-diagonal slots
// are transition-operator expectations, matching DensityState.
enum Comp : int {
    kGg = 0,
    kGpgp = 1,
    kEe = 2,
    kGgp = 3,
    kGpg = 4,
    kGe = 5,
    kEg = 6,
    kGpe = 7,
    kEgp = 8,
};

inline constexpr std::array<const char*, 9> kCompNames = {
    "rho_gg", "rho_gpgp", "rho_ee", "rho_ggp", "rho_gpg",
    "rho_ge", "rho_eg",   "rho_gpe", "rho_egp"};

using Vec9 = std::array<Complex, 9>;

Vec9 to_vec9(const DensityState& s);
DensityState from_vec9(const Vec9& v, Complex probe);

// Harmonic amplitudes of a mirror-periodic state,
// rho_jk(t) = sum_l comp(jk, l) exp(-i l omega_m t), |l| <= l_max.
struct FloquetComponents {
    int l_max = 0;
    double omega_m = 0.0;
    std::vector<Complex> data;  // (2*l_max+1) blocks of 9, l = -l_max..l_max

    // Diagnostics, filled by whichever routine produced the components.
    double solve_residual = 0.0;        // linear-system residual (harmonic balance)
    double truncation_estimate = 0.0;   // neglected-coupling / self-convergence scale
    double reconstruction_error = 0.0;  // orbit reconstruction error (extraction)

    FloquetComponents() = default;
    FloquetComponents(int l_max, double omega_m)
        : l_max(l_max), omega_m(omega_m),
          data(9 * (2 * static_cast<size_t>(l_max) + 1), Complex(0, 0)) {}

    Complex at(int comp, int l) const { return data[index(comp, l)]; }
    Complex& at(int comp, int l) { return data[index(comp, l)]; }

    size_t index(int comp, int l) const {
        return 9 * static_cast<size_t>(l + l_max) + static_cast<size_t>(comp);
    }

    // max |rho_{jk,l} - conj(rho_{kj,-l})|
    double conjugate_symmetry_error() const;
    // |sum_j rho_{jj,0} - 1|
    double trace_error() const;
    // Largest |rho_{jk,l}| at the given |l|.
    double harmonic_magnitude(int l) const;

    // rho(t) rebuilt from the retained harmonics.
    DensityState state_at(double t, Complex probe) const;

    // Largest component-wise |difference| against another set, compared over
    // the common |l| range.
    double max_delta(const FloquetComponents& o) const;
};

}  // namespace lambda_engine
