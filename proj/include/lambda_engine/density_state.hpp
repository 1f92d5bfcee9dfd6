#pragma once

#include <Eigen/Dense>

#include "lambda_engine/params.hpp"

namespace lambda_engine {

// Basis order {|g>, |g'>, |e>}. Populations are stored as reals and the three
// independent coherences as expectation values of the transition operators,
// rho_jk = <|j><k|> = Tr(rho |j><k|); the remaining matrix entries follow by
// conjugation, so Hermiticity and realness of populations hold by
// construction. The semiclassical probe amplitude rides along with the state.
struct DensityState {
    double gg = 0.0;
    double gpgp = 0.0;
    double ee = 0.0;
    Complex ggp{0.0, 0.0};  // <|g><g'|>
    Complex ge{0.0, 0.0};   // <|g><e|>
    Complex gpe{0.0, 0.0};  // <|g'><e|>
    Complex probe{1.0, 0.0};

    static DensityState ground(Complex probe_amplitude = {1.0, 0.0}) {
        DensityState s;
        s.gg = 1.0;
        s.probe = probe_amplitude;
        return s;
    }

    static DensityState maximally_mixed(Complex probe_amplitude = {1.0, 0.0}) {
        DensityState s;
        s.gg = s.gpgp = s.ee = 1.0 / 3.0;
        s.probe = probe_amplitude;
        return s;
    }

    double trace() const { return gg + gpgp + ee; }

    // <j|rho|k> with rows/cols ordered (g, g', e).
    Eigen::Matrix3cd matrix() const {
        Eigen::Matrix3cd m;
        m(0, 0) = gg;
        m(1, 1) = gpgp;
        m(2, 2) = ee;
        m(1, 0) = ggp;
        m(0, 1) = std::conj(ggp);
        m(2, 0) = ge;
        m(0, 2) = std::conj(ge);
        m(2, 1) = gpe;
        m(1, 2) = std::conj(gpe);
        return m;
    }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(matrix(),
                                                           Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    // Max-norm distance over the stored components (probe included).
    double distance(const DensityState& o) const;
};

}  // namespace lambda_engine
