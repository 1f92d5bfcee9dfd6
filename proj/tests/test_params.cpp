#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lambda_engine/errors.hpp"
#include "lambda_engine/params.hpp"

using namespace lambda_engine;

namespace {
constexpr double kHbar = 1.054571817e-34;
constexpr double kBoltzmann = 1.380649e-23;
const double kRbD1 = 2.0 * M_PI * 377.107e12;  // rad/s
}  // namespace

TEST_CASE("bose occupation limits") {
    CHECK(bose_occupation({0.0, kRbD1}) == 0.0);

    // hbar w / (kB T) = ln 2 gives exactly one thermal photon.
    const double T = kHbar * kRbD1 / (kBoltzmann * std::log(2.0));
    CHECK(bose_occupation({T, kRbD1}) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(bose_occupation({-1.0, kRbD1}), InvalidParameterError);
    CHECK_THROWS_AS(bose_occupation({300.0, 0.0}), InvalidParameterError);
}

TEST_CASE("occupation 0.05 on the D1 line inverts to hbar w / (kB ln 21)") {
    const double T_expected = kHbar * kRbD1 / (kBoltzmann * std::log(21.0));
    const double T = occupation_to_temperature(0.05, kRbD1);
    CHECK(T == doctest::Approx(T_expected).epsilon(1e-12));
    CHECK(bose_occupation({T, kRbD1}) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("occupation/temperature round trips") {
    for (double n : {0.01, 0.05, 0.5}) {
        const double T = occupation_to_temperature(n, kRbD1);
        CHECK(bose_occupation({T, kRbD1}) == doctest::Approx(n).epsilon(1e-12));
    }
    CHECK_THROWS_AS(occupation_to_temperature(0.0, kRbD1), InvalidParameterError);
    CHECK_THROWS_AS(occupation_to_temperature(-0.1, kRbD1), InvalidParameterError);

    // T grows monotonically with the requested occupation.
    double prev = 0.0;
    for (double n : {0.01, 0.1, 1.0, 10.0, 1000.0}) {
        const double T = occupation_to_temperature(n, kRbD1);
        CHECK(T > prev);
        prev = T;
    }
}

TEST_CASE("bose occupation is increasing in T and decreasing in omega") {
    double prev = -1.0;
    for (double T = 10.0; T <= 1000.0; T += 30.0) {
        const double n = bose_occupation({T, kRbD1});
        CHECK(n > prev);
        prev = n;
    }
    prev = 2.0;
    for (double w = 0.5 * kRbD1; w <= 2.0 * kRbD1; w += 0.1 * kRbD1) {
        const double n = bose_occupation({3000.0, w});
        CHECK(n < prev);
        prev = n;
    }
}

TEST_CASE("dephasing rates") {
    EngineParams p;

    SUBCASE("zero occupations") {
        p.n_h = p.n_c = 0.0;
        const auto d = dephasing_rates(p);
        CHECK(d.eg == doctest::Approx(5.7).epsilon(1e-14));
        CHECK(d.egp == doctest::Approx(5.7).epsilon(1e-14));
        CHECK(d.ggp == 0.0);
    }
    SUBCASE("default occupations 0.05") {
        const auto d = dephasing_rates(p);
        CHECK(d.ggp == doctest::Approx(0.285).epsilon(1e-14));
        CHECK(d.eg == doctest::Approx(6.1275).epsilon(1e-14));
        CHECK(d.egp == doctest::Approx(6.1275).epsilon(1e-14));
    }
    SUBCASE("no decay, no dephasing") {
        p.gamma_eg = p.gamma_egp = 0.0;
        const auto d = dephasing_rates(p);
        CHECK(d.eg == 0.0);
        CHECK(d.egp == 0.0);
        CHECK(d.ggp == 0.0);
    }
    SUBCASE("non-decreasing in both occupations") {
        double prev_eg = 0.0, prev_ggp = 0.0;
        for (double n = 0.0; n <= 0.5; n += 0.05) {
            p.n_h = n;
            p.n_c = 0.2;
            const auto d = dephasing_rates(p);
            CHECK(d.eg >= prev_eg);
            CHECK(d.ggp >= prev_ggp);
            prev_eg = d.eg;
            prev_ggp = d.ggp;
        }
    }
}

TEST_CASE("mirror-modulated Rabi frequency") {
    EngineParams p;
    p.omega_rabi = 10.0;
    p.omega_m = 2.0;

    SUBCASE("no mirror coupling") {
        p.eta = 0.0;
        CHECK(rabi_at(0.0, p) == Complex(10.0, 0.0));
        CHECK(rabi_at(1.234, p) == Complex(10.0, 0.0));
    }
    SUBCASE("cosine zero") {
        p.eta = 0.1;
        const Complex v = rabi_at(M_PI / (2.0 * p.omega_m), p);
        CHECK(std::abs(v - Complex(10.0, 0.0)) < 1e-14);
    }
    SUBCASE("t = 0 peak") {
        p.eta = 0.1;
        CHECK(rabi_at(0.0, p) == Complex(10.0, 1.0));
    }
    SUBCASE("modulus-squared period average is 1 + eta^2/2") {
        p.eta = 0.4;
        const int n = 4096;
        const double T = M_PI / p.omega_m;  // |Omega|^2 has period pi/omega_m
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += std::norm(rabi_at(T * k / n, p));
        acc /= n;
        const double expect = 100.0 * (1.0 + p.eta * p.eta / 2.0);
        CHECK(acc == doctest::Approx(expect).epsilon(1e-12));
        // and the exact-exponential mode keeps a constant modulus
        p.modulation = ModulationModel::exact_exponential;
        for (int k = 0; k < 8; ++k)
            CHECK(std::abs(rabi_at(0.37 * k, p)) == doctest::Approx(10.0).epsilon(1e-14));
    }
}

TEST_CASE("parameter validation") {
    EngineParams p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.warnings().empty());

    p.eta = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidParameterError);
    p.eta = 1.5;
    CHECK_NOTHROW(p.validate());
    CHECK(p.warnings().size() == 1);  // linearization suspect above eta = 1

    p = EngineParams{};
    p.omega_egp = p.omega_eg + 1.0;  // breaks the level ordering
    CHECK_THROWS_AS(p.validate(), InvalidParameterError);

    p = EngineParams{};
    p.n_c = -0.01;
    CHECK_THROWS_AS(p.validate(), InvalidParameterError);
}
