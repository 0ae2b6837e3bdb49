#include <doctest.h>

#include <cmath>
#include <limits>

#include "rovib/constants.hpp"
#include "rovib/model_params.hpp"
#include "rovib/noise_model.hpp"

using namespace rovib;
using doctest::Approx;
using cplx = std::complex<double>;

namespace {
const double kGamma = constants::two_pi;
const double kOmega = constants::two_pi * 1e6;
}  // namespace

TEST_CASE("low-frequency limit is classical") {
    for (double T : {0.1, 1.0, 300.0}) {
        const double want = kGamma / kOmega * 2 * constants::k_boltzmann * T / constants::hbar;
        CHECK(brownian_spectrum(1e-3, T, kGamma, kOmega, Flavor::Symmetrized) == Approx(want).epsilon(1e-12));
        CHECK(brownian_spectrum(0.0, T, kGamma, kOmega) == Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("raw minus reflected raw is the commutator for every temperature") {
    for (double T : {0.0, 1e-3, 0.1, 1.0, 10.0, 300.0}) {
        for (double w : {1.0, 1e3, 1e5, kOmega, 3e7, 1e12}) {
            const double sp = brownian_spectrum(w, T, kGamma, kOmega), sm = brownian_spectrum(-w, T, kGamma, kOmega);
            const double want = 2 * kGamma / kOmega * w;
            // The subtraction cancels the thermal part, so rounding scales with |S|.
            const double tol = 1e-12 * want + 8 * std::numeric_limits<double>::epsilon() * (sp + sm);
            CHECK(std::abs((sp - sm) - want) <= tol);
            CHECK(brownian_spectrum(w, T, kGamma, kOmega, Flavor::Commutator) == Approx(want).epsilon(1e-15));
            const double sym =
                0.5 * (brownian_spectrum(w, T, kGamma, kOmega) + brownian_spectrum(-w, T, kGamma, kOmega));
            CHECK(brownian_spectrum(w, T, kGamma, kOmega, Flavor::Symmetrized) == Approx(sym).epsilon(1e-12));
        }
    }
}

TEST_CASE("zero temperature is one-sided") {
    CHECK(brownian_spectrum(kOmega, 0.0, kGamma, kOmega) == Approx(2 * kGamma));
    CHECK(brownian_spectrum(-kOmega, 0.0, kGamma, kOmega) == 0.0);
}

TEST_CASE("omega coth branches join smoothly") {
    const double T = 1.0;
    const double w_switch = 1e-6 * 2 * constants::k_boltzmann * T / constants::hbar;
    CHECK(omega_coth(w_switch * 0.999, T) == Approx(omega_coth(w_switch * 1.001, T)).epsilon(1e-8));
    const double w_big = 30.0 * 2 * constants::k_boltzmann * T / constants::hbar;
    CHECK(omega_coth(w_big * 0.999, T) == Approx(omega_coth(w_big * 1.001, T)).epsilon(1e-2));
    CHECK(omega_coth(-5e5, T) == Approx(omega_coth(5e5, T)));
    CHECK(omega_coth(-5e5, 0.0) == 5e5);
    CHECK(omega_coth(0.0, 1.0) > 0);
}

TEST_CASE("input correlation blocks per flavor") {
    const auto d = derive_params(PhysicalParams::defaults());
    const double w = d.omega_z;
    const auto raw = input_correlation(w, 1.0, d, Flavor::Raw);
    const auto sym = input_correlation(w, 1.0, d, Flavor::Symmetrized);
    const auto com = input_correlation(w, 1.0, d, Flavor::Commutator);
    const auto com_hot = input_correlation(w, 300.0, d, Flavor::Commutator);
    CHECK(raw.C(0, 1) == cplx{1, 0});
    CHECK(raw.C(1, 0) == cplx{});
    CHECK(sym.C(0, 1) == cplx{0.5, 0});
    CHECK(sym.C(1, 0) == cplx{0.5, 0});
    CHECK(com.C(0, 1) == cplx{1, 0});
    CHECK(com.C(1, 0) == cplx{-1, 0});
    CHECK(com.C == com_hot.C);
    CHECK(sym.C(2, 2).real() ==
          Approx(d.gamma_z / d.omega_z * w / std::tanh(constants::hbar * w / (2 * constants::k_boltzmann))));

    // RAW = SYM + COMM/2 and SYM = (RAW(w) + RAW(-w)^T)/2.
    const auto raw_m = input_correlation(-w, 1.0, d, Flavor::Raw);
    const NoiseMatrix sym_built = 0.5 * (raw.C + raw_m.C.transpose());
    CHECK((sym_built - sym.C).cwiseAbs().maxCoeff() < 1e-12 * sym.C.cwiseAbs().maxCoeff());
    CHECK((sym.C + 0.5 * com.C - raw.C).cwiseAbs().maxCoeff() < 1e-12 * raw.C.cwiseAbs().maxCoeff());
    CHECK(std::string(to_string(Flavor::Symmetrized)) == "SYMMETRIZED");
}
