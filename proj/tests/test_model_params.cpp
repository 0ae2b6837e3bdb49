#include <doctest.h>

#include <cmath>

#include "rovib/constants.hpp"
#include "rovib/errors.hpp"
#include "rovib/model_params.hpp"

using namespace rovib;
using doctest::Approx;

TEST_CASE("published design point derives the frozen couplings") {
    const auto p = PhysicalParams::defaults();
    const auto d = derive_params(p);
    CHECK(d.omega_c == Approx(2.3177698625678025e15).epsilon(1e-14));
    CHECK(d.moment_of_inertia == Approx(1.125e-19).epsilon(1e-14));
    CHECK(d.gamma == Approx(9418257.836544266).epsilon(1e-13));
    CHECK(d.g_z == Approx(75.068625912310793).epsilon(1e-13));
    CHECK(d.g_phi == Approx(75.066548702816604).epsilon(1e-13));
    CHECK(d.a_in == Approx(63962696.44838883).epsilon(1e-13));
    CHECK(d.gamma_z == Approx(constants::two_pi).epsilon(1e-15));
    CHECK(d.mode_index == 9844);
    CHECK(std::abs(d.g_z / d.g_phi - 1) < 2e-4);
}

TEST_CASE("closed-form ratio agrees with the coupling quotient") {
    const auto p = PhysicalParams::defaults();
    const auto d = derive_params(p);
    CHECK(coupling_ratio(d, p) == Approx(d.g_z / d.g_phi).epsilon(1e-13));
    CHECK(coupling_ratio(d, p) == Approx(1.0000276715731586).epsilon(1e-13));
}

TEST_CASE("ratio is exactly one at the balancing radius") {
    auto p = PhysicalParams::defaults();
    p.mirror_radius = std::sqrt(2.0) * p.oam_charge * p.wavelength / constants::two_pi;
    const auto d = derive_params(p);
    CHECK(coupling_ratio(d, p) == Approx(1.0).epsilon(1e-14));
    CHECK(d.g_z / d.g_phi == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("ratio scales as the square root of omega_phi") {
    auto p = PhysicalParams::defaults();
    const double r0 = coupling_ratio(derive_params(p), p);
    p.omega_phi *= 4;
    CHECK(coupling_ratio(derive_params(p), p) == Approx(2 * r0).epsilon(1e-14));
}

TEST_CASE("doubling the mass scales both couplings by 1/sqrt(2)") {
    auto p = PhysicalParams::defaults();
    const auto d0 = derive_params(p);
    const double r0 = coupling_ratio(d0, p);
    p.mass *= 2;
    const auto d1 = derive_params(p);
    CHECK(d1.g_z == Approx(d0.g_z / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(d1.g_phi == Approx(d0.g_phi / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(coupling_ratio(d1, p) == Approx(r0).epsilon(1e-14));
}

TEST_CASE("zero drive") {
    auto p = PhysicalParams::defaults();
    p.input_power = 0;
    CHECK(derive_params(p).a_in == 0);
}

TEST_CASE("resonance mismatch is reported as a warning") {
    auto p = PhysicalParams::defaults();
    auto d = derive_params(p);
    CHECK(d.resonance_mismatch());
    CHECK_FALSE(d.warnings().empty());
    p.cavity_length = d.mode_index * p.wavelength / 2;
    d = derive_params(p);
    CHECK_FALSE(d.resonance_mismatch());
    CHECK(d.warnings().empty());
}

TEST_CASE("invalid parameters") {
    auto bad = [](auto mutate) {
        auto p = PhysicalParams::defaults();
        mutate(p);
        try {
            derive_params(p);
        } catch (const Error& e) {
            return e.code() == ErrorCode::InvalidParams && e.kind() == ErrorClass::Config;
        }
        return false;
    };
    CHECK(bad([](PhysicalParams& p) { p.mass = 0; }));
    CHECK(bad([](PhysicalParams& p) { p.mirror_radius = -1; }));
    CHECK(bad([](PhysicalParams& p) { p.omega_z = 0; }));
    CHECK(bad([](PhysicalParams& p) { p.Q_phi = -3; }));
    CHECK(bad([](PhysicalParams& p) { p.oam_charge = 0; }));
    CHECK(bad([](PhysicalParams& p) { p.finesse = 0; }));
    CHECK(bad([](PhysicalParams& p) { p.wavelength = std::nan(""); }));
    CHECK(bad([](PhysicalParams& p) { p.input_power = -1e-3; }));
    CHECK(bad([](PhysicalParams& p) { p.temperature = -1; }));
    CHECK(bad([](PhysicalParams& p) { p.cavity_length = std::numeric_limits<double>::infinity(); }));
}

TEST_CASE("detuning mode strings") {
    CHECK(std::string(to_string(DetuningMode::Feedback)) == "FEEDBACK");
    CHECK(detuning_mode_from_string("fixed") == DetuningMode::Fixed);
    CHECK(detuning_mode_from_string("FEEDBACK") == DetuningMode::Feedback);
    CHECK_THROWS_AS(detuning_mode_from_string("servo"), Error);
}
