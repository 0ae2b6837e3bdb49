#include <doctest.h>

#include <cmath>

#include "rovib/constants.hpp"
#include "rovib/model_params.hpp"
#include "rovib/oracles.hpp"
#include "rovib/steady_state.hpp"

using namespace rovib;
using doctest::Approx;

namespace {

DerivedParams fig2() { return derive_params(PhysicalParams::defaults()); }

DerivedParams with_power(double watts) {
    auto p = PhysicalParams::defaults();
    p.input_power = watts;
    return derive_params(p);
}

}  // namespace

TEST_CASE("feedback working point of the design") {
    const auto d = fig2();
    const auto s = steady_state_feedback(d, constants::two_pi * 1e6);
    CHECK(s.photon_number == Approx(624972117.26937497).epsilon(1e-13));
    CHECK(s.a_s * s.a_s == Approx(s.photon_number).epsilon(1e-15));
    CHECK(s.z_s == Approx(d.g_z * s.photon_number / d.omega_z).epsilon(1e-15));
    CHECK(s.phi_s == Approx(-d.g_phi * s.photon_number / d.omega_phi).epsilon(1e-15));
    CHECK(s.p_z_s == 0);
    CHECK(s.L_z_s == 0);
    CHECK(s.effective_detuning == constants::two_pi * 1e6);
    // Feedback and fixed-detuning descriptions describe the same point.
    CHECK(steady_state_residual(d, s.bare_detuning, s.photon_number) < 1e-12);
}

TEST_CASE("feedback steady state edge cases") {
    const auto d0 = with_power(0);
    const auto s0 = steady_state_feedback(d0, constants::two_pi * 1e6);
    CHECK(s0.a_s == 0);
    CHECK(s0.z_s == 0);
    CHECK(s0.phi_s == 0);

    const auto d = fig2();
    const auto s = steady_state_feedback(d, 0.0);
    CHECK(s.a_s == Approx(2 * d.a_in / std::sqrt(d.gamma)).epsilon(1e-14));
}

TEST_CASE("feedback photon number grows with power and falls with |Delta|") {
    double prev = -1;
    for (double watts : {0.0, 1e-5, 1e-4, 1e-3, 5e-3, 2e-2}) {
        const double n = steady_state_feedback(with_power(watts), 6e6).photon_number;
        CHECK(n > prev);
        prev = n;
    }
    const auto d = fig2();
    prev = std::numeric_limits<double>::infinity();
    for (double Delta : {0.0, 1e5, 1e6, 1e7, 1e8}) {
        const double n = steady_state_feedback(d, Delta).photon_number;
        CHECK(n < prev);
        CHECK(steady_state_feedback(d, -Delta).photon_number == n);
        prev = n;
    }
}

TEST_CASE("uncoupled cavity has the Lorentzian single branch") {
    auto d = fig2();
    d.g_z = d.g_phi = 0;
    for (double delta : {0.0, 1e6, -3e7}) {
        const auto b = steady_state_fixed_detuning(d, delta);
        REQUIRE(b.size() == 1);
        CHECK(b[0].photon_number == Approx(d.gamma * d.a_in * d.a_in / (d.gamma * d.gamma / 4 + delta * delta)));
        CHECK(b[0].stable);
    }
}

TEST_CASE("design point has a single branch across [0, 10 gamma] at 1 mW") {
    const auto d = fig2();
    for (int k = 0; k <= 200; ++k) {
        const double delta = 10.0 * d.gamma * k / 200;
        const auto b = steady_state_fixed_detuning(d, delta);
        CHECK(b.size() == 1);
        CHECK(steady_state_residual(d, delta, b[0].photon_number) < 1e-10);
    }
}

TEST_CASE("high drive shows three branches with an unstable middle") {
    const auto d = with_power(2e-2);
    const double delta = 3.0 * d.gamma;
    const auto c = bistability_cubic(d, delta);
    CHECK(c.discriminant() > 0);
    const auto b = steady_state_fixed_detuning(d, delta);
    REQUIRE(b.size() == 3);
    CHECK(b[0].photon_number < b[1].photon_number);
    CHECK(b[1].photon_number < b[2].photon_number);
    CHECK(b[0].stable);
    CHECK_FALSE(b[1].stable);
    CHECK(b[2].stable);
    for (const auto& br : b) {
        CHECK(steady_state_residual(d, delta, br.photon_number) < 1e-10);
        CHECK(br.branch_index == static_cast<int>(&br - b.data()) + 1);
    }
}

TEST_CASE("bistability requires detuning above sqrt(3)/2 gamma") {
    for (double watts : {1e-3, 1e-2, 1e-1, 1.0}) {
        const auto d = with_power(watts);
        for (double frac : {0.0, 0.3, 0.6, 0.85}) {
            CHECK(steady_state_fixed_detuning(d, frac * d.gamma).size() == 1);
        }
    }
}

TEST_CASE("every root satisfies the cubic over a power and detuning grid") {
    for (double watts : {1e-6, 1e-4, 1e-3, 1e-2, 5e-2}) {
        const auto d = with_power(watts);
        for (double frac = -3.0; frac <= 6.0; frac += 0.25) {
            for (const auto& b : steady_state_fixed_detuning(d, frac * d.gamma)) {
                CHECK(b.photon_number > 0);
                CHECK(steady_state_residual(d, frac * d.gamma, b.photon_number) < 1e-10);
            }
        }
    }
}

TEST_CASE("branch counts agree with the brute-force scan") {
    const auto d = fig2();
    const auto map = oracles::brute_cubic_scan(d, 0.0, 3.0 * d.gamma, 15, 1e-4, 2e-2, 15, 50000);
    int multi = 0;
    for (std::size_t i = 0; i < map.deltas.size(); ++i) {
        for (std::size_t j = 0; j < map.powers.size(); ++j) {
            auto p = PhysicalParams::defaults();
            p.input_power = map.powers[j];
            const auto dj = derive_params(p);
            const int n = static_cast<int>(steady_state_fixed_detuning(dj, map.deltas[i]).size());
            CHECK(n == map.at(i, j));
            multi += n == 3;
        }
    }
    CHECK(multi > 0);
}

TEST_CASE("working point picks the lowest branch in fixed mode") {
    auto p = PhysicalParams::defaults();
    p.input_power = 2e-2;
    p.detuning_mode = DetuningMode::Fixed;
    const auto d = derive_params(p);
    p.detuning_value = 2.0 * d.gamma;
    const auto s = working_point(p, d);
    const auto b = steady_state_fixed_detuning(d, p.detuning_value);
    CHECK(s.photon_number == b.front().photon_number);
    CHECK(s.bare_detuning == p.detuning_value);
    CHECK(s.effective_detuning == Approx(p.detuning_value - s.photon_number * s.G));
}
