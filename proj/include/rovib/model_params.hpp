#pragma once

#include <string>
#include <vector>

#include "rovib/constants.hpp"

namespace rovib {

enum class DetuningMode {
    Feedback,  // detuning_value is the servo-locked net detuning Delta
    Fixed,     // detuning_value is the bare laser detuning delta
};

const char* to_string(DetuningMode mode) noexcept;
DetuningMode detuning_mode_from_string(const std::string& text);

// SI description of the mirror, cavity, drive and bath. Every frequency
// is an angular frequency in rad/s.
struct PhysicalParams {
    double mass = 1e-9;                        // kg
    double mirror_radius = 15e-6;              // m
    double omega_z = constants::two_pi * 1e6;  // rad/s
    double omega_phi = constants::two_pi * 1e6;
    double Q_z = 1e6;
    double Q_phi = 1e6;
    int oam_charge = 82;
    double cavity_length = 4e-3;  // m
    double finesse = 2.5e4;
    double wavelength = 812.7e-9;  // m
    double input_power = 1e-3;     // W
    DetuningMode detuning_mode = DetuningMode::Feedback;
    double detuning_value = constants::two_pi * 1e6;  // rad/s
    double temperature = 1.0;                         // K

    // Published design point: 1 ug mirror, l = 82, 4 mm cavity, Delta = omega_phi.
    static PhysicalParams defaults() { return {}; }

    // Throws Error(InvalidParams) naming the first violated constraint.
    void validate() const;
};

// Fractional |L - n lambda / 2| / L above which derive_params flags a
// resonance mismatch.
inline constexpr double kResonanceTolerance = 1e-9;

struct DerivedParams {
    double omega_c = 0;            // cavity frequency, rad/s
    long long mode_index = 0;      // n = round(2L / lambda)
    double resonance_error = 0;    // |L - n lambda / 2| / L
    double wave_number = 0;        // 1/m
    double moment_of_inertia = 0;  // kg m^2
    double g_z = 0;                // 1/s
    double g_phi = 0;              // 1/s
    double gamma = 0;              // cavity energy decay rate, 1/s
    double gamma_z = 0;
    double gamma_phi = 0;
    double a_in = 0;  // sqrt(photons / s)

    // Copied through so downstream modules need only this struct.
    double omega_z = 0;
    double omega_phi = 0;

    bool resonance_mismatch() const { return resonance_error > kResonanceTolerance; }
    std::vector<std::string> warnings() const;
};

DerivedParams derive_params(const PhysicalParams& p);

// g_z / g_phi evaluated from the closed-form ratio
// (2 pi / (l lambda)) sqrt(I omega_phi / (M omega_z)).
double coupling_ratio(const DerivedParams& d, const PhysicalParams& p);

}  // namespace rovib
