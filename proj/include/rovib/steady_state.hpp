#pragma once

#include <array>
#include <vector>

#include "rovib/model_params.hpp"

namespace rovib {

// Classical working point. a_s is real and non-negative (input phase chosen
// accordingly); p_z_s and L_z_s vanish identically.
struct SteadyState {
    double a_s = 0;
    double photon_number = 0;
    double z_s = 0;
    double phi_s = 0;
    double p_z_s = 0;
    double L_z_s = 0;
    double effective_detuning = 0;  // Delta = delta - a_s^2 G, rad/s
    double bare_detuning = 0;       // delta, rad/s
    double G = 0;                   // g_z^2/omega_z + g_phi^2/omega_phi, rad/s
};

struct BistabilityBranch {
    double photon_number = 0;
    int branch_index = 1;  // 1-based, ascending photon number
    bool stable = true;
};

double radiation_pressure_shift(const DerivedParams& d);

// Feedback-locked detuning: closed form, no bistability.
SteadyState steady_state_feedback(const DerivedParams& d, double Delta);

// All real non-negative roots n of n[(gamma/2)^2 + (delta - n G)^2] = gamma a_in^2,
// each Newton-polished to a residual below 1e-10 of gamma a_in^2.
std::vector<BistabilityBranch> steady_state_fixed_detuning(const DerivedParams& d, double delta);

// Working point for a given intracavity photon number at bare detuning delta.
SteadyState steady_state_from_photon_number(const DerivedParams& d, double photon_number, double delta);

// Working point used for linearization: the closed form in feedback mode,
// the lowest branch in fixed-detuning mode.
SteadyState working_point(const PhysicalParams& p, const DerivedParams& d);

// Monic cubic in x = n G / gamma: x^3 + c2 x^2 + c1 x + c0.
struct ScaledCubic {
    double c2 = 0, c1 = 0, c0 = 0;
    double eval(double x) const { return ((x + c2) * x + c1) * x + c0; }
    double derivative(double x) const { return (3.0 * x + 2.0 * c2) * x + c1; }
    double discriminant() const;
};
ScaledCubic bistability_cubic(const DerivedParams& d, double delta);

// Relative residual |n[(g/2)^2 + (delta - nG)^2] - g a_in^2| / (g a_in^2).
double steady_state_residual(const DerivedParams& d, double delta, double photon_number);

}  // namespace rovib
