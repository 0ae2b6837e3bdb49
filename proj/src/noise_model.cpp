#include "rovib/noise_model.hpp"

#include <cmath>

namespace rovib {

const char* to_string(Flavor f) noexcept {
    switch (f) {
        case Flavor::Raw: return "RAW";
        case Flavor::Symmetrized: return "SYMMETRIZED";
        case Flavor::Commutator: return "COMMUTATOR";
    }
    return "?";
}

double omega_coth(double omega, double temperature) {
    using namespace constants;
    if (temperature == 0.0) return std::abs(omega);
    const double x = hbar * omega / (2.0 * k_boltzmann * temperature);
    if (std::abs(x) < 1e-6) {
        return 2.0 * k_boltzmann * temperature / hbar + hbar * omega * omega / (6.0 * k_boltzmann * temperature);
    }
    if (std::abs(x) > 30.0) return std::abs(omega);
    return omega / std::tanh(x);
}

double brownian_spectrum(double omega, double temperature, double gamma_j, double omega_j) {
    return brownian_spectrum(omega, temperature, gamma_j, omega_j, Flavor::Raw);
}

double brownian_spectrum(double omega, double temperature, double gamma_j, double omega_j, Flavor flavor) {
    const double scale = gamma_j / omega_j;
    switch (flavor) {
        case Flavor::Raw: return scale * (omega + omega_coth(omega, temperature));
        case Flavor::Symmetrized: return scale * omega_coth(omega, temperature);
        case Flavor::Commutator: return 2.0 * scale * omega;
    }
    return 0.0;
}

InputCorrelation input_correlation(double omega, double temperature, const DerivedParams& d, Flavor flavor) {
    InputCorrelation c;
    c.omega = omega;
    c.temperature = temperature;
    c.flavor = flavor;
    switch (flavor) {
        case Flavor::Raw:
            c.C(0, 1) = 1.0;
            break;
        case Flavor::Symmetrized:
            c.C(0, 1) = 0.5;
            c.C(1, 0) = 0.5;
            break;
        case Flavor::Commutator:
            c.C(0, 1) = 1.0;
            c.C(1, 0) = -1.0;
            break;
    }
    c.C(2, 2) = brownian_spectrum(omega, temperature, d.gamma_z, d.omega_z, flavor);
    c.C(3, 3) = brownian_spectrum(omega, temperature, d.gamma_phi, d.omega_phi, flavor);
    return c;
}

}  // namespace rovib
