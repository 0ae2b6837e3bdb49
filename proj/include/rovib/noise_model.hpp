#pragma once

#include <complex>

#include <Eigen/Dense>

#include "rovib/model_params.hpp"

namespace rovib {

enum class Flavor { Raw, Symmetrized, Commutator };

const char* to_string(Flavor f) noexcept;

using NoiseMatrix = Eigen::Matrix<std::complex<double>, 4, 4>;

// <n_i(w) n_j(w')> = 2 pi delta(w + w') C_ij(w).
struct InputCorrelation {
    double omega = 0;
    double temperature = 0;
    Flavor flavor = Flavor::Raw;
    NoiseMatrix C = NoiseMatrix::Zero();
};

// omega * coth(hbar omega / 2 k_B T) with its T -> 0, omega -> 0 and
// large-argument limits taken analytically.
double omega_coth(double omega, double temperature);

// Thermal Brownian kernel (gamma_j / omega_j) omega [1 + coth(hbar omega / 2 k_B T)].
double brownian_spectrum(double omega, double temperature, double gamma_j, double omega_j);

// Brownian kernel in the requested ordering: Raw is the kernel above,
// Symmetrized its even part, Commutator S(w) - S(-w).
double brownian_spectrum(double omega, double temperature, double gamma_j, double omega_j, Flavor flavor);

InputCorrelation input_correlation(double omega, double temperature, const DerivedParams& d, Flavor flavor);

}  // namespace rovib
